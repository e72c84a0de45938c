#include "l2l/pipeline.hpp"

#include <ostream>
#include <sstream>

#include <json.hpp>

namespace l2l {

int PipelineResult::parsed_count() const {
    int n = 0;
    for (const SentenceRecord& s : sentences)
        if (s.oracle_expr) ++n;
    return n;
}

int PipelineResult::flagged_count() const {
    int n = 0;
    for (const SentenceRecord& s : sentences)
        if (s.report && !s.report->clean()) ++n;
    return n;
}

PipelineResult run_pipeline(std::string_view text, const PipelineOptions& options) {
    const Grammar& grammar = options.grammar ? *options.grammar : Grammar::built_in();
    PipelineResult result;

    ParagraphResult para = paragraph_to_exprs(text, grammar, options.exec);
    result.table = para.table;
    for (SentenceOutcome& s : para.sentences) {
        SentenceRecord rec;
        rec.span = s.span;
        rec.oracle_expr = s.expr;
        rec.no_parse = s.no_parse;
        rec.ambiguous = s.ambiguous;
        result.sentences.push_back(std::move(rec));
    }

    if (options.use_llm) {
        if (!options.provider) throw Error("pipeline: LLM mode without a provider");
        Canonicalizer canon(grammar);

        // Sequential: each prompt embeds the symbols established by the
        // sentences before it.
        for (std::size_t i = 0; i < result.sentences.size(); ++i) {
            SentenceRecord& rec = result.sentences[i];
            std::vector<SymbolBinding> known;
            int watermark = para.sentences[i].atoms_before;
            for (int a = 0; a < watermark; ++a)
                known.emplace_back(result.table.symbol(a), result.table.phrase(a));
            try {
                LlmTranslation t = translate_sentence(rec.span.text, known, *options.provider,
                                                      options.max_retries, options.sleeper);
                t.sentence_index = static_cast<int>(i);
                rec.translation = std::move(t);
            } catch (const NoExpressionFoundError& e) {
                LlmTranslation t;
                t.sentence_index = static_cast<int>(i);
                t.raw_text = e.raw_text;
                rec.translation = std::move(t);  // empty expr_text -> MALFORMED_OUTPUT
            }
        }

        // Detection is pure per sentence.
        const int n = static_cast<int>(result.sentences.size());
        auto detect_one = [&](int i) {
            SentenceRecord& rec = result.sentences[i];
            if (!rec.translation) return;
            if (rec.oracle_expr)
                rec.report = detect(*rec.translation, *rec.oracle_expr, result.table, canon,
                                    Exec::serial);
            else
                rec.report = detect_without_oracle(*rec.translation, result.table);
        };
        if (options.exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
            for (int i = 0; i < n; ++i) detect_one(i);
        } else {
            for (int i = 0; i < n; ++i) detect_one(i);
        }
    }

    // Per-sentence CNF, conjoined, then simplified (mirrors the per-line
    // loop of the published algorithm and bounds distribution per sentence).
    auto table_ptr = std::make_shared<const AtomTable>(result.table);
    std::vector<ClauseSet> parts;
    for (const SentenceRecord& rec : result.sentences)
        if (rec.oracle_expr)
            parts.push_back(to_cnf(*rec.oracle_expr, table_ptr, options.max_clauses));
    ClauseSet combined = parts.empty() ? ClauseSet::top(table_ptr)
                                       : conjoin(std::span<const ClauseSet>(parts));
    ClauseSet simplified = simplify_cnf(combined);
    if (!equiv(clauses_to_expr(combined), clauses_to_expr(simplified), table_ptr, options.exec,
               options.max_clauses))
        throw Error("internal: simplification changed the formula's semantics");
    result.combined_cnf = std::move(combined);
    result.simplified_cnf = std::move(simplified);
    return result;
}

// ── Rendering ───────────────────────────────────────────────────────────────

std::string render_clauses_infix(const ClauseSet& cs) {
    if (cs.empty()) return "True";
    const AtomTable& table = *cs.table();
    std::string out;
    for (const Clause& c : cs.clauses()) {
        if (!out.empty()) out += " & ";
        if (c.empty()) {
            out += "False";
            continue;
        }
        std::string body;
        for (Literal l : c.literals()) {
            if (!body.empty()) body += " | ";
            if (!l.positive) body += '~';
            body += table.symbol(l.atom);
        }
        if (c.size() > 1 && cs.size() > 1)
            out += "(" + body + ")";
        else
            out += body;
    }
    return out;
}

namespace {

std::string classes_line(const HallucinationReport& r) {
    if (r.classes.empty()) return "(none)";
    std::string out;
    for (HallucinationClass c : r.classes) {
        if (!out.empty()) out += ", ";
        out += to_string(c);
    }
    return out;
}

}  // namespace

std::string render_text(const PipelineResult& result) {
    std::ostringstream out;
    for (const SentenceRecord& rec : result.sentences) {
        out << "sentence " << rec.span.index + 1 << ": " << rec.span.text << '\n';
        if (rec.oracle_expr)
            out << "  oracle: " << print_expr(*rec.oracle_expr, result.table) << '\n';
        else
            out << "  oracle: (no parse) " << rec.no_parse.value_or("") << '\n';
        if (rec.translation) {
            out << "  llm: "
                << (rec.translation->expr_text.empty() ? "(malformed)"
                                                       : rec.translation->expr_text)
                << '\n';
            if (rec.report) {
                out << "  classes: " << classes_line(*rec.report) << '\n';
                if (!rec.report->clean() && !rec.report->corrected_text.empty())
                    out << "  corrected: " << rec.report->corrected_text << '\n';
                if (!rec.report->evidence.empty())
                    out << "  evidence: " << rec.report->evidence << '\n';
            }
        }
    }
    out << "legend:\n";
    for (int i = 0; i < result.table.size(); ++i)
        out << "  " << result.table.symbol(i) << " = \"" << result.table.phrase(i) << "\"\n";
    if (result.combined_cnf) out << "cnf: " << render_clauses_infix(*result.combined_cnf) << '\n';
    if (result.simplified_cnf)
        out << "simplified: " << render_clauses_infix(*result.simplified_cnf) << '\n';
    return out.str();
}

namespace {

nlohmann::ordered_json clauses_json(const ClauseSet& cs) {
    nlohmann::ordered_json out;
    out["vars"] = cs.table()->size();
    nlohmann::ordered_json clauses = nlohmann::ordered_json::array();
    for (const Clause& c : cs.clauses()) {
        nlohmann::ordered_json clause = nlohmann::ordered_json::array();
        for (Literal l : c.literals()) clause.push_back(l.positive ? l.atom + 1 : -(l.atom + 1));
        clauses.push_back(std::move(clause));
    }
    out["clauses"] = std::move(clauses);
    return out;
}

}  // namespace

std::string render_json(const PipelineResult& result) {
    nlohmann::ordered_json doc;
    doc["sentences"] = nlohmann::ordered_json::array();
    for (const SentenceRecord& rec : result.sentences) {
        nlohmann::ordered_json s;
        s["index"] = rec.span.index;
        s["text"] = rec.span.text;
        if (rec.oracle_expr)
            s["oracle_expr"] = print_expr(*rec.oracle_expr, result.table);
        else
            s["oracle_expr"] = nullptr;
        if (rec.no_parse) s["no_parse"] = *rec.no_parse;
        s["ambiguous"] = rec.ambiguous;
        if (rec.translation) {
            nlohmann::ordered_json llm;
            llm["raw_text"] = rec.translation->raw_text;
            if (rec.translation->expr_text.empty())
                llm["expr_text"] = nullptr;
            else
                llm["expr_text"] = rec.translation->expr_text;
            nlohmann::ordered_json classes = nlohmann::ordered_json::array();
            if (rec.report)
                for (HallucinationClass c : rec.report->classes) classes.push_back(to_string(c));
            llm["classes"] = std::move(classes);
            llm["corrected"] = rec.report ? rec.report->corrected_text : "";
            llm["evidence"] = rec.report ? rec.report->evidence : "";
            llm["oracle_unavailable"] = rec.report ? rec.report->oracle_unavailable : false;
            s["llm"] = std::move(llm);
        }
        doc["sentences"].push_back(std::move(s));
    }
    doc["legend"] = nlohmann::ordered_json::array();
    for (int i = 0; i < result.table.size(); ++i)
        doc["legend"].push_back(
            {{"symbol", result.table.symbol(i)}, {"phrase", result.table.phrase(i)}});
    if (result.combined_cnf) doc["cnf"] = clauses_json(*result.combined_cnf);
    if (result.simplified_cnf) doc["simplified_cnf"] = clauses_json(*result.simplified_cnf);
    return doc.dump(2) + "\n";
}

void write_feedback(const PipelineResult& result, std::ostream& out) {
    std::vector<HallucinationReport> reports;
    std::vector<SentenceSpan> spans;
    std::vector<LlmTranslation> translations;
    for (const SentenceRecord& rec : result.sentences) {
        if (!rec.translation || !rec.report) continue;
        reports.push_back(*rec.report);
        spans.push_back(rec.span);
        translations.push_back(*rec.translation);
    }
    emit_feedback(reports, spans, translations, out);
}

}  // namespace l2l
