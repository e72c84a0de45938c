#include "l2l/hallucination.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "l2l/cnf.hpp"

namespace l2l {

const char* to_string(HallucinationClass c) {
    switch (c) {
        case HallucinationClass::MALFORMED_OUTPUT: return "MALFORMED_OUTPUT";
        case HallucinationClass::EXTRA_OPERATOR: return "EXTRA_OPERATOR";
        case HallucinationClass::MISSING_OPERATOR: return "MISSING_OPERATOR";
        case HallucinationClass::VARIABLE_REUSE_ERROR: return "VARIABLE_REUSE_ERROR";
        case HallucinationClass::MISCLASSIFIED_LITERAL: return "MISCLASSIFIED_LITERAL";
        case HallucinationClass::VARIABLE_COUNT_MISMATCH: return "VARIABLE_COUNT_MISMATCH";
        case HallucinationClass::SEMANTIC_MISMATCH: return "SEMANTIC_MISMATCH";
    }
    return "?";
}

std::optional<AtomId> AlignmentMap::lookup(std::string_view symbol) const {
    for (const auto& [s, id] : pairs)
        if (s == symbol) return id;
    return std::nullopt;
}

// ── align_symbols ───────────────────────────────────────────────────────────

namespace {

// Symbols of the expression text in order of first appearance, parsed into
// a scratch table (the model's namespace is independent of the pipeline's).
struct ParsedLlmExpr {
    Expr expr;
    AtomTable scratch;
    std::vector<std::string> symbols;  // appearance order
};

std::optional<ParsedLlmExpr> parse_llm_expr(const std::string& expr_text,
                                            std::string* error = nullptr) {
    ParsedLlmExpr out;
    try {
        out.expr = parse_expr(expr_text, out.scratch, SymbolMode::register_new);
    } catch (const Error& e) {
        if (error) *error = e.what();
        return std::nullopt;
    }
    for (AtomId id : out.expr.atoms_in_appearance_order())
        out.symbols.push_back(out.scratch.symbol(id));
    return out;
}

}  // namespace

AlignmentMap align_symbols(const LlmTranslation& t, const AtomTable& table,
                           const Canonicalizer& canon,
                           std::span<const AtomId> oracle_atom_order) {
    AlignmentMap map;
    auto parsed = parse_llm_expr(t.expr_text);
    std::vector<std::string> symbols = parsed ? parsed->symbols : std::vector<std::string>{};

    auto already_paired = [&](std::string_view sym) { return map.lookup(sym).has_value(); };

    // Binding hierarchy: the legend's own declarations, then exact symbol
    // names (prompt-supplied known atoms are reused by name), then position.
    map.method = t.legend.empty() ? AlignMethod::order : AlignMethod::legend;

    for (const auto& [symbol, phrase] : t.legend) {
        CanonicalAtom atom = canon.canonicalize(phrase);
        if (auto id = table.find_phrase(atom.phrase)) {
            map.pairs.emplace_back(symbol, *id);
            if (atom.polarity_extracted)
                map.notes.push_back("legend phrase for " + symbol + " is negated");
        } else {
            map.notes.push_back("legend phrase for " + symbol + " (\"" + phrase +
                                "\") matches no known proposition");
        }
    }

    for (const std::string& sym : symbols) {
        if (already_paired(sym)) continue;
        bool in_legend = std::any_of(t.legend.begin(), t.legend.end(),
                                     [&](const SymbolBinding& b) { return b.first == sym; });
        if (in_legend) continue;  // its phrase failed to match; stays a gap
        if (auto id = table.find_symbol(sym)) map.pairs.emplace_back(sym, *id);
    }

    if (map.method == AlignMethod::order) {
        std::vector<AtomId> order(oracle_atom_order.begin(), oracle_atom_order.end());
        if (order.empty())
            for (int i = 0; i < table.size(); ++i) order.push_back(i);
        std::size_t next = 0;
        auto claimed = [&](AtomId id) {
            return std::any_of(map.pairs.begin(), map.pairs.end(),
                               [&](const auto& p) { return p.second == id; });
        };
        for (const std::string& sym : symbols) {
            if (already_paired(sym)) continue;
            while (next < order.size() && claimed(order[next])) ++next;
            if (next < order.size())
                map.pairs.emplace_back(sym, order[next++]);
            else
                map.notes.push_back("no proposition left for symbol " + sym);
        }
    }

    for (const std::string& sym : symbols)
        if (!already_paired(sym)) map.notes.push_back("symbol " + sym + " is unaligned");
    return map;
}

// ── detect ──────────────────────────────────────────────────────────────────

namespace {

// Connective counts; negation is excluded here because literal polarity is
// scored separately (a Not over an atom is a literal, not structure).
std::map<Op, int> operator_multiset(const Expr& e) {
    std::map<Op, int> counts;
    auto walk = [&](auto&& self, const Expr& x) -> void {
        switch (x.op()) {
            case Op::And:
            case Op::Or:
            case Op::Implies:
            case Op::Iff:
                ++counts[x.op()];
                break;
            default:
                break;
        }
        for (const Expr& c : x.children()) self(self, c);
    };
    walk(walk, e);
    return counts;
}

// Per-atom polarity bitmask (1 = positive occurrence, 2 = negative) of the
// NNF form.
std::map<AtomId, int> literal_polarities(const Expr& e) {
    std::map<AtomId, int> out;
    Expr n = to_nnf(e);
    auto walk = [&](auto&& self, const Expr& x) -> void {
        if (x.op() == Op::Atom) {
            out[x.atom_id()] |= 1;
            return;
        }
        if (x.op() == Op::Not) {
            out[x.child(0).atom_id()] |= 2;
            return;
        }
        for (const Expr& c : x.children()) self(self, c);
    };
    walk(walk, n);
    return out;
}

// Rebuilds the model expression over the pipeline's atom ids. Symbols the
// alignment could not place get fresh ids past the table, so inequivalence
// with the frontend expression is preserved.
Expr substitute(const Expr& e, const AtomTable& scratch, const AlignmentMap& align,
                std::map<std::string, AtomId>& fresh, int& next_fresh) {
    if (e.op() == Op::Atom) {
        const std::string& sym = scratch.symbol(e.atom_id());
        if (auto id = align.lookup(sym)) return Expr::atom(*id);
        auto it = fresh.find(sym);
        if (it == fresh.end()) it = fresh.emplace(sym, next_fresh++).first;
        return Expr::atom(it->second);
    }
    if (e.op() == Op::Const) return e;
    std::vector<Expr> children;
    children.reserve(e.children().size());
    for (const Expr& c : e.children())
        children.push_back(substitute(c, scratch, align, fresh, next_fresh));
    switch (e.op()) {
        case Op::Not: return Expr::negate(std::move(children[0]));
        case Op::And: return Expr::conj(std::move(children));
        case Op::Or: return Expr::disj(std::move(children));
        case Op::Implies: return Expr::implies(std::move(children[0]), std::move(children[1]));
        case Op::Iff: return Expr::iff(std::move(children[0]), std::move(children[1]));
        default: return e;
    }
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (const std::string& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

}  // namespace

HallucinationReport detect(const LlmTranslation& t, const Expr& oracle,
                           const AtomTable& table, const Canonicalizer& canon, Exec exec) {
    HallucinationReport report;
    report.sentence_index = t.sentence_index;
    report.oracle_expr = oracle;
    report.corrected_text = print_expr(oracle, table, PrintStyle::function_call);

    std::vector<std::string> evidence;

    // (1) Syntax: a response with no parseable expression is malformed, and
    // nothing further can be checked.
    std::string parse_error;
    auto parsed = parse_llm_expr(t.expr_text, &parse_error);
    if (t.expr_text.empty() || !parsed) {
        report.classes.insert(HallucinationClass::MALFORMED_OUTPUT);
        evidence.push_back(t.expr_text.empty() ? "no expression line in model output"
                                               : parse_error);
        report.evidence = join(evidence, "; ");
        return report;
    }
    report.llm_expr = parsed->expr;

    // (2) Alignment.
    std::vector<AtomId> oracle_order = oracle.atoms_in_appearance_order();
    AlignmentMap align = align_symbols(t, table, canon, oracle_order);
    for (const std::string& n : align.notes) evidence.push_back(n);

    const std::vector<AtomId> oracle_atoms = oracle.atoms();
    const std::size_t n_symbols = parsed->symbols.size();
    bool unaligned_symbol = false;
    std::map<AtomId, int> image_counts;
    for (const std::string& sym : parsed->symbols) {
        if (auto id = align.lookup(sym))
            ++image_counts[*id];
        else
            unaligned_symbol = true;
    }
    bool spurious_split =
        std::any_of(image_counts.begin(), image_counts.end(),
                    [](const auto& kv) { return kv.second > 1; });
    bool merged = !unaligned_symbol && n_symbols < oracle_atoms.size() &&
                  parsed->expr.atom_occurrences() == oracle.atom_occurrences();

    // Reuse errors (merged or split variables) are positive findings and
    // stack with the structural classes below; a bare count mismatch is the
    // weaker fallback signal.
    std::set<HallucinationClass> reuse_classes, count_classes;
    if (spurious_split || merged)
        reuse_classes.insert(HallucinationClass::VARIABLE_REUSE_ERROR);
    else if (unaligned_symbol || n_symbols != oracle_atoms.size())
        count_classes.insert(HallucinationClass::VARIABLE_COUNT_MISMATCH);
    std::set<HallucinationClass> alignment_classes = reuse_classes;
    alignment_classes.insert(count_classes.begin(), count_classes.end());

    // (3) Semantics under the alignment.
    AtomTable extended = table;
    std::map<std::string, AtomId> fresh;
    int next_fresh = table.size();
    Expr aligned = substitute(parsed->expr, parsed->scratch, align, fresh, next_fresh);
    for (const auto& [sym, id] : fresh)
        extended.add_auto("(unaligned) " + sym + " #" + std::to_string(id));
    auto extended_ptr = std::make_shared<const AtomTable>(std::move(extended));
    bool equivalent = equiv(aligned, oracle, extended_ptr, exec);

    if (equivalent && alignment_classes.empty()) {
        report.evidence = join(evidence, "; ");
        return report;  // clean
    }

    if (!equivalent) {
        evidence.push_back("not equivalent to " + report.corrected_text);
        std::set<HallucinationClass> structural;
        std::map<Op, int> llm_ops = operator_multiset(parsed->expr);
        std::map<Op, int> oracle_ops = operator_multiset(oracle);
        for (Op op : {Op::And, Op::Or, Op::Implies, Op::Iff}) {
            int d = llm_ops[op] - oracle_ops[op];
            if (d > 0) {
                structural.insert(HallucinationClass::EXTRA_OPERATOR);
                evidence.push_back(std::string("extra ") + op_name(op) + " x" +
                                   std::to_string(d));
            } else if (d < 0) {
                structural.insert(HallucinationClass::MISSING_OPERATOR);
                evidence.push_back(std::string("missing ") + op_name(op) + " x" +
                                   std::to_string(-d));
            }
        }
        std::map<AtomId, int> llm_pol = literal_polarities(aligned);
        std::map<AtomId, int> oracle_pol = literal_polarities(oracle);
        for (const auto& [atom, mask] : llm_pol) {
            auto it = oracle_pol.find(atom);
            if (it == oracle_pol.end()) continue;  // unmatched atoms are a count issue
            if (it->second != mask) {
                structural.insert(HallucinationClass::MISCLASSIFIED_LITERAL);
                evidence.push_back("literal polarity differs on " + table.symbol(atom));
            }
        }
        structural.insert(reuse_classes.begin(), reuse_classes.end());
        if (structural.empty()) structural = count_classes;
        if (structural.empty()) structural.insert(HallucinationClass::SEMANTIC_MISMATCH);
        report.classes = std::move(structural);
    } else {
        report.classes = std::move(alignment_classes);
    }

    report.evidence = join(evidence, "; ");
    return report;
}

HallucinationReport detect_without_oracle(const LlmTranslation& t, const AtomTable& table) {
    (void)table;
    HallucinationReport report;
    report.sentence_index = t.sentence_index;
    report.oracle_unavailable = true;

    std::string parse_error;
    auto parsed = parse_llm_expr(t.expr_text, &parse_error);
    if (t.expr_text.empty() || !parsed) {
        report.classes.insert(HallucinationClass::MALFORMED_OUTPUT);
        report.evidence = "oracle unavailable; " +
                          (t.expr_text.empty() ? std::string("no expression line in model output")
                                               : parse_error);
        return report;
    }
    // Syntax-only validation: the model text stands, flagged as unchecked.
    report.llm_expr = parsed->expr;
    report.corrected_text = t.expr_text;
    report.evidence = "oracle unavailable; syntax-only check";
    return report;
}

// ── Feedback ────────────────────────────────────────────────────────────────

std::vector<FeedbackRecord> feedback_records(std::span<const HallucinationReport> reports,
                                             std::span<const SentenceSpan> sentences,
                                             std::span<const LlmTranslation> translations) {
    std::vector<FeedbackRecord> records;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const HallucinationReport& r = reports[i];
        if (r.clean()) continue;
        if (r.corrected_text.empty()) continue;  // nothing correct to learn from
        FeedbackRecord rec;
        rec.input = sentences[i].text;
        rec.hallucinated_output = translations[i].raw_text;
        rec.corrected_output = r.corrected_text;
        for (HallucinationClass c : r.classes) rec.classes.emplace_back(to_string(c));
        records.push_back(std::move(rec));
    }
    return records;
}

void emit_feedback(std::span<const HallucinationReport> reports,
                   std::span<const SentenceSpan> sentences,
                   std::span<const LlmTranslation> translations, std::ostream& out) {
    for (const FeedbackRecord& rec : feedback_records(reports, sentences, translations)) {
        nlohmann::ordered_json line = {
            {"input", rec.input},
            {"hallucinated_output", rec.hallucinated_output},
            {"corrected_output", rec.corrected_output},
            {"classes", rec.classes},
        };
        out << line.dump() << '\n';
    }
}

}  // namespace l2l
