// l2l — batch translation of restricted English into propositional logic
// and simplified CNF, with model-output hallucination detection against the
// deterministic grammar frontend.
//
// Exit codes: 0 success (detected hallucinations are data, not failures),
// 1 usage or input-format error, 2 nothing parseable and no model to fall
// back on, 3 provider failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "l2l/dimacs.hpp"
#include "l2l/pipeline.hpp"

namespace {

using namespace l2l;

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    return out;
}

// Options shared by the subcommands that run the frontend / the provider.
struct CommonOpts {
    std::string input;
    std::string grammar_path;
    std::string provider = "mock";
    std::string fixtures_path;
    std::string base_url;
    std::string model;
    std::string format = "text";
    std::string emit_feedback_path;
    std::string emit_dimacs_path;
    std::size_t max_clauses = kDefaultMaxClauses;
    bool no_llm = false;
};

void add_input_option(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("input", o.input, "input file (defaults to stdin)");
}

void add_grammar_option(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--grammar", o.grammar_path, "grammar file overriding the built-in one");
}

void add_provider_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--provider", o.provider, "mock|http")
        ->check(CLI::IsMember({"mock", "http"}));
    cmd->add_option("--fixtures", o.fixtures_path, "fixture JSON for the mock provider");
    cmd->add_option("--base-url", o.base_url, "chat-completion endpoint URL");
    cmd->add_option("--model", o.model, "model name sent in the request body");
}

std::unique_ptr<Grammar> load_grammar(const CommonOpts& o) {
    if (o.grammar_path.empty()) return nullptr;  // built-in
    return std::make_unique<Grammar>(Grammar::from_file(o.grammar_path));
}

std::unique_ptr<Provider> make_provider(const CommonOpts& o) {
    if (o.provider == "http") {
        if (o.base_url.empty()) throw CLI::ValidationError("--provider http requires --base-url");
        ProviderConfig config;
        config.base_url = o.base_url;
        config.model_name = o.model.empty() ? "default" : o.model;
        return std::make_unique<HttpProvider>(config);
    }
    if (!o.fixtures_path.empty())
        return std::make_unique<MockProvider>(MockProvider::from_json_file(o.fixtures_path));
    return std::make_unique<MockProvider>();
}

// Expression-line input (the `parse` / `translate` output format): one
// expression per line, `where X represents "..."` legend lines anywhere,
// '#' comment lines ignored.
struct ExprInput {
    std::shared_ptr<AtomTable> table = std::make_shared<AtomTable>();
    std::vector<Expr> exprs;
};

bool is_where_line(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    return line.compare(i, 6, "where ") == 0;
}

ExprInput read_expr_lines(const std::string& text) {
    ExprInput in;
    for (const auto& [symbol, phrase] : extract_legend(text))
        if (!in.table->find_symbol(symbol)) in.table->add(symbol, phrase);

    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view sv = line;
        while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.front())))
            sv.remove_prefix(1);
        if (sv.empty() || sv.front() == '#' || is_where_line(line)) continue;
        in.exprs.push_back(parse_expr(line, *in.table, SymbolMode::register_new));
    }
    return in;
}

ClauseSet convert_all(const ExprInput& in, std::size_t max_clauses) {
    std::shared_ptr<const AtomTable> table = in.table;
    std::vector<ClauseSet> parts;
    parts.reserve(in.exprs.size());
    for (const Expr& e : in.exprs) parts.push_back(to_cnf(e, table, max_clauses));
    if (parts.empty()) return ClauseSet::top(table);
    return conjoin(parts);
}

// ── Subcommand bodies ───────────────────────────────────────────────────────

int run_pipeline_cmd(const CommonOpts& o, bool force_llm) {
    std::string text = read_input(o.input);
    auto grammar = load_grammar(o);
    std::unique_ptr<Provider> provider;

    PipelineOptions options;
    options.grammar = grammar.get();
    options.use_llm = force_llm || !o.no_llm;
    options.max_clauses = o.max_clauses;
    if (options.use_llm) {
        provider = make_provider(o);
        options.provider = provider.get();
    }

    PipelineResult result;
    try {
        result = run_pipeline(text, options);
    } catch (const AuthError& e) {
        std::cerr << "provider error: " << e.what() << '\n';
        return 3;
    } catch (const TransportError& e) {
        std::cerr << "provider error: " << e.what() << '\n';
        return 3;
    }

    if (!o.emit_feedback_path.empty()) {
        auto out = open_output(o.emit_feedback_path);
        write_feedback(result, out);
    }
    if (!o.emit_dimacs_path.empty()) {
        auto out = open_output(o.emit_dimacs_path);
        export_dimacs(*result.simplified_cnf, out);
    }
    std::cout << (o.format == "json" ? render_json(result) : render_text(result));

    if (!options.use_llm && !result.sentences.empty() && result.parsed_count() == 0)
        return 2;
    return 0;
}

int run_parse_cmd(const CommonOpts& o) {
    std::string text = read_input(o.input);
    auto grammar = load_grammar(o);
    ParagraphResult result =
        paragraph_to_exprs(text, grammar ? *grammar : Grammar::built_in());

    for (const SentenceOutcome& s : result.sentences) {
        if (s.expr) {
            if (s.ambiguous)
                std::cerr << "warning: ambiguous parse for sentence " << s.span.index + 1
                          << " (grammar bug?)\n";
            std::cout << print_expr(*s.expr, result.table) << '\n';
        } else {
            std::cout << "# no parse (sentence " << s.span.index + 1
                      << "): " << s.no_parse.value_or("") << '\n';
        }
    }
    for (int i = 0; i < result.table.size(); ++i)
        std::cout << "where " << result.table.symbol(i) << " represents \""
                  << result.table.phrase(i) << "\"\n";

    if (!result.sentences.empty() && result.parsed_count() == 0) return 2;
    return 0;
}

int run_translate_cmd(const CommonOpts& o) {
    std::string text = read_input(o.input);
    auto grammar = load_grammar(o);
    auto provider = make_provider(o);

    PipelineOptions options;
    options.grammar = grammar.get();
    options.use_llm = true;
    options.provider = provider.get();
    options.max_clauses = o.max_clauses;

    PipelineResult result;
    try {
        result = run_pipeline(text, options);
    } catch (const AuthError& e) {
        std::cerr << "provider error: " << e.what() << '\n';
        return 3;
    } catch (const TransportError& e) {
        std::cerr << "provider error: " << e.what() << '\n';
        return 3;
    }

    for (const SentenceRecord& rec : result.sentences) {
        if (!rec.translation || rec.translation->expr_text.empty()) {
            std::cout << "# no expression (sentence " << rec.span.index + 1 << ")\n";
            continue;
        }
        std::cout << rec.translation->expr_text << '\n';
        for (const auto& [symbol, phrase] : rec.translation->legend)
            std::cout << "where " << symbol << " represents \"" << phrase << "\"\n";
    }
    return 0;
}

int run_to_cnf_cmd(const CommonOpts& o, const std::string& format) {
    ExprInput in = read_expr_lines(read_input(o.input));
    ClauseSet cs = convert_all(in, o.max_clauses);
    if (format == "dimacs")
        export_dimacs(cs, std::cout);
    else
        std::cout << render_clauses_infix(cs) << '\n';
    return 0;
}

int run_simplify_cmd(const CommonOpts& o) {
    std::string text = read_input(o.input);
    std::istringstream is(text);
    ClauseSet cs = import_dimacs(is);
    export_dimacs(simplify_cnf(cs), std::cout);
    return 0;
}

int run_export_dimacs_cmd(const CommonOpts& o) {
    ExprInput in = read_expr_lines(read_input(o.input));
    export_dimacs(convert_all(in, o.max_clauses), std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"restricted English -> propositional logic -> simplified CNF, with "
                 "model-output hallucination detection"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string to_cnf_format = "text";

    CLI::App* pipeline = app.add_subcommand("pipeline", "run the full pipeline");
    add_input_option(pipeline, o);
    add_grammar_option(pipeline, o);
    add_provider_options(pipeline, o);
    pipeline->add_option("--format", o.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    pipeline->add_flag("--no-llm", o.no_llm, "frontend only; fully deterministic");
    pipeline->add_option("--emit-feedback", o.emit_feedback_path,
                         "write the fine-tuning JSONL dataset here");
    pipeline->add_option("--emit-dimacs", o.emit_dimacs_path,
                         "write the simplified CNF in DIMACS format here");
    pipeline->add_option("--max-clauses", o.max_clauses, "CNF conversion clause cap");

    CLI::App* parse = app.add_subcommand("parse", "frontend only: sentences to expressions");
    add_input_option(parse, o);
    add_grammar_option(parse, o);

    CLI::App* translate =
        app.add_subcommand("translate", "model translation per sentence (no detection output)");
    add_input_option(translate, o);
    add_grammar_option(translate, o);
    add_provider_options(translate, o);

    CLI::App* to_cnf_cmd = app.add_subcommand("to-cnf", "expression lines to CNF");
    add_input_option(to_cnf_cmd, o);
    to_cnf_cmd->add_option("--format", to_cnf_format, "text|dimacs")
        ->check(CLI::IsMember({"text", "dimacs"}));
    to_cnf_cmd->add_option("--max-clauses", o.max_clauses, "CNF conversion clause cap");

    CLI::App* simplify = app.add_subcommand("simplify", "simplify a DIMACS clause set");
    add_input_option(simplify, o);

    CLI::App* detect =
        app.add_subcommand("detect", "translate with the model and report hallucinations");
    add_input_option(detect, o);
    add_grammar_option(detect, o);
    add_provider_options(detect, o);
    detect->add_option("--format", o.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    detect->add_option("--emit-feedback", o.emit_feedback_path,
                       "write the fine-tuning JSONL dataset here");
    detect->add_option("--max-clauses", o.max_clauses, "CNF conversion clause cap");

    CLI::App* exportd = app.add_subcommand("export-dimacs", "expression lines to DIMACS");
    add_input_option(exportd, o);
    exportd->add_option("--max-clauses", o.max_clauses, "CNF conversion clause cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (pipeline->parsed()) return run_pipeline_cmd(o, /*force_llm=*/false);
        if (parse->parsed()) return run_parse_cmd(o);
        if (translate->parsed()) return run_translate_cmd(o);
        if (to_cnf_cmd->parsed()) return run_to_cnf_cmd(o, to_cnf_format);
        if (simplify->parsed()) return run_simplify_cmd(o);
        if (detect->parsed()) return run_pipeline_cmd(o, /*force_llm=*/true);
        if (exportd->parsed()) return run_export_dimacs_cmd(o);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
