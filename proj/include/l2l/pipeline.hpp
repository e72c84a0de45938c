#pragma once

// End-to-end orchestration: sentence split -> frontend parse -> optional
// model translation + hallucination detection -> per-sentence CNF ->
// conjunction -> simplification. The CLI and the test suites both drive
// the pipeline through this header.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l2l/ast.hpp"
#include "l2l/cnf.hpp"
#include "l2l/english.hpp"
#include "l2l/hallucination.hpp"
#include "l2l/llm.hpp"
#include "l2l/sat.hpp"

namespace l2l {

struct PipelineOptions {
    const Grammar* grammar = nullptr;  // null = the built-in grammar
    bool use_llm = false;
    Provider* provider = nullptr;      // required when use_llm
    int max_retries = 2;
    Sleeper sleeper;                   // injected by tests; defaults to real sleep
    std::size_t max_clauses = kDefaultMaxClauses;
    Exec exec = Exec::parallel;
};

struct SentenceRecord {
    SentenceSpan span;
    std::optional<Expr> oracle_expr;
    std::optional<std::string> no_parse;
    bool ambiguous = false;
    std::optional<LlmTranslation> translation;
    std::optional<HallucinationReport> report;
};

struct PipelineResult {
    std::vector<SentenceRecord> sentences;
    AtomTable table;
    // Conjunction of the per-sentence CNFs, and its simplification. The two
    // are checked for equivalence before the result is returned.
    std::optional<ClauseSet> combined_cnf;
    std::optional<ClauseSet> simplified_cnf;

    int parsed_count() const;
    int flagged_count() const;
};

// Translation is sequential (the known-symbol legend threads forward
// sentence by sentence); frontend parsing and detection run in parallel
// under Exec::parallel with identical results.
PipelineResult run_pipeline(std::string_view text, const PipelineOptions& options);

std::string render_text(const PipelineResult& result);
std::string render_json(const PipelineResult& result);  // schema: assets/pipeline_result.schema.json

// The clause set in the infix notation (`~P & (Q | R)`); True/False for the
// degenerate sets.
std::string render_clauses_infix(const ClauseSet& cs);

void write_feedback(const PipelineResult& result, std::ostream& out);

}  // namespace l2l
