#pragma once

// Compares model translations against the frontend's expression for the
// same sentence, classifies discrepancies, and emits the fine-tuning
// feedback records. The frontend output is ground truth by definition:
// whenever the two disagree, the corrected text is the frontend expression.
//
// The semantic check decides IF a hallucination exists (equivalence under
// symbol alignment); structural diffing only names its KIND, so a
// misclassification can never mask a detection.

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "l2l/ast.hpp"
#include "l2l/english.hpp"
#include "l2l/llm.hpp"
#include "l2l/sat.hpp"

namespace l2l {

// ── Classes ─────────────────────────────────────────────────────────────────

enum class HallucinationClass {
    MALFORMED_OUTPUT,
    EXTRA_OPERATOR,
    MISSING_OPERATOR,
    VARIABLE_REUSE_ERROR,
    MISCLASSIFIED_LITERAL,
    VARIABLE_COUNT_MISMATCH,
    SEMANTIC_MISMATCH,
};

const char* to_string(HallucinationClass c);

// ── Alignment ───────────────────────────────────────────────────────────────

enum class AlignMethod { legend, order };

struct AlignmentMap {
    std::vector<std::pair<std::string, AtomId>> pairs;  // injective on symbols
    AlignMethod method = AlignMethod::order;
    std::vector<std::string> notes;  // unmatched phrases, gaps

    std::optional<AtomId> lookup(std::string_view symbol) const;
};

// Maps the translation's symbols onto atom ids. With a legend, each legend
// phrase is canonicalized and matched against the table; without one,
// symbols map to `oracle_atom_order` by order of first appearance in the
// expression text. Gaps never throw; they surface as notes and later as
// report evidence.
AlignmentMap align_symbols(const LlmTranslation& t, const AtomTable& table,
                           const Canonicalizer& canon,
                           std::span<const AtomId> oracle_atom_order = {});

// ── Reports ─────────────────────────────────────────────────────────────────

struct HallucinationReport {
    int sentence_index = 0;
    std::set<HallucinationClass> classes;
    std::optional<Expr> llm_expr;     // parsed model expression, when it parses
    std::optional<Expr> oracle_expr;  // absent when the frontend could not parse
    std::string corrected_text;       // printed frontend expression (function-call)
    std::string evidence;
    bool oracle_unavailable = false;

    bool clean() const { return classes.empty(); }
};

// Full detection for one sentence. Never throws on adversarial model
// output: parse failures become MALFORMED_OUTPUT, alignment gaps become
// VARIABLE_COUNT_MISMATCH / VARIABLE_REUSE_ERROR, and inequivalence is
// refined into operator/literal classes (SEMANTIC_MISMATCH as the
// fallback).
HallucinationReport detect(const LlmTranslation& t, const Expr& oracle,
                           const AtomTable& table, const Canonicalizer& canon,
                           Exec exec = Exec::parallel);

// Degraded mode for sentences the frontend could not parse: syntax-only
// validation of the model output, marked oracle_unavailable.
HallucinationReport detect_without_oracle(const LlmTranslation& t, const AtomTable& table);

// ── Feedback records ────────────────────────────────────────────────────────

struct FeedbackRecord {
    std::string input;                 // original sentence
    std::string hallucinated_output;   // raw model text
    std::string corrected_output;      // printed frontend expression
    std::vector<std::string> classes;
};

// One JSONL line per report with non-empty classes, in sentence order; keys
// are exactly input / hallucinated_output / corrected_output / classes.
// Reports with no usable corrected output (frontend unavailable and model
// text malformed) are skipped — the record fields must all be non-empty.
// Inputs are index-aligned.
void emit_feedback(std::span<const HallucinationReport> reports,
                   std::span<const SentenceSpan> sentences,
                   std::span<const LlmTranslation> translations, std::ostream& out);

std::vector<FeedbackRecord> feedback_records(std::span<const HallucinationReport> reports,
                                             std::span<const SentenceSpan> sentences,
                                             std::span<const LlmTranslation> translations);

}  // namespace l2l
