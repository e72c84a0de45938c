#pragma once

// The deterministic oracle: a controlled-English fragment parsed with a
// context-free grammar. Paragraphs split into sentences, each sentence
// parses to a tree rooted at "S", and trees map to expressions with atoms
// canonicalized for cross-sentence variable reuse.
//
// Grammar files hold one production per line:
//
//     LHS -> RHS1 RHS2 ... | ALT1 ALT2 ...
//
// Terminals are quoted ('or', 'not'; \' escapes an apostrophe); comment
// lines start with '#'. Uppercase nonterminals appear as parse-tree labels;
// lowercase ones are structural helpers spliced out of the tree. Tokens not
// covered by the lexicon are tagged NOUN; verbs, auxiliaries, determiners
// and negators are closed classes.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l2l/ast.hpp"
#include "l2l/error.hpp"
#include "l2l/sat.hpp"  // Exec

namespace l2l {

// ── Sentence splitting ──────────────────────────────────────────────────────

struct SentenceSpan {
    std::string text;       // trimmed, trailing punctuation retained
    int index = 0;          // 0-based position in the paragraph
    std::size_t begin = 0;  // byte offsets into the original text
    std::size_t end = 0;
};

// Splits at '.', '!', '?' followed by whitespace or end of input. A fixed
// abbreviation list (e.g., i.e., etc., Mr., Dr., vs.) never terminates a
// sentence. Empty spans are dropped.
std::vector<SentenceSpan> split_sentences(std::string_view text);

// ── Tokens ──────────────────────────────────────────────────────────────────

struct Token {
    std::string text;   // as written
    std::string lower;  // lexicon lookup key
    std::size_t begin = 0, end = 0;
};

// Words are maximal [A-Za-z0-9_'-]+ runs with a trailing "n't" split off as
// its own token; every other non-space character is a one-character token.
std::vector<Token> tokenize_words(std::string_view text);

// ── Grammar ─────────────────────────────────────────────────────────────────

struct GrammarError : Error {
    int line_no;
    GrammarError(int line_no_, const std::string& message)
        : Error("grammar line " + std::to_string(line_no_) + ": " + message),
          line_no(line_no_) {}
};

struct GrammarSymbol {
    bool terminal = false;
    std::string text;  // terminal word (lowercase) or nonterminal name
    bool operator==(const GrammarSymbol&) const = default;
};

struct Production {
    std::string lhs;
    std::vector<GrammarSymbol> rhs;  // never empty
};

class Grammar {
public:
    static Grammar from_text(std::string_view text);
    static Grammar from_file(const std::string& path);
    // The grammar compiled into the binary from the shipped asset.
    static const Grammar& built_in();

    const std::vector<Production>& productions() const { return productions_; }
    const std::string& start_symbol() const { return start_; }

    // Preterminal tags a word carries in the lexicon; empty for unknown
    // words (which the parser tags NOUN).
    std::vector<std::string> lexical_tags(std::string_view lower_word) const;
    bool is_nonterminal(std::string_view name) const;
    // Words listed under one preterminal, e.g. words_of("DET").
    std::vector<std::string> words_of(std::string_view preterminal) const;

    // Tree labels are the uppercase nonterminals; lowercase helpers are
    // spliced out during tree extraction.
    static bool is_visible_label(std::string_view name);

private:
    std::vector<Production> productions_;
    std::string start_ = "S";
};

// ── Parse trees ─────────────────────────────────────────────────────────────

struct ParseTree {
    std::string label;               // empty for leaves
    std::string token;               // leaf word, as written in the sentence
    std::vector<ParseTree> children;

    bool is_leaf() const { return label.empty(); }
    // Leaf tokens, left to right.
    std::vector<std::string> leaf_tokens() const;
};

struct NoParseError : Error {
    std::string sentence;
    int furthest_token;  // index of the furthest token the parser reached
    NoParseError(std::string sentence_, int furthest_token_, const std::string& near)
        : Error("sentence outside the controlled fragment (stuck near \"" + near + "\"): " +
                sentence_),
          sentence(std::move(sentence_)),
          furthest_token(furthest_token_) {}
};

struct SentenceParse {
    ParseTree tree;        // first parse in derivation order
    bool ambiguous = false;  // more than one parse exists (grammar bug)
};

// Parses one sentence under the grammar. Throws NoParseError when the
// sentence is outside the fragment.
SentenceParse parse_sentence(const SentenceSpan& sentence, const Grammar& grammar);

// ── Canonical atoms ─────────────────────────────────────────────────────────

struct CanonicalAtom {
    std::string phrase;             // lowercase, determiners stripped, positive polarity
    bool polarity_extracted = false;  // true when the source statement was negated
};

// Canonicalizes free-form phrase text (legend strings, fixture phrases)
// with the grammar's closed word classes: determiners drop, negators drop
// (recording polarity), and a do-support auxiliary drops with its negator.
class Canonicalizer {
public:
    explicit Canonicalizer(const Grammar& grammar);
    CanonicalAtom canonicalize(std::string_view phrase_text) const;

private:
    std::vector<std::string> determiners_, negators_;
};

// ── Tree to expression ──────────────────────────────────────────────────────

struct UnsupportedTreeShapeError : Error {
    explicit UnsupportedTreeShapeError(const std::string& what) : Error(what) {}
};

// Maps a parse tree to an expression, registering canonical atoms in the
// table (repeated phrases reuse their atom id across sentences):
//   IFCLAUSE(a, b)         -> Implies(a, b)
//   ORCLAUSE / ANDCLAUSE   -> Or / And over statements, or over objects with
//                             the shared subject+predicate distributed
//   negated STATEMENT      -> Not(positive-polarity atom)
Expr tree_to_expr(const ParseTree& tree, AtomTable& table);

// ── Paragraph pipeline ──────────────────────────────────────────────────────

struct SentenceOutcome {
    SentenceSpan span;
    std::optional<Expr> expr;             // absent when the sentence did not parse
    std::optional<std::string> no_parse;  // failure description
    bool ambiguous = false;
    int atoms_before = 0;  // table size before this sentence registered anything
};

struct ParagraphResult {
    std::vector<SentenceOutcome> sentences;
    AtomTable table;

    std::vector<Expr> exprs() const;
    int parsed_count() const;
};

// One expression per parseable sentence over a shared table; unparseable
// sentences are reported alongside, never dropped. Sentence parsing is pure
// and runs in parallel under Exec::parallel; atom registration is applied
// in sentence order either way, so the result is identical under both
// policies.
ParagraphResult paragraph_to_exprs(std::string_view text, const Grammar& grammar,
                                   Exec exec = Exec::parallel);

}  // namespace l2l
