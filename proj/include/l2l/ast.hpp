#pragma once

// Propositional logic AST plus the function-call text format (`And`, `Or`,
// `Not`, `Implies`, `Iff`) shared by every producer and consumer of
// expressions in the pipeline. Expressions are immutable values; copying a
// handle is cheap and sharing subtrees across threads is safe.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l2l/error.hpp"

namespace l2l {

using AtomId = int;

// ── AtomTable ───────────────────────────────────────────────────────────────
// Bidirectional registry: canonical phrase ↔ variable symbol ↔ integer id.
// The id of an entry is its position; symbols and phrases are both unique.
// Auto-assigned symbols follow first-appearance order P, Q, ..., Z, then
// X1, X2, ... (already-taken names are skipped).

struct DuplicateEntryError : Error {
    explicit DuplicateEntryError(const std::string& what) : Error(what) {}
};

struct UnknownAtomIdError : Error {
    AtomId id;
    explicit UnknownAtomIdError(AtomId id_)
        : Error("unknown atom id " + std::to_string(id_)), id(id_) {}
};

class AtomTable {
public:
    struct Entry {
        std::string symbol;
        std::string phrase;
        bool operator==(const Entry&) const = default;
    };

    // Returns the id of the entry with this canonical phrase, creating one
    // with the next auto-assigned symbol if absent.
    AtomId intern_phrase(std::string_view phrase);

    // Returns the id of the entry with this symbol, creating one with
    // phrase = symbol if absent (the `register` mode of parse_expr).
    AtomId intern_symbol(std::string_view symbol);

    // Adds an explicit (symbol, phrase) pair. Throws DuplicateEntryError if
    // either half collides with an existing entry.
    AtomId add(std::string_view symbol, std::string_view phrase);

    // Adds a fresh entry with the next auto-assigned symbol. Unlike
    // intern_phrase this does not reuse an existing entry: a duplicate
    // phrase is an error.
    AtomId add_auto(std::string_view phrase);

    std::optional<AtomId> find_symbol(std::string_view symbol) const;
    std::optional<AtomId> find_phrase(std::string_view phrase) const;

    const std::string& symbol(AtomId id) const;  // throws UnknownAtomIdError
    const std::string& phrase(AtomId id) const;  // throws UnknownAtomIdError

    int size() const { return static_cast<int>(entries_.size()); }
    bool empty() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }

    bool operator==(const AtomTable& o) const { return entries_ == o.entries_; }

private:
    std::string next_auto_symbol() const;
    std::vector<Entry> entries_;
};

// ── Expr ────────────────────────────────────────────────────────────────────

enum class Op : unsigned char { Atom, Const, Not, And, Or, Implies, Iff };

const char* op_name(Op op);

class Expr {
public:
    Expr() = default;  // empty handle; only valid to assign over

    static Expr atom(AtomId id);
    static Expr constant(bool value);
    static Expr negate(Expr child);
    static Expr conj(std::vector<Expr> children);  // requires >= 2 children
    static Expr disj(std::vector<Expr> children);  // requires >= 2 children
    static Expr implies(Expr antecedent, Expr consequent);
    static Expr iff(Expr left, Expr right);

    // Convenience: And/Or over any child count. 0 children folds to the
    // operator's identity constant, 1 child folds to the child itself.
    static Expr conj_fold(std::vector<Expr> children);
    static Expr disj_fold(std::vector<Expr> children);

    Op op() const { return node_->op; }
    AtomId atom_id() const;      // requires op() == Op::Atom
    bool const_value() const;    // requires op() == Op::Const
    const std::vector<Expr>& children() const { return node_->children; }
    const Expr& child(int i) const { return node_->children[i]; }
    int arity() const { return static_cast<int>(node_->children.size()); }
    bool valid() const { return node_ != nullptr; }

    bool operator==(const Expr& o) const;  // structural equality
    bool operator!=(const Expr& o) const { return !(*this == o); }

    // Atom ids occurring in the tree, sorted and deduplicated.
    std::vector<AtomId> atoms() const;
    // Distinct atom ids in order of first appearance (left-to-right).
    std::vector<AtomId> atoms_in_appearance_order() const;
    // Leaf count of Atom nodes (occurrences, not distinct).
    int atom_occurrences() const;

private:
    struct Node {
        Op op = Op::Const;
        AtomId atom = -1;
        bool value = false;
        std::vector<Expr> children;
    };
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// ── Text format ─────────────────────────────────────────────────────────────
//
//   expr := SYMBOL | NAME "(" expr ("," expr)* ")"
//
// NAME is one of And, Or, Not, Implies, Iff, Equivalent (alias of Iff),
// case-sensitive. SYMBOL matches [A-Za-z][A-Za-z0-9_]* excluding the
// operator names. Whitespace is insignificant.

struct SyntaxError : Error {
    int position;  // byte offset into the input
    SyntaxError(int position_, const std::string& message)
        : Error("syntax error at " + std::to_string(position_) + ": " + message),
          position(position_) {}
};

struct ArityError : Error {
    std::string operator_name;
    int got;
    ArityError(std::string operator_name_, int got_)
        : Error("operator " + operator_name_ + " applied to " + std::to_string(got_) +
                " arguments"),
          operator_name(std::move(operator_name_)),
          got(got_) {}
};

struct UnknownSymbolError : Error {
    std::string name;
    explicit UnknownSymbolError(std::string name_)
        : Error("unknown symbol " + name_), name(std::move(name_)) {}
};

enum class SymbolMode {
    strict,        // unknown symbols raise UnknownSymbolError
    register_new,  // unknown symbols get fresh table entries (phrase = symbol)
};

// Parses one full line of expression text; trailing non-whitespace is an
// error. Throws SyntaxError / ArityError / UnknownSymbolError.
Expr parse_expr(std::string_view text, AtomTable& table, SymbolMode mode);

// Parses the longest expression starting at the beginning of `text`
// (leading whitespace allowed). Returns the expression and the number of
// bytes consumed, or nullopt if no well-formed expression starts there.
// Used to extract expressions from free-form model output.
struct PrefixParse {
    Expr expr;
    std::size_t consumed;
};
std::optional<PrefixParse> try_parse_prefix(std::string_view text, AtomTable& table,
                                            SymbolMode mode);

enum class PrintStyle {
    function_call,  // the grammar above; round-trips through parse_expr
    infix,          // ~ & | -> <-> with minimal parentheses
};

// Renders an expression. Constants print as Const(true)/Const(false) in
// function-call style; they never appear in interchange text because the
// frontend and the LLM never emit them.
std::string print_expr(const Expr& expr, const AtomTable& table,
                       PrintStyle style = PrintStyle::function_call);

// Flattens nested same-operator And/Or, folds constants by the boolean
// identity laws, and collapses double negation. Idempotent; preserves
// truth-functional semantics.
Expr normalize(const Expr& expr);

}  // namespace l2l
