#pragma once

// CNF clause sets and the conversion/simplification operations over them.
// Conversion distributes Or over And directly — no auxiliary variables — so
// the phrase↔variable bijection in the AtomTable survives into the clause
// set. A size cap guards the exponential-blowup case.

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "l2l/ast.hpp"
#include "l2l/error.hpp"

namespace l2l {

struct Literal {
    AtomId atom;
    bool positive;  // true = the atom itself, false = its negation

    auto operator<=>(const Literal&) const = default;
};

inline Literal pos(AtomId a) { return Literal{a, true}; }
inline Literal neg(AtomId a) { return Literal{a, false}; }

// ── Clause ──────────────────────────────────────────────────────────────────
// A disjunction of literals with set semantics: construction sorts by
// (atom, polarity) and drops duplicates. The empty clause (unsatisfiable)
// is representable.

class Clause {
public:
    Clause() = default;
    explicit Clause(std::vector<Literal> literals);
    Clause(std::initializer_list<Literal> literals)
        : Clause(std::vector<Literal>(literals)) {}

    const std::vector<Literal>& literals() const { return lits_; }
    std::size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }

    bool contains(Literal l) const;
    // True when some atom occurs in both polarities.
    bool tautological() const;
    // Subset test: every literal of *this occurs in `other`.
    bool subsumes(const Clause& other) const;

    auto operator<=>(const Clause&) const = default;

private:
    std::vector<Literal> lits_;
};

// ── ClauseSet ───────────────────────────────────────────────────────────────
// A conjunction of clauses with set semantics, sharing the pipeline's atom
// registry. The empty clause set denotes True.

struct TableMismatchError : Error {
    TableMismatchError() : Error("clause sets are governed by different atom tables") {}
};

class ClauseSet {
public:
    using TablePtr = std::shared_ptr<const AtomTable>;

    ClauseSet(std::vector<Clause> clauses, TablePtr table);
    static ClauseSet top(TablePtr table) { return ClauseSet({}, std::move(table)); }

    const std::vector<Clause>& clauses() const { return clauses_; }
    const TablePtr& table() const { return table_; }
    std::size_t size() const { return clauses_.size(); }
    bool empty() const { return clauses_.empty(); }
    bool has_empty_clause() const;

    // Atom ids occurring in some clause, sorted and deduplicated.
    std::vector<AtomId> atoms() const;
    std::size_t literal_count() const;

    // Clause-wise equality; the governing tables must also agree by value.
    bool operator==(const ClauseSet& o) const;

private:
    std::vector<Clause> clauses_;  // sorted, deduplicated
    TablePtr table_;
};

// ── Operations ──────────────────────────────────────────────────────────────

struct SizeLimitError : Error {
    std::size_t limit;
    explicit SizeLimitError(std::size_t limit_)
        : Error("CNF conversion exceeded the clause cap of " + std::to_string(limit_)),
          limit(limit_) {}
};

inline constexpr std::size_t kDefaultMaxClauses = 100000;

// Negation normal form: output contains only And/Or/Const and negation
// applied directly to atoms. Implies and Iff are eliminated; De Morgan
// pushes negation inward; double negation collapses.
Expr to_nnf(const Expr& expr);

// Full CNF conversion (NNF first, then Or-over-And distribution). Throws
// SizeLimitError once the intermediate clause count passes `max_clauses`.
ClauseSet to_cnf(const Expr& expr, ClauseSet::TablePtr table,
                 std::size_t max_clauses = kDefaultMaxClauses);

// Equivalence-preserving reduction, applied to fixpoint: tautological
// clauses are dropped and any clause that is a superset of another is
// subsumed away. Duplicate literals and clauses are impossible by
// construction. Never increases the clause or literal count.
ClauseSet simplify_cnf(const ClauseSet& cs);

// Union of clause sets (the conjunction of the inputs). All inputs must
// share one atom table; an empty input list yields True over an empty table.
ClauseSet conjoin(std::span<const ClauseSet> sets);

// The clause set read back as an expression (True for the empty set, a
// bare literal/clause where the shape degenerates). Plumbing for the
// equivalence checks.
Expr clauses_to_expr(const ClauseSet& cs);

}  // namespace l2l
