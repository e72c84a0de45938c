#pragma once

// Semantic back-end: truth-table scans, a deterministic DPLL solver, and
// expression equivalence built on the two.
//
// The truth-table scans are the hot inner loops of the pipeline (they run
// per sentence during hallucination detection and per case in the property
// corpora), so each scan kernel exists twice: an OpenMP-parallel version and
// a serial reference. The two must return identical results on every input;
// the test suite and the bench tool compare them.

#include <cstdint>
#include <map>
#include <optional>
#include <span>

#include "l2l/ast.hpp"
#include "l2l/cnf.hpp"
#include "l2l/error.hpp"

namespace l2l {

// Kernel execution policy. `parallel` falls back to serial when the build
// has no OpenMP support.
enum class Exec { serial, parallel };

// ── Assignment ──────────────────────────────────────────────────────────────
// Total valuation over a stated atom set.

struct IncompleteAssignmentError : Error {
    AtomId missing;
    explicit IncompleteAssignmentError(AtomId missing_)
        : Error("assignment has no value for atom " + std::to_string(missing_)),
          missing(missing_) {}
};

struct Assignment {
    std::map<AtomId, bool> values;

    bool value(AtomId a) const {
        auto it = values.find(a);
        if (it == values.end()) throw IncompleteAssignmentError(a);
        return it->second;
    }
    bool operator==(const Assignment&) const = default;
};

// Standard truth-functional semantics. Throws IncompleteAssignmentError if
// the assignment misses an atom that occurs in the input.
bool evaluate(const Expr& expr, const Assignment& a);
bool evaluate(const ClauseSet& cs, const Assignment& a);

// ── DPLL ────────────────────────────────────────────────────────────────────
// Complete and fully deterministic: unit propagation to fixpoint, then pure
// literal elimination (atoms in ascending order), then branching on the
// lowest-numbered unassigned atom trying true first. A SAT answer carries a
// witness over the clause set's occurring atoms (atoms left unconstrained
// default to false); the witness is checked with evaluate() before return.
std::optional<Assignment> solve_dpll(const ClauseSet& cs);

// ── Truth-table kernels ─────────────────────────────────────────────────────
// `atoms` lists the scan dimensions; bit i of a mask is the value of
// atoms[i]. Masks run 0 .. 2^n - 1, so n must stay below 64 (callers keep
// it at or below the equivalence threshold).

// True when the two expressions agree on every assignment over `atoms`.
bool truth_tables_equal(const Expr& a, const Expr& b, std::span<const AtomId> atoms,
                        Exec exec = Exec::parallel);

// Lowest satisfying mask of the clause set over `atoms`, or nullopt when
// unsatisfiable. Deterministic under both policies.
std::optional<std::uint64_t> lowest_satisfying_mask(const ClauseSet& cs,
                                                    std::span<const AtomId> atoms,
                                                    Exec exec = Exec::parallel);

// ── Equivalence ─────────────────────────────────────────────────────────────
// Exhaustive truth-table comparison up to this many combined atoms; above
// it, to_cnf(Not(Iff(a, b))) is handed to DPLL and UNSAT means equivalent.
inline constexpr int kTruthTableAtomLimit = 16;

bool equiv(const Expr& a, const Expr& b, const ClauseSet::TablePtr& table,
           Exec exec = Exec::parallel, std::size_t max_clauses = kDefaultMaxClauses);

// Both routes of equiv(), exposed so the suite can assert they agree on
// inputs where both apply.
bool equiv_truth_table(const Expr& a, const Expr& b, Exec exec = Exec::parallel);
bool equiv_dpll(const Expr& a, const Expr& b, const ClauseSet::TablePtr& table,
                std::size_t max_clauses = kDefaultMaxClauses);

}  // namespace l2l
