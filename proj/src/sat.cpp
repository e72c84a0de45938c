#include "l2l/sat.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace l2l {

// ── evaluate ────────────────────────────────────────────────────────────────

bool evaluate(const Expr& expr, const Assignment& a) {
    switch (expr.op()) {
        case Op::Atom:
            return a.value(expr.atom_id());
        case Op::Const:
            return expr.const_value();
        case Op::Not:
            return !evaluate(expr.child(0), a);
        case Op::And:
            for (const Expr& c : expr.children())
                if (!evaluate(c, a)) return false;
            return true;
        case Op::Or:
            for (const Expr& c : expr.children())
                if (evaluate(c, a)) return true;
            return false;
        case Op::Implies:
            return !evaluate(expr.child(0), a) || evaluate(expr.child(1), a);
        case Op::Iff:
            return evaluate(expr.child(0), a) == evaluate(expr.child(1), a);
    }
    return false;
}

bool evaluate(const ClauseSet& cs, const Assignment& a) {
    for (const Clause& c : cs.clauses()) {
        bool sat = false;
        for (Literal l : c.literals())
            if (a.value(l.atom) == l.positive) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

// ── Mask-indexed evaluation (scan kernels) ──────────────────────────────────

namespace {

// Maps atom ids to bit positions for a scan. Atom ids are small integers,
// so a flat vector beats a hash map here.
class BitIndex {
public:
    explicit BitIndex(std::span<const AtomId> atoms) {
        AtomId max_id = -1;
        for (AtomId a : atoms) max_id = std::max(max_id, a);
        slot_.assign(static_cast<std::size_t>(max_id) + 1, -1);
        for (std::size_t i = 0; i < atoms.size(); ++i)
            slot_[static_cast<std::size_t>(atoms[i])] = static_cast<int>(i);
    }
    int slot(AtomId a) const {
        if (a < 0 || static_cast<std::size_t>(a) >= slot_.size() || slot_[a] < 0)
            throw IncompleteAssignmentError(a);
        return slot_[static_cast<std::size_t>(a)];
    }

private:
    std::vector<int> slot_;
};

bool eval_mask(const Expr& e, const BitIndex& idx, std::uint64_t mask) {
    switch (e.op()) {
        case Op::Atom:
            return (mask >> idx.slot(e.atom_id())) & 1u;
        case Op::Const:
            return e.const_value();
        case Op::Not:
            return !eval_mask(e.child(0), idx, mask);
        case Op::And:
            for (const Expr& c : e.children())
                if (!eval_mask(c, idx, mask)) return false;
            return true;
        case Op::Or:
            for (const Expr& c : e.children())
                if (eval_mask(c, idx, mask)) return true;
            return false;
        case Op::Implies:
            return !eval_mask(e.child(0), idx, mask) || eval_mask(e.child(1), idx, mask);
        case Op::Iff:
            return eval_mask(e.child(0), idx, mask) == eval_mask(e.child(1), idx, mask);
    }
    return false;
}

bool eval_mask(const ClauseSet& cs, const BitIndex& idx, std::uint64_t mask) {
    for (const Clause& c : cs.clauses()) {
        bool sat = false;
        for (Literal l : c.literals())
            if (bool(((mask >> idx.slot(l.atom)) & 1u)) == l.positive) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

}  // namespace

bool truth_tables_equal(const Expr& a, const Expr& b, std::span<const AtomId> atoms,
                        Exec exec) {
    assert(atoms.size() < 64);
    const BitIndex idx(atoms);
    const std::uint64_t count = std::uint64_t{1} << atoms.size();

    if (exec == Exec::serial) {
        for (std::uint64_t m = 0; m < count; ++m)
            if (eval_mask(a, idx, m) != eval_mask(b, idx, m)) return false;
        return true;
    }

    bool equal = true;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(&& : equal)
#endif
    for (std::int64_t m = 0; m < static_cast<std::int64_t>(count); ++m) {
        const auto mask = static_cast<std::uint64_t>(m);
        equal = equal && (eval_mask(a, idx, mask) == eval_mask(b, idx, mask));
    }
    return equal;
}

std::optional<std::uint64_t> lowest_satisfying_mask(const ClauseSet& cs,
                                                    std::span<const AtomId> atoms,
                                                    Exec exec) {
    assert(atoms.size() < 64);
    const BitIndex idx(atoms);
    const std::uint64_t count = std::uint64_t{1} << atoms.size();
    const std::uint64_t none = ~std::uint64_t{0};

    if (exec == Exec::serial) {
        for (std::uint64_t m = 0; m < count; ++m)
            if (eval_mask(cs, idx, m)) return m;
        return std::nullopt;
    }

    std::uint64_t best = none;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : best)
#endif
    for (std::int64_t m = 0; m < static_cast<std::int64_t>(count); ++m) {
        const auto mask = static_cast<std::uint64_t>(m);
        if (mask < best && eval_mask(cs, idx, mask)) best = mask;
    }
    if (best == none) return std::nullopt;
    return best;
}

// ── DPLL ────────────────────────────────────────────────────────────────────

namespace {

enum : signed char { kUnassigned = -1, kFalse = 0, kTrue = 1 };

struct DpllState {
    const std::vector<Clause>* clauses;
    std::vector<AtomId> atoms;                    // occurring atoms, ascending
    std::unordered_map<AtomId, int> atom_index;   // atom id -> index into `assign`
    std::vector<signed char> assign;

    signed char value_of(Literal l) const {
        signed char v = assign[atom_index.at(l.atom)];
        if (v == kUnassigned) return kUnassigned;
        return (v == kTrue) == l.positive ? kTrue : kFalse;
    }
};

// Returns false on conflict (some clause fully falsified).
bool unit_propagate(DpllState& st) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Clause& c : *st.clauses) {
            int unassigned = 0;
            Literal unit{0, true};
            bool satisfied = false;
            for (Literal l : c.literals()) {
                signed char v = st.value_of(l);
                if (v == kTrue) {
                    satisfied = true;
                    break;
                }
                if (v == kUnassigned) {
                    ++unassigned;
                    unit = l;
                }
            }
            if (satisfied) continue;
            if (unassigned == 0) return false;  // conflict
            if (unassigned == 1) {
                st.assign[st.atom_index.at(unit.atom)] = unit.positive ? kTrue : kFalse;
                changed = true;
            }
        }
    }
    return true;
}

void pure_literal_eliminate(DpllState& st) {
    // Atoms in ascending order, one at a time: assigning a pure literal can
    // satisfy clauses and turn later atoms unconstrained, and those must stay
    // unassigned (they default to false in the witness).
    for (AtomId a : st.atoms) {
        if (st.assign[st.atom_index.at(a)] != kUnassigned) continue;
        int seen = 0;  // bit 0: positive occurs, bit 1: negative occurs
        for (const Clause& c : *st.clauses) {
            bool satisfied = false;
            for (Literal l : c.literals())
                if (st.value_of(l) == kTrue) {
                    satisfied = true;
                    break;
                }
            if (satisfied) continue;
            for (Literal l : c.literals())
                if (l.atom == a) seen |= l.positive ? 1 : 2;
        }
        if (seen == 1)
            st.assign[st.atom_index.at(a)] = kTrue;
        else if (seen == 2)
            st.assign[st.atom_index.at(a)] = kFalse;
    }
}

bool all_satisfied(const DpllState& st) {
    for (const Clause& c : *st.clauses) {
        bool satisfied = false;
        for (Literal l : c.literals())
            if (st.value_of(l) == kTrue) {
                satisfied = true;
                break;
            }
        if (!satisfied) return false;
    }
    return true;
}

bool dpll(DpllState& st) {
    if (!unit_propagate(st)) return false;
    pure_literal_eliminate(st);
    if (!unit_propagate(st)) return false;
    if (all_satisfied(st)) return true;

    // Branch on the lowest unassigned atom, true first.
    for (std::size_t i = 0; i < st.atoms.size(); ++i) {
        if (st.assign[i] != kUnassigned) continue;
        std::vector<signed char> saved = st.assign;
        st.assign[i] = kTrue;
        if (dpll(st)) return true;
        st.assign = saved;
        st.assign[i] = kFalse;
        if (dpll(st)) return true;
        st.assign = std::move(saved);
        return false;
    }
    return false;  // everything assigned but some clause is falsified
}

}  // namespace

std::optional<Assignment> solve_dpll(const ClauseSet& cs) {
    if (cs.has_empty_clause()) return std::nullopt;

    DpllState st;
    st.clauses = &cs.clauses();
    st.atoms = cs.atoms();
    for (std::size_t i = 0; i < st.atoms.size(); ++i)
        st.atom_index[st.atoms[i]] = static_cast<int>(i);
    st.assign.assign(st.atoms.size(), kUnassigned);

    if (!dpll(st)) return std::nullopt;

    Assignment witness;
    for (std::size_t i = 0; i < st.atoms.size(); ++i)
        witness.values[st.atoms[i]] = st.assign[i] == kTrue;  // unconstrained -> false
    assert(evaluate(cs, witness));
    return witness;
}

// ── equiv ───────────────────────────────────────────────────────────────────

namespace {

std::vector<AtomId> combined_atoms(const Expr& a, const Expr& b) {
    std::vector<AtomId> atoms = a.atoms();
    std::vector<AtomId> more = b.atoms();
    atoms.insert(atoms.end(), more.begin(), more.end());
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

}  // namespace

bool equiv_truth_table(const Expr& a, const Expr& b, Exec exec) {
    std::vector<AtomId> atoms = combined_atoms(a, b);
    return truth_tables_equal(a, b, atoms, exec);
}

bool equiv_dpll(const Expr& a, const Expr& b, const ClauseSet::TablePtr& table,
                std::size_t max_clauses) {
    ClauseSet difference = to_cnf(Expr::negate(Expr::iff(a, b)), table, max_clauses);
    return !solve_dpll(difference).has_value();
}

bool equiv(const Expr& a, const Expr& b, const ClauseSet::TablePtr& table, Exec exec,
           std::size_t max_clauses) {
    std::vector<AtomId> atoms = combined_atoms(a, b);
    if (atoms.size() <= kTruthTableAtomLimit) return truth_tables_equal(a, b, atoms, exec);
    return equiv_dpll(a, b, table, max_clauses);
}

}  // namespace l2l
