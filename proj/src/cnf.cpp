#include "l2l/cnf.hpp"

#include <algorithm>
#include <cassert>

namespace l2l {

// ── Clause ──────────────────────────────────────────────────────────────────

Clause::Clause(std::vector<Literal> literals) : lits_(std::move(literals)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

bool Clause::contains(Literal l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool Clause::tautological() const {
    // Sorted by (atom, polarity): complementary literals are adjacent.
    for (std::size_t i = 1; i < lits_.size(); ++i)
        if (lits_[i].atom == lits_[i - 1].atom && lits_[i].positive != lits_[i - 1].positive)
            return true;
    return false;
}

bool Clause::subsumes(const Clause& other) const {
    if (size() > other.size()) return false;
    return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
}

// ── ClauseSet ───────────────────────────────────────────────────────────────

ClauseSet::ClauseSet(std::vector<Clause> clauses, TablePtr table)
    : clauses_(std::move(clauses)), table_(std::move(table)) {
    std::sort(clauses_.begin(), clauses_.end());
    clauses_.erase(std::unique(clauses_.begin(), clauses_.end()), clauses_.end());
}

bool ClauseSet::has_empty_clause() const {
    // Sorted order puts the empty clause first.
    return !clauses_.empty() && clauses_.front().empty();
}

std::vector<AtomId> ClauseSet::atoms() const {
    std::vector<AtomId> out;
    for (const Clause& c : clauses_)
        for (Literal l : c.literals()) out.push_back(l.atom);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t ClauseSet::literal_count() const {
    std::size_t n = 0;
    for (const Clause& c : clauses_) n += c.size();
    return n;
}

static bool tables_agree(const ClauseSet::TablePtr& a, const ClauseSet::TablePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

bool ClauseSet::operator==(const ClauseSet& o) const {
    return clauses_ == o.clauses_ && tables_agree(table_, o.table_);
}

// ── to_nnf ──────────────────────────────────────────────────────────────────

namespace {

Expr nnf(const Expr& e, bool negated) {
    switch (e.op()) {
        case Op::Atom:
            return negated ? Expr::negate(e) : e;
        case Op::Const:
            return Expr::constant(negated ? !e.const_value() : e.const_value());
        case Op::Not:
            return nnf(e.child(0), !negated);
        case Op::And:
        case Op::Or: {
            const bool flip = negated;  // De Morgan swaps the connective
            const bool out_and = (e.op() == Op::And) != flip;
            std::vector<Expr> children;
            children.reserve(e.children().size());
            for (const Expr& c : e.children()) children.push_back(nnf(c, negated));
            return out_and ? Expr::conj(std::move(children)) : Expr::disj(std::move(children));
        }
        case Op::Implies: {
            // a -> b  ~>  ~a | b;   ~(a -> b)  ~>  a & ~b
            if (!negated)
                return Expr::disj({nnf(e.child(0), true), nnf(e.child(1), false)});
            return Expr::conj({nnf(e.child(0), false), nnf(e.child(1), true)});
        }
        case Op::Iff: {
            // a <-> b  ~>  (~a | b) & (~b | a);  negated form is the xor.
            const Expr& a = e.child(0);
            const Expr& b = e.child(1);
            if (!negated)
                return Expr::conj({Expr::disj({nnf(a, true), nnf(b, false)}),
                                   Expr::disj({nnf(b, true), nnf(a, false)})});
            return Expr::conj({Expr::disj({nnf(a, true), nnf(b, true)}),
                               Expr::disj({nnf(a, false), nnf(b, false)})});
        }
    }
    return e;
}

}  // namespace

Expr to_nnf(const Expr& expr) { return nnf(expr, false); }

// ── to_cnf ──────────────────────────────────────────────────────────────────

namespace {

// Clause lists during distribution; set semantics are restored when the
// final ClauseSet is constructed.
using ClauseList = std::vector<Clause>;

ClauseList cnf_clauses(const Expr& e, std::size_t max_clauses);

ClauseList distribute(const std::vector<Expr>& children, std::size_t max_clauses) {
    // Or over And: fold the cross product of the children's clause lists.
    ClauseList acc{Clause{}};
    for (const Expr& c : children) {
        ClauseList next;
        ClauseList rhs = cnf_clauses(c, max_clauses);
        if (acc.size() * rhs.size() > max_clauses) throw SizeLimitError(max_clauses);
        next.reserve(acc.size() * rhs.size());
        for (const Clause& a : acc)
            for (const Clause& b : rhs) {
                std::vector<Literal> merged(a.literals());
                merged.insert(merged.end(), b.literals().begin(), b.literals().end());
                next.push_back(Clause(std::move(merged)));
            }
        acc = std::move(next);
    }
    return acc;
}

ClauseList cnf_clauses(const Expr& e, std::size_t max_clauses) {
    switch (e.op()) {
        case Op::Atom:
            return {Clause{pos(e.atom_id())}};
        case Op::Const:
            return e.const_value() ? ClauseList{} : ClauseList{Clause{}};
        case Op::Not:
            // NNF input: negation sits directly on an atom or a constant.
            if (e.child(0).op() == Op::Atom)
                return {Clause{neg(e.child(0).atom_id())}};
            assert(e.child(0).op() == Op::Const);
            return e.child(0).const_value() ? ClauseList{Clause{}} : ClauseList{};
        case Op::And: {
            ClauseList out;
            for (const Expr& c : e.children()) {
                ClauseList part = cnf_clauses(c, max_clauses);
                if (out.size() + part.size() > max_clauses) throw SizeLimitError(max_clauses);
                out.insert(out.end(), std::make_move_iterator(part.begin()),
                           std::make_move_iterator(part.end()));
            }
            return out;
        }
        case Op::Or: {
            // A disjunct that is itself a constant collapses the whole
            // disjunction (true) or disappears (false); handled by the
            // cross product naturally: true -> zero clauses on that side.
            return distribute(e.children(), max_clauses);
        }
        default:
            assert(false && "to_cnf requires NNF input");
            return {};
    }
}

}  // namespace

ClauseSet to_cnf(const Expr& expr, ClauseSet::TablePtr table, std::size_t max_clauses) {
    ClauseList clauses = cnf_clauses(to_nnf(expr), max_clauses);
    return ClauseSet(std::move(clauses), std::move(table));
}

// ── simplify_cnf ────────────────────────────────────────────────────────────

ClauseSet simplify_cnf(const ClauseSet& cs) {
    std::vector<Clause> kept;
    kept.reserve(cs.size());
    for (const Clause& c : cs.clauses())
        if (!c.tautological()) kept.push_back(c);

    // Subsumption: drop any clause that is a superset of another kept
    // clause. One pass suffices — subsumption among the minimal clauses
    // cannot create new subsumptions.
    std::vector<bool> dead(kept.size(), false);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (dead[i]) continue;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (i == j || dead[j]) continue;
            if (kept[j].subsumes(kept[i]) && kept[i] != kept[j]) {
                dead[i] = true;
                break;
            }
        }
    }
    std::vector<Clause> out;
    for (std::size_t i = 0; i < kept.size(); ++i)
        if (!dead[i]) out.push_back(kept[i]);
    return ClauseSet(std::move(out), cs.table());
}

// ── conjoin ─────────────────────────────────────────────────────────────────

ClauseSet conjoin(std::span<const ClauseSet> sets) {
    if (sets.empty()) return ClauseSet::top(std::make_shared<const AtomTable>());
    const ClauseSet::TablePtr& table = sets.front().table();
    std::vector<Clause> all;
    for (const ClauseSet& cs : sets) {
        if (!tables_agree(cs.table(), table)) throw TableMismatchError();
        all.insert(all.end(), cs.clauses().begin(), cs.clauses().end());
    }
    return ClauseSet(std::move(all), table);
}

// ── clauses_to_expr ─────────────────────────────────────────────────────────

Expr clauses_to_expr(const ClauseSet& cs) {
    std::vector<Expr> conjuncts;
    conjuncts.reserve(cs.size());
    for (const Clause& c : cs.clauses()) {
        std::vector<Expr> lits;
        lits.reserve(c.size());
        for (Literal l : c.literals()) {
            Expr a = Expr::atom(l.atom);
            lits.push_back(l.positive ? std::move(a) : Expr::negate(std::move(a)));
        }
        conjuncts.push_back(Expr::disj_fold(std::move(lits)));
    }
    return Expr::conj_fold(std::move(conjuncts));
}

}  // namespace l2l
