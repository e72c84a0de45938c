#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "l2l/ast.hpp"
#include "support/gen.hpp"
#include "support/oracle_eval.hpp"

using namespace l2l;
using namespace l2l::testing;

namespace {

AtomTable pqr_table() {
    AtomTable t;
    t.intern_symbol("P");
    t.intern_symbol("Q");
    t.intern_symbol("R");
    return t;
}

}  // namespace

TEST_CASE("atom table assigns symbols in first-appearance order") {
    AtomTable t;
    CHECK(t.intern_phrase("a") == 0);
    CHECK(t.symbol(0) == "P");
    CHECK(t.intern_phrase("b") == 1);
    CHECK(t.symbol(1) == "Q");
    for (int i = 2; i < 11; ++i) t.intern_phrase("c" + std::to_string(i));
    CHECK(t.symbol(10) == "Z");
    CHECK(t.intern_phrase("overflow-1") == 11);
    CHECK(t.symbol(11) == "X1");
    CHECK(t.intern_phrase("overflow-2") == 12);
    CHECK(t.symbol(12) == "X2");
}

TEST_CASE("atom table auto symbols skip names taken explicitly") {
    AtomTable t;
    t.add("P", "taken");
    CHECK(t.symbol(t.intern_phrase("fresh")) == "Q");
}

TEST_CASE("atom table is a bijection") {
    AtomTable t;
    t.add("P", "it rains");
    CHECK_THROWS_AS(t.add("P", "other"), DuplicateEntryError);
    CHECK_THROWS_AS(t.add("Q", "it rains"), DuplicateEntryError);
    CHECK(t.intern_phrase("it rains") == 0);  // reuse, not duplicate
    CHECK(t.intern_symbol("P") == 0);
    CHECK_THROWS_AS(t.symbol(5), UnknownAtomIdError);
}

TEST_CASE("parse: paper-shaped inputs") {
    AtomTable t = pqr_table();
    CHECK(parse_expr("Or(P, Q)", t, SymbolMode::strict) ==
          Expr::disj({Expr::atom(0), Expr::atom(1)}));
    CHECK(parse_expr("P", t, SymbolMode::strict) == Expr::atom(0));
    CHECK(parse_expr("And(Not(P), Or(Q, R))", t, SymbolMode::strict) ==
          Expr::conj({Expr::negate(Expr::atom(0)),
                      Expr::disj({Expr::atom(1), Expr::atom(2)})}));
}

TEST_CASE("parse: arity errors carry operator and count") {
    AtomTable t = pqr_table();
    try {
        parse_expr("Not(P, Q)", t, SymbolMode::strict);
        FAIL("expected ArityError");
    } catch (const ArityError& e) {
        CHECK(e.operator_name == "Not");
        CHECK(e.got == 2);
    }
    CHECK_THROWS_AS(parse_expr("Implies(P)", t, SymbolMode::strict), ArityError);
    CHECK_THROWS_AS(parse_expr("Iff(P, Q, R)", t, SymbolMode::strict), ArityError);
    CHECK_THROWS_AS(parse_expr("And(P)", t, SymbolMode::strict), ArityError);
    CHECK_THROWS_AS(parse_expr("Or(P)", t, SymbolMode::strict), ArityError);
}

TEST_CASE("parse: symbol modes") {
    AtomTable t = pqr_table();
    CHECK_THROWS_AS(parse_expr("Or(P, Zz)", t, SymbolMode::strict), UnknownSymbolError);
    Expr e = parse_expr("Or(P, Zz)", t, SymbolMode::register_new);
    CHECK(t.find_symbol("Zz").has_value());
    CHECK(t.phrase(*t.find_symbol("Zz")) == "Zz");
    CHECK(e == Expr::disj({Expr::atom(0), Expr::atom(3)}));
}

TEST_CASE("parse: operator names are case-sensitive and closed") {
    AtomTable t = pqr_table();
    // "and" is a symbol, so "and(...)" is a symbol applied as an operator.
    CHECK_THROWS_AS(parse_expr("and(P, Q)", t, SymbolMode::register_new), SyntaxError);
    CHECK_THROWS_AS(parse_expr("Xor(P, Q)", t, SymbolMode::register_new), SyntaxError);
    CHECK_THROWS_AS(parse_expr("Implies", t, SymbolMode::register_new), SyntaxError);
    // Equivalent is an alias of Iff.
    CHECK(parse_expr("Equivalent(P, Q)", t, SymbolMode::strict) ==
          Expr::iff(Expr::atom(0), Expr::atom(1)));
}

TEST_CASE("parse: malformed inputs") {
    AtomTable t = pqr_table();
    CHECK_THROWS_AS(parse_expr("", t, SymbolMode::strict), SyntaxError);
    CHECK_THROWS_AS(parse_expr("Or(P,)", t, SymbolMode::strict), SyntaxError);
    CHECK_THROWS_AS(parse_expr("Or(P, Q) junk", t, SymbolMode::strict), SyntaxError);
    CHECK_THROWS_AS(parse_expr("Or(P, Q", t, SymbolMode::strict), SyntaxError);
    CHECK_THROWS_AS(parse_expr("Or()", t, SymbolMode::strict), SyntaxError);
    CHECK_THROWS_AS(parse_expr("(P)", t, SymbolMode::strict), SyntaxError);
    CHECK_THROWS_AS(parse_expr("1P", t, SymbolMode::strict), SyntaxError);
}

TEST_CASE("parse: whitespace is insignificant") {
    AtomTable t = pqr_table();
    CHECK(parse_expr("  Or ( P ,Q )  ", t, SymbolMode::strict) ==
          parse_expr("Or(P, Q)", t, SymbolMode::strict));
}

TEST_CASE("print: function-call and infix styles") {
    AtomTable t = pqr_table();
    Expr e = parse_expr("And(Not(P), Or(Q, R))", t, SymbolMode::strict);
    CHECK(print_expr(e, t) == "And(Not(P), Or(Q, R))");
    CHECK(print_expr(e, t, PrintStyle::infix) == "~P & (Q | R)");
    CHECK(print_expr(Expr::atom(0), t) == "P");
    CHECK(print_expr(Expr::implies(Expr::atom(0), Expr::atom(1)), t, PrintStyle::infix) ==
          "P -> Q");
}

TEST_CASE("print: minimal parentheses and associativity") {
    AtomTable t = pqr_table();
    auto parse = [&](const char* s) { return parse_expr(s, t, SymbolMode::strict); };
    CHECK(print_expr(parse("Implies(P, Implies(Q, R))"), t, PrintStyle::infix) ==
          "P -> Q -> R");
    CHECK(print_expr(parse("Implies(Implies(P, Q), R)"), t, PrintStyle::infix) ==
          "(P -> Q) -> R");
    CHECK(print_expr(parse("Or(And(P, Q), R)"), t, PrintStyle::infix) == "P & Q | R");
    CHECK(print_expr(parse("And(Or(P, Q), R)"), t, PrintStyle::infix) == "(P | Q) & R");
    CHECK(print_expr(parse("Not(And(P, Q))"), t, PrintStyle::infix) == "~(P & Q)");
    CHECK(print_expr(parse("Not(Not(P))"), t, PrintStyle::infix) == "~~P");
    CHECK(print_expr(parse("Iff(P, Implies(Q, R))"), t, PrintStyle::infix) ==
          "P <-> Q -> R");
    CHECK(print_expr(parse("Implies(Iff(P, Q), R)"), t, PrintStyle::infix) ==
          "(P <-> Q) -> R");
}

TEST_CASE("print: unknown atom id") {
    AtomTable t = pqr_table();
    CHECK_THROWS_AS(print_expr(Expr::atom(9), t), UnknownAtomIdError);
}

TEST_CASE("normalize: flattening, constants, double negation") {
    AtomTable t = pqr_table();
    Expr p = Expr::atom(0), q = Expr::atom(1), r = Expr::atom(2);
    CHECK(normalize(Expr::conj({Expr::conj({p, q}), r})) == Expr::conj({p, q, r}));
    CHECK(normalize(Expr::negate(Expr::negate(p))) == p);
    CHECK(normalize(Expr::disj({p, Expr::constant(false)})) == p);
    CHECK(normalize(Expr::disj({p, Expr::constant(true)})) == Expr::constant(true));
    CHECK(normalize(Expr::conj({p, Expr::constant(true)})) == p);
    CHECK(normalize(Expr::implies(Expr::constant(true), q)) == q);
    CHECK(normalize(Expr::iff(Expr::constant(false), q)) == Expr::negate(q));
}

TEST_CASE("normalize: idempotent and semantics-preserving (property)") {
    std::mt19937 rng(101);
    GenOptions opt;
    opt.max_atoms = 12;
    opt.max_depth = 6;
    opt.with_consts = true;
    for (int i = 0; i < 500; ++i) {
        Expr e = random_expr(rng, opt);
        Expr n = normalize(e);
        CHECK(normalize(n) == n);
        CHECK(ref_equivalent(e, n));
    }
}

TEST_CASE("round-trip: parse(print(e)) == e (property)") {
    std::mt19937 rng(202);
    GenOptions opt;
    opt.max_atoms = 12;
    opt.max_depth = 8;
    AtomTable t;
    for (int i = 0; i < 12; ++i) t.intern_phrase("phrase " + std::to_string(i));
    for (int i = 0; i < 1000; ++i) {
        Expr e = random_expr(rng, opt);
        std::string text = print_expr(e, t);
        AtomTable t2 = t;
        CHECK(parse_expr(text, t2, SymbolMode::strict) == e);
    }
}

TEST_CASE("parser rejects one-character paren corruptions") {
    const char* corpus[] = {"Or(P, Q)", "And(Not(P), Or(Q, R))", "Implies(P, Iff(Q, R))",
                            "Not(P)"};
    auto paren_balance_ok = [](const std::string& s) {
        int depth = 0;
        for (char c : s) {
            if (c == '(') ++depth;
            if (c == ')' && --depth < 0) return false;
        }
        return depth == 0;
    };
    int checked = 0;
    for (const char* original : corpus) {
        std::string base = original;
        for (std::size_t i = 0; i < base.size(); ++i) {
            for (char replacement : {'(', ')'}) {
                std::string mutated = base;
                if (mutated[i] == replacement) continue;
                mutated[i] = replacement;
                if (paren_balance_ok(mutated)) continue;  // still balanced; out of scope
                AtomTable t = pqr_table();
                CHECK_THROWS_AS(parse_expr(mutated, t, SymbolMode::register_new), Error);
                ++checked;
            }
        }
    }
    CHECK(checked > 20);  // the corpus actually produced unbalanced mutants
}

TEST_CASE("expression structural equality and atom queries") {
    Expr e = Expr::implies(Expr::atom(2), Expr::conj({Expr::atom(0), Expr::atom(2)}));
    CHECK(e.atoms() == std::vector<AtomId>{0, 2});
    CHECK(e.atoms_in_appearance_order() == std::vector<AtomId>{2, 0});
    CHECK(e.atom_occurrences() == 3);
    CHECK(e != Expr::implies(Expr::atom(2), Expr::conj({Expr::atom(0), Expr::atom(1)})));
    CHECK_THROWS_AS(Expr::conj({Expr::atom(0)}), ArityError);
}
