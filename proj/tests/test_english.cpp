#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "l2l/english.hpp"

using namespace l2l;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SentenceSpan span_of(const std::string& text) {
    auto spans = split_sentences(text);
    REQUIRE(spans.size() == 1);
    return spans[0];
}

// Flat "LABEL:token" rendering of the preterminal layer, for tree checks.
std::string preterminal_signature(const ParseTree& node) {
    if (node.is_leaf()) return "'" + node.token + "'";
    if (node.children.size() == 1 && node.children[0].is_leaf())
        return node.label + ":" + node.children[0].token;
    std::string out = node.label + "(";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += " ";
        out += preterminal_signature(node.children[i]);
    }
    return out + ")";
}

}  // namespace

TEST_CASE("split_sentences: frozen cases") {
    auto two = split_sentences("It rains. It pours.");
    REQUIRE(two.size() == 2);
    CHECK(two[0].text == "It rains.");
    CHECK(two[1].text == "It pours.");
    CHECK(two[0].index == 0);
    CHECK(two[1].index == 1);

    CHECK(split_sentences("").empty());

    auto one = split_sentences("The circus has a ferris wheel or a rollercoaster.");
    REQUIRE(one.size() == 1);
    CHECK(one[0].text == "The circus has a ferris wheel or a rollercoaster.");
}

TEST_CASE("split_sentences: abbreviations, punctuation runs, offsets") {
    auto spans = split_sentences("Ask Dr. Smith, e.g. today. It rains!");
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].text == "Ask Dr. Smith, e.g. today.");
    CHECK(spans[1].text == "It rains!");

    auto bang = split_sentences("What?! It rains.");
    REQUIRE(bang.size() == 2);
    CHECK(bang[0].text == "What?!");

    auto no_terminal = split_sentences("  it rains");
    REQUIRE(no_terminal.size() == 1);
    CHECK(no_terminal[0].text == "it rains");

    std::string text = " One. Two. ";
    auto offs = split_sentences(text);
    REQUIRE(offs.size() == 2);
    CHECK(text.substr(offs[0].begin, offs[0].end - offs[0].begin) == "One.");
    CHECK(text.substr(offs[1].begin, offs[1].end - offs[1].begin) == "Two.");
}

TEST_CASE("tokenize_words: clitic split and punctuation") {
    auto tokens = tokenize_words("The circus doesn't open.");
    std::vector<std::string> texts;
    for (const auto& t : tokens) texts.push_back(t.text);
    CHECK(texts == std::vector<std::string>{"The", "circus", "does", "n't", "open", "."});
    CHECK(tokens[0].lower == "the");
}

TEST_CASE("parse_sentence: statement tree shape (frozen)") {
    auto parse = parse_sentence(span_of("The circus has a ferris wheel."), Grammar::built_in());
    CHECK(!parse.ambiguous);
    CHECK(parse.tree.label == "S");
    CHECK(preterminal_signature(parse.tree) ==
          "S(STATEMENT(DET:The NOUN:circus VERB:has DET:a NOUN:ferris NOUN:wheel) PUNC:.)");
}

TEST_CASE("parse_sentence: conditional tree shape (frozen)") {
    auto parse =
        parse_sentence(span_of("If it rains then the ground is wet."), Grammar::built_in());
    CHECK(!parse.ambiguous);
    CHECK(preterminal_signature(parse.tree) ==
          "S(IFCLAUSE('If' STATEMENT(NOUN:it VERB:rains) 'then' "
          "STATEMENT(DET:the NOUN:ground AUX:is ADJ:wet)) PUNC:.)");
}

TEST_CASE("parse_sentence: outside the fragment") {
    CHECK_THROWS_AS(
        parse_sentence(span_of("Colorless ideas sleep furiously between."), Grammar::built_in()),
        NoParseError);
    try {
        parse_sentence(span_of("Colorless ideas sleep furiously between."), Grammar::built_in());
    } catch (const NoParseError& e) {
        CHECK(e.furthest_token >= 0);
        CHECK(e.sentence == "Colorless ideas sleep furiously between.");
    }
}

TEST_CASE("parse_sentence: leaves appear in source order") {
    auto parse = parse_sentence(span_of("If it rains, the ground is wet."), Grammar::built_in());
    auto leaves = parse.tree.leaf_tokens();
    CHECK(leaves == std::vector<std::string>{"If", "it", "rains", ",", "the", "ground", "is",
                                             "wet", "."});
}

TEST_CASE("tree_to_expr: object coordination distributes subject+predicate (frozen)") {
    AtomTable table;
    auto parse = parse_sentence(span_of("The circus has a ferris wheel or a rollercoaster."),
                                Grammar::built_in());
    Expr e = tree_to_expr(parse.tree, table);
    REQUIRE(table.size() == 2);
    CHECK(table.symbol(0) == "P");
    CHECK(table.phrase(0) == "circus has ferris wheel");
    CHECK(table.symbol(1) == "Q");
    CHECK(table.phrase(1) == "circus has rollercoaster");
    CHECK(print_expr(e, table) == "Or(P, Q)");
}

TEST_CASE("tree_to_expr: negation extracts a positive-polarity atom (frozen)") {
    AtomTable table;
    auto parse =
        parse_sentence(span_of("The circus does not have a carousel."), Grammar::built_in());
    Expr e = tree_to_expr(parse.tree, table);
    REQUIRE(table.size() == 1);
    CHECK(table.phrase(0) == "circus have carousel");
    CHECK(print_expr(e, table) == "Not(P)");
}

TEST_CASE("tree_to_expr: repeated canonical phrases reuse the atom id") {
    AtomTable table;
    const Grammar& g = Grammar::built_in();
    Expr a = tree_to_expr(
        parse_sentence(span_of("If it rains then the ground is wet."), g).tree, table);
    Expr b = tree_to_expr(parse_sentence(span_of("The ground is wet."), g).tree, table);
    CHECK(table.size() == 2);  // "it rains", "ground is wet" — no third atom
    CHECK(a == Expr::implies(Expr::atom(0), Expr::atom(1)));
    CHECK(b == Expr::atom(1));
}

TEST_CASE("tree_to_expr: negation forms") {
    AtomTable table;
    const Grammar& g = Grammar::built_in();
    // "never" negates without do-support, so the verb keeps its form.
    Expr never = tree_to_expr(
        parse_sentence(span_of("The circus never has a carousel."), g).tree, table);
    CHECK(table.phrase(0) == "circus has carousel");
    CHECK(never == Expr::negate(Expr::atom(0)));
    // Copular negation keeps the auxiliary.
    Expr not_wet =
        tree_to_expr(parse_sentence(span_of("The ground is not wet."), g).tree, table);
    CHECK(table.phrase(1) == "ground is wet");
    CHECK(not_wet == Expr::negate(Expr::atom(1)));
    // Clitic negation.
    Expr clitic = tree_to_expr(
        parse_sentence(span_of("The circus doesn't have a carousel."), g).tree, table);
    CHECK(clitic == Expr::negate(Expr::atom(table.size() - 1)));
    CHECK(table.phrase(table.size() - 1) == "circus have carousel");
}

TEST_CASE("tree_to_expr: three-way coordination and sentence coordination") {
    AtomTable table;
    const Grammar& g = Grammar::built_in();
    Expr triple = tree_to_expr(
        parse_sentence(span_of("The circus has a tent or a clown or a lion."), g).tree, table);
    CHECK(triple == Expr::disj({Expr::atom(0), Expr::atom(1), Expr::atom(2)}));
    CHECK(table.phrase(2) == "circus has lion");

    Expr both = tree_to_expr(parse_sentence(span_of("It rains and it pours."), g).tree, table);
    CHECK(both == Expr::conj({Expr::atom(3), Expr::atom(4)}));
}

TEST_CASE("tree_to_expr: negation scopes over object coordination") {
    AtomTable table;
    auto parse = parse_sentence(
        span_of("The circus does not have a tent or a clown."), Grammar::built_in());
    Expr e = tree_to_expr(parse.tree, table);
    // "has neither": the negation wraps the disjunction of positive atoms.
    CHECK(e == Expr::negate(Expr::disj({Expr::atom(0), Expr::atom(1)})));
    CHECK(table.phrase(0) == "circus have tent");
    CHECK(table.phrase(1) == "circus have clown");
}

TEST_CASE("paragraph_to_exprs: circus corpus has 4 sentences over 4 variables") {
    std::string text = slurp(std::string(L2L_ASSET_DIR) + "/corpus_circus.txt");
    ParagraphResult result = paragraph_to_exprs(text, Grammar::built_in());
    CHECK(result.sentences.size() == 4);
    CHECK(result.parsed_count() == 4);
    CHECK(result.table.size() == 4);
}

TEST_CASE("paragraph_to_exprs: frozen composition cases") {
    ParagraphResult empty = paragraph_to_exprs("", Grammar::built_in());
    CHECK(empty.sentences.empty());
    CHECK(empty.table.size() == 0);

    ParagraphResult mixed = paragraph_to_exprs(
        "It rains. Colorless ideas sleep furiously between.", Grammar::built_in());
    REQUIRE(mixed.sentences.size() == 2);
    CHECK(mixed.sentences[0].expr.has_value());
    CHECK(!mixed.sentences[1].expr.has_value());
    CHECK(mixed.sentences[1].no_parse.has_value());
    CHECK(mixed.parsed_count() == 1);
}

TEST_CASE("paragraph_to_exprs: deterministic and policy-independent") {
    std::string text = slurp(std::string(L2L_ASSET_DIR) + "/corpus_coverage.txt");
    ParagraphResult serial1 = paragraph_to_exprs(text, Grammar::built_in(), Exec::serial);
    ParagraphResult serial2 = paragraph_to_exprs(text, Grammar::built_in(), Exec::serial);
    ParagraphResult parallel = paragraph_to_exprs(text, Grammar::built_in(), Exec::parallel);

    CHECK(serial1.table == serial2.table);
    CHECK(serial1.table == parallel.table);
    REQUIRE(serial1.sentences.size() == parallel.sentences.size());
    for (std::size_t i = 0; i < serial1.sentences.size(); ++i) {
        CHECK(serial1.sentences[i].expr == parallel.sentences[i].expr);
        CHECK(serial1.sentences[i].no_parse == parallel.sentences[i].no_parse);
    }
}

TEST_CASE("golden corpus: every sentence parses exactly once, atoms = distinct phrases") {
    for (const char* name : {"/corpus_circus.txt", "/corpus_coverage.txt"}) {
        std::string text = slurp(std::string(L2L_ASSET_DIR) + name);
        ParagraphResult result = paragraph_to_exprs(text, Grammar::built_in());
        for (const SentenceOutcome& s : result.sentences) {
            INFO(s.span.text);
            CHECK(s.expr.has_value());
            CHECK(!s.ambiguous);
        }
        // Bijection: every atom id carries a distinct phrase.
        for (int i = 0; i < result.table.size(); ++i)
            for (int j = i + 1; j < result.table.size(); ++j)
                CHECK(result.table.phrase(i) != result.table.phrase(j));
    }
}

TEST_CASE("polarity safety: no negation token survives in any stored phrase") {
    for (const char* name : {"/corpus_circus.txt", "/corpus_coverage.txt"}) {
        std::string text = slurp(std::string(L2L_ASSET_DIR) + name);
        ParagraphResult result = paragraph_to_exprs(text, Grammar::built_in());
        for (int i = 0; i < result.table.size(); ++i) {
            const std::string& phrase = result.table.phrase(i);
            INFO(phrase);
            CHECK(phrase.find("not") == std::string::npos);
            CHECK(phrase.find("n't") == std::string::npos);
            CHECK(phrase.find("never") == std::string::npos);
        }
    }
}

TEST_CASE("unknown words default to NOUN; closed classes stay closed") {
    AtomTable table;
    auto parse = parse_sentence(span_of("The zyxwv has a qqfoo."), Grammar::built_in());
    Expr e = tree_to_expr(parse.tree, table);
    CHECK(e == Expr::atom(0));
    CHECK(table.phrase(0) == "zyxwv has qqfoo");
}

TEST_CASE("lexical 'implies' is a verb, one atom") {
    AtomTable table;
    auto parse = parse_sentence(span_of("Hard work implies success."), Grammar::built_in());
    Expr e = tree_to_expr(parse.tree, table);
    CHECK(e == Expr::atom(0));
    CHECK(table.phrase(0) == "hard work implies success");
}

TEST_CASE("grammar loader: format and errors") {
    Grammar g = Grammar::from_text("# comment\nS -> NOUN | NOUN PUNC\nPUNC -> '.'\n");
    CHECK(g.productions().size() == 3);
    CHECK(g.is_nonterminal("S"));
    CHECK(g.words_of("PUNC") == std::vector<std::string>{"."});

    CHECK_THROWS_AS(Grammar::from_text("S NOUN\n"), GrammarError);
    CHECK_THROWS_AS(Grammar::from_text("S -> | NOUN\n"), GrammarError);
    CHECK_THROWS_AS(Grammar::from_text("S -> 'unterminated\n"), GrammarError);
    CHECK_THROWS_AS(Grammar::from_text("X -> NOUN\n"), GrammarError);  // no S

    Grammar esc = Grammar::from_text("S -> NEG\nNEG -> 'n\\'t'\n");
    CHECK(esc.words_of("NEG") == std::vector<std::string>{"n't"});
}

TEST_CASE("grammar override: custom fragment via from_text") {
    Grammar g = Grammar::from_text(
        "S -> STATEMENT PUNC\nSTATEMENT -> NOUN VERB\nVERB -> 'meows'\nPUNC -> '.'\n");
    auto parse = parse_sentence(span_of("Cat meows."), g);
    AtomTable table;
    Expr e = tree_to_expr(parse.tree, table);
    CHECK(e == Expr::atom(0));
    CHECK(table.phrase(0) == "cat meows");
}

TEST_CASE("canonicalizer: legend phrases match frontend atoms") {
    Canonicalizer canon(Grammar::built_in());
    CanonicalAtom a = canon.canonicalize("The circus has a ferris wheel");
    CHECK(a.phrase == "circus has ferris wheel");
    CHECK(!a.polarity_extracted);

    CanonicalAtom b = canon.canonicalize("The circus does not have a carousel.");
    CHECK(b.phrase == "circus have carousel");
    CHECK(b.polarity_extracted);

    CanonicalAtom c = canon.canonicalize("the ground is not wet");
    CHECK(c.phrase == "ground is wet");
    CHECK(c.polarity_extracted);
}
