#include "l2l/english.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "l2l/embedded_assets.hpp"

namespace l2l {

// ── split_sentences ─────────────────────────────────────────────────────────

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

const std::array<std::string_view, 6> kAbbreviations = {"e.g.", "i.e.", "etc.",
                                                        "mr.",  "dr.",  "vs."};

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// The word ending at offset `dot_end` (exclusive), including its periods.
std::string_view word_ending_at(std::string_view text, std::size_t dot_end) {
    std::size_t start = dot_end;
    while (start > 0 && !is_space(text[start - 1])) --start;
    return text.substr(start, dot_end - start);
}

}  // namespace

std::vector<SentenceSpan> split_sentences(std::string_view text) {
    std::vector<SentenceSpan> spans;
    std::size_t start = 0;

    auto flush = [&](std::size_t end) {
        // Trim whitespace off both sides; drop empty spans.
        std::size_t b = start, e = end;
        while (b < e && is_space(text[b])) ++b;
        while (e > b && is_space(text[e - 1])) --e;
        if (b < e)
            spans.push_back(SentenceSpan{std::string(text.substr(b, e - b)),
                                         static_cast<int>(spans.size()), b, e});
        start = end;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (i + 1 < text.size() && !is_space(text[i + 1])) continue;
        if (c == '.') {
            std::string word = to_lower(word_ending_at(text, i + 1));
            if (std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
                kAbbreviations.end())
                continue;
        }
        flush(i + 1);
    }
    flush(text.size());
    return spans;
}

// ── tokenize_words ──────────────────────────────────────────────────────────

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-';
}

}  // namespace

std::vector<Token> tokenize_words(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        if (is_space(text[i])) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        if (is_word_char(text[i])) {
            while (i < text.size() && is_word_char(text[i])) ++i;
            std::string_view word = text.substr(begin, i - begin);
            // Penn-style clitic split: "doesn't" -> "does" + "n't".
            if (word.size() > 3 && word.substr(word.size() - 3) == "n't") {
                std::size_t stem_end = begin + word.size() - 3;
                tokens.push_back(Token{std::string(word.substr(0, word.size() - 3)),
                                       to_lower(word.substr(0, word.size() - 3)), begin,
                                       stem_end});
                tokens.push_back(Token{"n't", "n't", stem_end, i});
                continue;
            }
            tokens.push_back(Token{std::string(word), to_lower(word), begin, i});
        } else {
            ++i;
            tokens.push_back(
                Token{std::string(text.substr(begin, 1)), std::string(text.substr(begin, 1)),
                      begin, i});
        }
    }
    return tokens;
}

// ── Grammar loading ─────────────────────────────────────────────────────────

namespace {

bool valid_symbol_name(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace

Grammar Grammar::from_text(std::string_view text) {
    Grammar g;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool saw_start = false;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;

        std::size_t arrow = sv.find("->");
        if (arrow == std::string_view::npos)
            throw GrammarError(line_no, "missing '->'");
        std::string lhs(trim(sv.substr(0, arrow)));
        if (!valid_symbol_name(lhs))
            throw GrammarError(line_no, "bad nonterminal name '" + lhs + "'");
        std::string_view rest = sv.substr(arrow + 2);

        // Tokenize the right-hand side: quoted terminals (\' escapes an
        // apostrophe), '|' alternative separators, bare nonterminal names.
        std::vector<GrammarSymbol> current;
        auto flush_alt = [&]() {
            if (current.empty())
                throw GrammarError(line_no, "empty alternative (epsilon rules unsupported)");
            g.productions_.push_back(Production{lhs, std::move(current)});
            current.clear();
        };
        std::size_t i = 0;
        while (i < rest.size()) {
            char c = rest[i];
            if (is_space(c)) {
                ++i;
            } else if (c == '|') {
                flush_alt();
                ++i;
            } else if (c == '\'') {
                std::string word;
                ++i;
                bool closed = false;
                while (i < rest.size()) {
                    if (rest[i] == '\\' && i + 1 < rest.size() && rest[i + 1] == '\'') {
                        word += '\'';
                        i += 2;
                    } else if (rest[i] == '\'') {
                        ++i;
                        closed = true;
                        break;
                    } else {
                        word += rest[i++];
                    }
                }
                if (!closed) throw GrammarError(line_no, "unterminated terminal quote");
                if (word.empty()) throw GrammarError(line_no, "empty terminal");
                current.push_back(GrammarSymbol{true, to_lower(word)});
            } else {
                std::size_t b = i;
                while (i < rest.size() && !is_space(rest[i]) && rest[i] != '|' &&
                       rest[i] != '\'')
                    ++i;
                std::string name(rest.substr(b, i - b));
                if (!valid_symbol_name(name))
                    throw GrammarError(line_no, "bad symbol '" + name + "'");
                current.push_back(GrammarSymbol{false, std::move(name)});
            }
        }
        flush_alt();
        if (lhs == g.start_) saw_start = true;
    }
    if (!saw_start) throw GrammarError(line_no, "no production for start symbol S");
    return g;
}

Grammar Grammar::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open grammar file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

const Grammar& Grammar::built_in() {
    static const Grammar g = Grammar::from_text(assets::kDefaultGrammar);
    return g;
}

std::vector<std::string> Grammar::lexical_tags(std::string_view lower_word) const {
    std::vector<std::string> tags;
    for (const Production& p : productions_)
        if (p.rhs.size() == 1 && p.rhs[0].terminal && p.rhs[0].text == lower_word)
            if (std::find(tags.begin(), tags.end(), p.lhs) == tags.end())
                tags.push_back(p.lhs);
    return tags;
}

bool Grammar::is_nonterminal(std::string_view name) const {
    for (const Production& p : productions_)
        if (p.lhs == name) return true;
    return false;
}

std::vector<std::string> Grammar::words_of(std::string_view preterminal) const {
    std::vector<std::string> words;
    for (const Production& p : productions_)
        if (p.lhs == preterminal && p.rhs.size() == 1 && p.rhs[0].terminal)
            words.push_back(p.rhs[0].text);
    return words;
}

bool Grammar::is_visible_label(std::string_view name) {
    return !name.empty() && std::none_of(name.begin(), name.end(), [](char c) {
        return std::islower(static_cast<unsigned char>(c));
    });
}

// ── Earley parser ───────────────────────────────────────────────────────────

std::vector<std::string> ParseTree::leaf_tokens() const {
    std::vector<std::string> out;
    if (is_leaf()) {
        out.push_back(token);
        return out;
    }
    for (const ParseTree& c : children) {
        auto sub = c.leaf_tokens();
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

namespace {

struct EarleyItem {
    int prod;
    int dot;
    int origin;
    auto operator<=>(const EarleyItem&) const = default;
};

class SentenceParser {
public:
    SentenceParser(const Grammar& grammar, std::vector<Token> tokens)
        : grammar_(grammar), tokens_(std::move(tokens)) {
        // File-order productions, then synthesized NOUN entries for words
        // the lexicon does not cover (the open-class fallback).
        for (const Production& p : grammar_.productions()) prods_.push_back(p);
        std::set<std::string> added;
        for (const Token& t : tokens_) {
            if (!grammar_.lexical_tags(t.lower).empty()) continue;
            if (!added.insert(t.lower).second) continue;
            prods_.push_back(Production{"NOUN", {GrammarSymbol{true, t.lower}}});
        }
        for (std::size_t i = 0; i < prods_.size(); ++i)
            by_lhs_[prods_[i].lhs].push_back(static_cast<int>(i));
    }

    // Number of parses capped at 2, plus the first tree when one exists.
    std::pair<int, ParseTree> run(const std::string& sentence_text) {
        recognize();
        const int n = static_cast<int>(tokens_.size());
        int count = count_symbol(start_id(), 0, n);
        if (count == 0) {
            std::string near = furthest_ < n ? tokens_[furthest_].text : "<end>";
            throw NoParseError(sentence_text, furthest_, near);
        }
        std::vector<ParseTree> roots = build_symbol(start_id(), 0, n);
        assert(roots.size() == 1);  // S is visible
        return {count, std::move(roots.front())};
    }

private:
    int start_id() const { return symbol_id(grammar_.start_symbol()); }

    int symbol_id(std::string_view name) const {
        auto it = sym_ids_.find(std::string(name));
        if (it != sym_ids_.end()) return it->second;
        int id = static_cast<int>(sym_names_.size());
        sym_names_.push_back(std::string(name));
        sym_ids_.emplace(std::string(name), id);
        return id;
    }

    void recognize() {
        const int n = static_cast<int>(tokens_.size());
        chart_.assign(n + 1, {});
        seen_.assign(n + 1, {});
        auto push = [&](int pos, EarleyItem item) {
            if (seen_[pos].insert(item).second) chart_[pos].push_back(item);
        };
        for (int pi : prods_of(grammar_.start_symbol())) push(0, EarleyItem{pi, 0, 0});

        for (int pos = 0; pos <= n; ++pos) {
            for (std::size_t idx = 0; idx < chart_[pos].size(); ++idx) {
                EarleyItem item = chart_[pos][idx];
                const Production& p = prods_[item.prod];
                if (item.dot < static_cast<int>(p.rhs.size())) {
                    const GrammarSymbol& sym = p.rhs[item.dot];
                    if (sym.terminal) {
                        if (pos < n && tokens_[pos].lower == sym.text) {
                            push(pos + 1, EarleyItem{item.prod, item.dot + 1, item.origin});
                            furthest_ = std::max(furthest_, pos + 1);
                        }
                    } else {
                        for (int pi : prods_of(sym.text)) push(pos, EarleyItem{pi, 0, pos});
                    }
                } else {
                    // Complete: advance every item waiting on p.lhs at origin.
                    completed_[key(symbol_id(p.lhs), item.origin)].insert(
                        {pos, item.prod});
                    for (std::size_t j = 0; j < chart_[item.origin].size(); ++j) {
                        EarleyItem w = chart_[item.origin][j];
                        const Production& q = prods_[w.prod];
                        if (w.dot < static_cast<int>(q.rhs.size()) &&
                            !q.rhs[w.dot].terminal && q.rhs[w.dot].text == p.lhs)
                            push(pos, EarleyItem{w.prod, w.dot + 1, w.origin});
                    }
                }
            }
        }
    }

    const std::vector<int>& prods_of(std::string_view lhs) const {
        static const std::vector<int> kEmpty;
        auto it = by_lhs_.find(std::string(lhs));
        return it == by_lhs_.end() ? kEmpty : it->second;
    }

    static std::uint64_t key(int a, int b, int c = 0, int d = 0) {
        return (std::uint64_t(std::uint16_t(a)) << 48) |
               (std::uint64_t(std::uint16_t(b)) << 32) |
               (std::uint64_t(std::uint16_t(c)) << 16) | std::uint64_t(std::uint16_t(d));
    }

    // Ends and producing rules of completed constituents: (symbol, start) ->
    // set of (end, prod). Distinct ends drive the split enumeration.
    std::vector<int> ends_of(int sym, int start, int limit) const {
        std::vector<int> ends;
        auto it = completed_.find(key(sym, start));
        if (it == completed_.end()) return ends;
        for (const auto& [end, prod] : it->second)
            if (end <= limit &&
                (ends.empty() || ends.back() != end))
                ends.push_back(end);
        return ends;
    }

    bool derives(int sym, int start, int end, int prod) const {
        auto it = completed_.find(key(sym, start));
        return it != completed_.end() && it->second.count({end, prod});
    }

    static int sat_add(int a, int b) { return std::min(a + b, 2); }
    static int sat_mul(int a, int b) { return std::min(a * b, 2); }

    // Parse counts saturate at 2 — enough to detect ambiguity.
    int count_symbol(int sym, int i, int j) {
        auto memo = count_sym_.find(key(sym, i, j));
        if (memo != count_sym_.end()) return memo->second;
        count_sym_[key(sym, i, j)] = 0;  // guards cycles (unit recursion)
        int total = 0;
        for (int pi : prods_of(sym_names_[sym]))
            if (derives(sym, i, j, pi)) total = sat_add(total, count_seq(pi, 0, i, j));
        count_sym_[key(sym, i, j)] = total;
        return total;
    }

    int count_seq(int prod, int k, int i, int j) {
        const Production& p = prods_[prod];
        if (k == static_cast<int>(p.rhs.size())) return i == j ? 1 : 0;
        auto memo = count_seq_.find(key(prod, k, i, j));
        if (memo != count_seq_.end()) return memo->second;
        count_seq_[key(prod, k, i, j)] = 0;
        int total = 0;
        const GrammarSymbol& sym = p.rhs[k];
        if (sym.terminal) {
            if (i < j && tokens_[i].lower == sym.text)
                total = count_seq(prod, k + 1, i + 1, j);
        } else {
            int sid = symbol_id(sym.text);
            for (int m : ends_of(sid, i, j)) {
                if (k + 1 == static_cast<int>(p.rhs.size()) && m != j) continue;
                total = sat_add(total,
                                sat_mul(count_symbol(sid, i, m), count_seq(prod, k + 1, m, j)));
                if (total >= 2) break;
            }
        }
        count_seq_[key(prod, k, i, j)] = total;
        return total;
    }

    // First derivation: productions in file order, then shortest leftmost
    // constituent. Helper (lowercase) nodes are spliced into their parent.
    std::vector<ParseTree> build_symbol(int sym, int i, int j) {
        for (int pi : prods_of(sym_names_[sym])) {
            if (!derives(sym, i, j, pi)) continue;
            if (count_seq(pi, 0, i, j) == 0) continue;
            std::vector<ParseTree> children = build_seq(pi, 0, i, j);
            if (Grammar::is_visible_label(sym_names_[sym])) {
                ParseTree node;
                node.label = sym_names_[sym];
                node.children = std::move(children);
                return {std::move(node)};
            }
            return children;  // helper symbol: splice
        }
        throw UnsupportedTreeShapeError("internal: no derivation during extraction");
    }

    std::vector<ParseTree> build_seq(int prod, int k, int i, int j) {
        const Production& p = prods_[prod];
        if (k == static_cast<int>(p.rhs.size())) return {};
        const GrammarSymbol& sym = p.rhs[k];
        if (sym.terminal) {
            ParseTree leaf;
            leaf.token = tokens_[i].text;
            std::vector<ParseTree> rest = build_seq(prod, k + 1, i + 1, j);
            rest.insert(rest.begin(), std::move(leaf));
            return rest;
        }
        int sid = symbol_id(sym.text);
        for (int m : ends_of(sid, i, j)) {
            if (k + 1 == static_cast<int>(p.rhs.size()) && m != j) continue;
            if (count_symbol(sid, i, m) == 0 || count_seq(prod, k + 1, m, j) == 0) continue;
            std::vector<ParseTree> first = build_symbol(sid, i, m);
            std::vector<ParseTree> rest = build_seq(prod, k + 1, m, j);
            first.insert(first.end(), std::make_move_iterator(rest.begin()),
                         std::make_move_iterator(rest.end()));
            return first;
        }
        throw UnsupportedTreeShapeError("internal: no split during extraction");
    }

    const Grammar& grammar_;
    std::vector<Token> tokens_;
    std::vector<Production> prods_;
    std::map<std::string, std::vector<int>> by_lhs_;
    mutable std::vector<std::string> sym_names_;
    mutable std::map<std::string, int> sym_ids_;
    std::vector<std::vector<EarleyItem>> chart_;
    std::vector<std::set<EarleyItem>> seen_;
    std::unordered_map<std::uint64_t, std::set<std::pair<int, int>>> completed_;
    std::unordered_map<std::uint64_t, int> count_sym_, count_seq_;
    int furthest_ = 0;
};

}  // namespace

SentenceParse parse_sentence(const SentenceSpan& sentence, const Grammar& grammar) {
    SentenceParser parser(grammar, tokenize_words(sentence.text));
    auto [count, tree] = parser.run(sentence.text);
    return SentenceParse{std::move(tree), count >= 2};
}

// ── Canonicalization ────────────────────────────────────────────────────────

namespace {

const std::array<std::string_view, 3> kDoSupport = {"do", "does", "did"};

bool is_do_support(std::string_view w) {
    return std::find(kDoSupport.begin(), kDoSupport.end(), w) != kDoSupport.end();
}

bool is_punct_token(const std::string& lower) {
    return lower.size() == 1 && !std::isalnum(static_cast<unsigned char>(lower[0]));
}

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (const std::string& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

}  // namespace

Canonicalizer::Canonicalizer(const Grammar& grammar)
    : determiners_(grammar.words_of("DET")), negators_(grammar.words_of("NEG")) {}

CanonicalAtom Canonicalizer::canonicalize(std::string_view phrase_text) const {
    std::vector<Token> tokens = tokenize_words(phrase_text);
    bool negated = false;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& w = tokens[i].lower;
        if (is_punct_token(w)) continue;
        if (std::find(determiners_.begin(), determiners_.end(), w) != determiners_.end())
            continue;
        if (std::find(negators_.begin(), negators_.end(), w) != negators_.end()) {
            negated = true;
            continue;
        }
        // A do-support auxiliary only exists to carry the negator; it goes
        // with it.
        if (is_do_support(w) && i + 1 < tokens.size() &&
            std::find(negators_.begin(), negators_.end(), tokens[i + 1].lower) !=
                negators_.end())
            continue;
        kept.push_back(w);
    }
    return CanonicalAtom{join_words(kept), negated};
}

// ── tree_to_expr ────────────────────────────────────────────────────────────

namespace {

bool is_preterminal(const ParseTree& n) {
    return !n.is_leaf() && n.children.size() == 1 && n.children[0].is_leaf();
}

const std::array<std::string_view, 4> kClauseLabels = {"STATEMENT", "IFCLAUSE", "ORCLAUSE",
                                                       "ANDCLAUSE"};

bool is_clause_label(std::string_view l) {
    return std::find(kClauseLabels.begin(), kClauseLabels.end(), l) != kClauseLabels.end();
}

// (label, lowercased word) pairs of a run of preterminal nodes.
struct TaggedWord {
    std::string label;
    std::string lower;
};

std::vector<TaggedWord> tagged_words(const std::vector<const ParseTree*>& nodes) {
    std::vector<TaggedWord> out;
    for (const ParseTree* n : nodes) {
        assert(is_preterminal(*n));
        out.push_back(TaggedWord{n->label, to_lower(n->children[0].token)});
    }
    return out;
}

// Label-driven canonicalization: DET drops, NEG drops (recording polarity),
// and when negated a do-support AUX drops with it.
CanonicalAtom canonical_of(const std::vector<TaggedWord>& words) {
    bool negated =
        std::any_of(words.begin(), words.end(), [](const TaggedWord& w) { return w.label ==
                                                                              "NEG"; });
    std::vector<std::string> kept;
    for (const TaggedWord& w : words) {
        if (w.label == "DET" || w.label == "NEG" || w.label == "PUNC") continue;
        if (negated && w.label == "AUX" && is_do_support(w.lower)) continue;
        kept.push_back(w.lower);
    }
    return CanonicalAtom{join_words(kept), negated};
}

Expr atom_expr(const CanonicalAtom& atom, AtomTable& table) {
    AtomId id = table.intern_phrase(atom.phrase);
    Expr e = Expr::atom(id);
    return atom.polarity_extracted ? Expr::negate(std::move(e)) : e;
}

Expr statement_to_expr(const ParseTree& stmt, AtomTable& table);
Expr clause_to_expr(const ParseTree& node, AtomTable& table);

// Preterminal children of a STATEMENT node, in order.
std::vector<const ParseTree*> statement_parts(const ParseTree& stmt) {
    std::vector<const ParseTree*> parts;
    for (const ParseTree& c : stmt.children) {
        if (!is_preterminal(c))
            throw UnsupportedTreeShapeError("statement with non-lexical child");
        parts.push_back(&c);
    }
    return parts;
}

Expr statement_to_expr(const ParseTree& stmt, AtomTable& table) {
    return atom_expr(canonical_of(tagged_words(statement_parts(stmt))), table);
}

// Coordination node: either full statements joined by the connective, or a
// statement whose object alternatives follow it ("has a ferris wheel or a
// rollercoaster" distributes "circus has" over both objects).
Expr coordination_to_expr(const ParseTree& node, AtomTable& table) {
    const bool disjunction = node.label == "ORCLAUSE";
    std::vector<const ParseTree*> statements;
    std::vector<std::vector<const ParseTree*>> object_segments;
    std::vector<const ParseTree*>* current_segment = nullptr;

    for (const ParseTree& c : node.children) {
        if (c.is_leaf()) {  // the connective (or a comma)
            current_segment = nullptr;
            continue;
        }
        if (c.label == "STATEMENT") {
            statements.push_back(&c);
            current_segment = nullptr;
            continue;
        }
        if (is_preterminal(c)) {
            if (current_segment == nullptr) {
                object_segments.emplace_back();
                current_segment = &object_segments.back();
            }
            current_segment->push_back(&c);
            continue;
        }
        throw UnsupportedTreeShapeError("unexpected child under " + node.label);
    }

    if (statements.empty())
        throw UnsupportedTreeShapeError("coordination without a statement");

    if (object_segments.empty()) {
        if (statements.size() < 2)
            throw UnsupportedTreeShapeError("coordination with a single statement");
        std::vector<Expr> parts;
        for (const ParseTree* s : statements) parts.push_back(statement_to_expr(*s, table));
        return disjunction ? Expr::disj(std::move(parts)) : Expr::conj(std::move(parts));
    }

    // Object coordination: the first statement supplies the shared
    // subject+predicate (everything through the last VERB/AUX plus a
    // directly attached NEG).
    if (statements.size() != 1)
        throw UnsupportedTreeShapeError("mixed statement/object coordination");
    std::vector<TaggedWord> stmt_words = tagged_words(statement_parts(*statements.front()));
    int last_verb = -1;
    for (std::size_t i = 0; i < stmt_words.size(); ++i)
        if (stmt_words[i].label == "VERB" || stmt_words[i].label == "AUX")
            last_verb = static_cast<int>(i);
    if (last_verb < 0) throw UnsupportedTreeShapeError("statement without a predicate");
    std::size_t prefix_end = static_cast<std::size_t>(last_verb) + 1;
    if (prefix_end < stmt_words.size() && stmt_words[prefix_end].label == "NEG") ++prefix_end;
    std::vector<TaggedWord> prefix(stmt_words.begin(), stmt_words.begin() + prefix_end);

    CanonicalAtom first = canonical_of(stmt_words);
    const bool negated = first.polarity_extracted;
    std::vector<Expr> alternatives;
    alternatives.push_back(Expr::atom(table.intern_phrase(first.phrase)));
    for (const auto& segment : object_segments) {
        std::vector<TaggedWord> words = prefix;
        for (const TaggedWord& w : tagged_words(segment)) words.push_back(w);
        alternatives.push_back(Expr::atom(table.intern_phrase(canonical_of(words).phrase)));
    }
    Expr inner = disjunction ? Expr::disj(std::move(alternatives))
                             : Expr::conj(std::move(alternatives));
    // Negation scopes over the whole coordination: "does not have X or Y"
    // reads as not-(X or Y).
    return negated ? Expr::negate(std::move(inner)) : inner;
}

Expr clause_to_expr(const ParseTree& node, AtomTable& table) {
    if (node.label == "STATEMENT") return statement_to_expr(node, table);
    if (node.label == "ORCLAUSE" || node.label == "ANDCLAUSE")
        return coordination_to_expr(node, table);
    if (node.label == "IFCLAUSE") {
        std::vector<const ParseTree*> statements;
        for (const ParseTree& c : node.children)
            if (!c.is_leaf() && is_clause_label(c.label)) statements.push_back(&c);
        if (statements.size() != 2)
            throw UnsupportedTreeShapeError("conditional without two clauses");
        Expr antecedent = clause_to_expr(*statements[0], table);
        Expr consequent = clause_to_expr(*statements[1], table);
        return Expr::implies(std::move(antecedent), std::move(consequent));
    }
    throw UnsupportedTreeShapeError("unexpected clause label " + node.label);
}

}  // namespace

Expr tree_to_expr(const ParseTree& tree, AtomTable& table) {
    if (tree.label != "S") throw UnsupportedTreeShapeError("tree root is not S");
    for (const ParseTree& c : tree.children)
        if (!c.is_leaf() && is_clause_label(c.label)) return clause_to_expr(c, table);
    throw UnsupportedTreeShapeError("S without a clause child");
}

// ── paragraph_to_exprs ──────────────────────────────────────────────────────

std::vector<Expr> ParagraphResult::exprs() const {
    std::vector<Expr> out;
    for (const SentenceOutcome& s : sentences)
        if (s.expr) out.push_back(*s.expr);
    return out;
}

int ParagraphResult::parsed_count() const {
    int n = 0;
    for (const SentenceOutcome& s : sentences)
        if (s.expr) ++n;
    return n;
}

ParagraphResult paragraph_to_exprs(std::string_view text, const Grammar& grammar, Exec exec) {
    std::vector<SentenceSpan> spans = split_sentences(text);
    const int n = static_cast<int>(spans.size());

    struct Parsed {
        std::optional<SentenceParse> parse;
        std::string error;
    };
    std::vector<Parsed> parsed(spans.size());

    // Parsing is pure; trees land in per-sentence slots, so the schedule
    // cannot affect the result. Atom registration below stays sequential.
    auto parse_one = [&](int i) {
        try {
            parsed[i].parse = parse_sentence(spans[i], grammar);
        } catch (const NoParseError& e) {
            parsed[i].error = e.what();
        }
    };
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < n; ++i) parse_one(i);
    } else {
        for (int i = 0; i < n; ++i) parse_one(i);
    }

    ParagraphResult result;
    for (int i = 0; i < n; ++i) {
        SentenceOutcome outcome;
        outcome.span = spans[i];
        outcome.atoms_before = result.table.size();
        if (parsed[i].parse) {
            outcome.expr = tree_to_expr(parsed[i].parse->tree, result.table);
            outcome.ambiguous = parsed[i].parse->ambiguous;
        } else {
            outcome.no_parse = parsed[i].error;
        }
        result.sentences.push_back(std::move(outcome));
    }
    return result;
}

}  // namespace l2l
