#include "l2l/ast.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace l2l {

// ── AtomTable ───────────────────────────────────────────────────────────────

std::optional<AtomId> AtomTable::find_symbol(std::string_view symbol) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].symbol == symbol) return static_cast<AtomId>(i);
    return std::nullopt;
}

std::optional<AtomId> AtomTable::find_phrase(std::string_view phrase) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].phrase == phrase) return static_cast<AtomId>(i);
    return std::nullopt;
}

std::string AtomTable::next_auto_symbol() const {
    // P..Z first, then X1, X2, ...; skip names already taken by explicit
    // registrations so the bijection survives mixed usage.
    static const char* kLetters = "PQRSTUVWXYZ";
    for (const char* p = kLetters; *p; ++p) {
        std::string s(1, *p);
        if (!find_symbol(s)) return s;
    }
    for (int n = 1;; ++n) {
        std::string s = "X" + std::to_string(n);
        if (!find_symbol(s)) return s;
    }
}

AtomId AtomTable::intern_phrase(std::string_view phrase) {
    if (auto id = find_phrase(phrase)) return *id;
    return add(next_auto_symbol(), phrase);
}

AtomId AtomTable::intern_symbol(std::string_view symbol) {
    if (auto id = find_symbol(symbol)) return *id;
    return add(symbol, symbol);
}

AtomId AtomTable::add_auto(std::string_view phrase) { return add(next_auto_symbol(), phrase); }

AtomId AtomTable::add(std::string_view symbol, std::string_view phrase) {
    if (find_symbol(symbol))
        throw DuplicateEntryError("symbol already registered: " + std::string(symbol));
    if (find_phrase(phrase))
        throw DuplicateEntryError("phrase already registered: " + std::string(phrase));
    entries_.push_back(Entry{std::string(symbol), std::string(phrase)});
    return static_cast<AtomId>(entries_.size() - 1);
}

const std::string& AtomTable::symbol(AtomId id) const {
    if (id < 0 || id >= size()) throw UnknownAtomIdError(id);
    return entries_[static_cast<std::size_t>(id)].symbol;
}

const std::string& AtomTable::phrase(AtomId id) const {
    if (id < 0 || id >= size()) throw UnknownAtomIdError(id);
    return entries_[static_cast<std::size_t>(id)].phrase;
}

// ── Expr ────────────────────────────────────────────────────────────────────

const char* op_name(Op op) {
    switch (op) {
        case Op::Atom: return "Atom";
        case Op::Const: return "Const";
        case Op::Not: return "Not";
        case Op::And: return "And";
        case Op::Or: return "Or";
        case Op::Implies: return "Implies";
        case Op::Iff: return "Iff";
    }
    return "?";
}

Expr Expr::atom(AtomId id) {
    auto n = std::make_shared<Node>();
    n->op = Op::Atom;
    n->atom = id;
    return Expr(std::move(n));
}

Expr Expr::constant(bool value) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::negate(Expr child) {
    auto n = std::make_shared<Node>();
    n->op = Op::Not;
    n->children.push_back(std::move(child));
    return Expr(std::move(n));
}

Expr Expr::conj(std::vector<Expr> children) {
    if (children.size() < 2)
        throw ArityError(op_name(Op::And), static_cast<int>(children.size()));
    auto n = std::make_shared<Node>();
    n->op = Op::And;
    n->children = std::move(children);
    return Expr(std::move(n));
}

Expr Expr::disj(std::vector<Expr> children) {
    if (children.size() < 2)
        throw ArityError(op_name(Op::Or), static_cast<int>(children.size()));
    auto n = std::make_shared<Node>();
    n->op = Op::Or;
    n->children = std::move(children);
    return Expr(std::move(n));
}

Expr Expr::implies(Expr antecedent, Expr consequent) {
    auto n = std::make_shared<Node>();
    n->op = Op::Implies;
    n->children.push_back(std::move(antecedent));
    n->children.push_back(std::move(consequent));
    return Expr(std::move(n));
}

Expr Expr::iff(Expr left, Expr right) {
    auto n = std::make_shared<Node>();
    n->op = Op::Iff;
    n->children.push_back(std::move(left));
    n->children.push_back(std::move(right));
    return Expr(std::move(n));
}

Expr Expr::conj_fold(std::vector<Expr> children) {
    if (children.empty()) return constant(true);
    if (children.size() == 1) return std::move(children[0]);
    return conj(std::move(children));
}

Expr Expr::disj_fold(std::vector<Expr> children) {
    if (children.empty()) return constant(false);
    if (children.size() == 1) return std::move(children[0]);
    return disj(std::move(children));
}

AtomId Expr::atom_id() const {
    assert(node_->op == Op::Atom);
    return node_->atom;
}

bool Expr::const_value() const {
    assert(node_->op == Op::Const);
    return node_->value;
}

bool Expr::operator==(const Expr& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (node_->op != o.node_->op) return false;
    switch (node_->op) {
        case Op::Atom: return node_->atom == o.node_->atom;
        case Op::Const: return node_->value == o.node_->value;
        default: break;
    }
    if (node_->children.size() != o.node_->children.size()) return false;
    for (std::size_t i = 0; i < node_->children.size(); ++i)
        if (!(node_->children[i] == o.node_->children[i])) return false;
    return true;
}

static void collect_atoms(const Expr& e, std::vector<AtomId>& out) {
    if (e.op() == Op::Atom) {
        out.push_back(e.atom_id());
        return;
    }
    for (const Expr& c : e.children()) collect_atoms(c, out);
}

std::vector<AtomId> Expr::atoms() const {
    std::vector<AtomId> out;
    collect_atoms(*this, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<AtomId> Expr::atoms_in_appearance_order() const {
    std::vector<AtomId> all;
    collect_atoms(*this, all);
    std::vector<AtomId> out;
    std::unordered_set<AtomId> seen;
    for (AtomId a : all)
        if (seen.insert(a).second) out.push_back(a);
    return out;
}

int Expr::atom_occurrences() const {
    std::vector<AtomId> all;
    collect_atoms(*this, all);
    return static_cast<int>(all.size());
}

// ── Parser ──────────────────────────────────────────────────────────────────

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Operator names are case-sensitive and removed from the SYMBOL space.
std::optional<Op> operator_by_name(std::string_view name) {
    if (name == "And") return Op::And;
    if (name == "Or") return Op::Or;
    if (name == "Not") return Op::Not;
    if (name == "Implies") return Op::Implies;
    if (name == "Iff" || name == "Equivalent") return Op::Iff;
    return std::nullopt;
}

class ExprParser {
public:
    ExprParser(std::string_view text, AtomTable& table, SymbolMode mode)
        : text_(text), table_(table), mode_(mode) {}

    Expr parse_full() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError(static_cast<int>(pos_), "trailing input after expression");
        return e;
    }

    PrefixParse parse_prefix() {
        Expr e = parse_expr();
        return PrefixParse{std::move(e), pos_};
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c, const char* what) {
        if (peek() != c)
            throw SyntaxError(static_cast<int>(pos_), std::string("expected ") + what);
        ++pos_;
    }

    std::string read_ident() {
        std::size_t start = pos_;
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_]))
            throw SyntaxError(static_cast<int>(pos_), "expected symbol or operator name");
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Expr parse_expr() {
        skip_ws();
        std::size_t ident_pos = pos_;
        std::string ident = read_ident();
        skip_ws();
        if (auto op = operator_by_name(ident)) {
            if (peek() != '(')
                throw SyntaxError(static_cast<int>(pos_),
                                  "operator name " + ident + " requires an argument list");
            ++pos_;
            std::vector<Expr> args;
            skip_ws();
            if (peek() == ')')
                throw SyntaxError(static_cast<int>(pos_), "empty argument list");
            args.push_back(parse_expr());
            skip_ws();
            while (peek() == ',') {
                ++pos_;
                args.push_back(parse_expr());
                skip_ws();
            }
            expect(')', "')' or ','");
            return build(*op, ident, std::move(args));
        }
        // A SYMBOL followed by '(' means a non-operator name was applied as
        // an operator ("and(P, Q)" and the like); surface it as a syntax
        // error so the detector can classify the line as malformed.
        if (peek() == '(')
            throw SyntaxError(static_cast<int>(pos_),
                              ident + " is not an operator name (operator names are "
                                      "case-sensitive)");
        if (auto id = table_.find_symbol(ident)) return Expr::atom(*id);
        if (mode_ == SymbolMode::strict) {
            (void)ident_pos;
            throw UnknownSymbolError(ident);
        }
        return Expr::atom(table_.intern_symbol(ident));
    }

    Expr build(Op op, const std::string& name, std::vector<Expr> args) {
        int n = static_cast<int>(args.size());
        switch (op) {
            case Op::Not:
                if (n != 1) throw ArityError(name, n);
                return Expr::negate(std::move(args[0]));
            case Op::Implies:
                if (n != 2) throw ArityError(name, n);
                return Expr::implies(std::move(args[0]), std::move(args[1]));
            case Op::Iff:
                if (n != 2) throw ArityError(name, n);
                return Expr::iff(std::move(args[0]), std::move(args[1]));
            case Op::And:
                if (n < 2) throw ArityError(name, n);
                return Expr::conj(std::move(args));
            case Op::Or:
                if (n < 2) throw ArityError(name, n);
                return Expr::disj(std::move(args));
            default:
                throw SyntaxError(static_cast<int>(pos_), "internal: bad operator");
        }
    }

    std::string_view text_;
    AtomTable& table_;
    SymbolMode mode_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, AtomTable& table, SymbolMode mode) {
    return ExprParser(text, table, mode).parse_full();
}

std::optional<PrefixParse> try_parse_prefix(std::string_view text, AtomTable& table,
                                            SymbolMode mode) {
    try {
        return ExprParser(text, table, mode).parse_prefix();
    } catch (const Error&) {
        return std::nullopt;
    }
}

// ── Printer ─────────────────────────────────────────────────────────────────

namespace {

void print_function_call(const Expr& e, const AtomTable& table, std::string& out) {
    switch (e.op()) {
        case Op::Atom:
            out += table.symbol(e.atom_id());
            return;
        case Op::Const:
            out += e.const_value() ? "Const(true)" : "Const(false)";
            return;
        default:
            break;
    }
    out += op_name(e.op());
    out += '(';
    for (int i = 0; i < e.arity(); ++i) {
        if (i) out += ", ";
        print_function_call(e.child(i), table, out);
    }
    out += ')';
}

// Binding strength: ~ (5) > & (4) > | (3) > -> (2) > <-> (1).
int infix_prec(Op op) {
    switch (op) {
        case Op::Atom:
        case Op::Const: return 6;
        case Op::Not: return 5;
        case Op::And: return 4;
        case Op::Or: return 3;
        case Op::Implies: return 2;
        case Op::Iff: return 1;
    }
    return 6;
}

// `min_prec` is the weakest precedence the context accepts unparenthesized.
void print_infix(const Expr& e, const AtomTable& table, int min_prec, std::string& out) {
    int prec = infix_prec(e.op());
    bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (e.op()) {
        case Op::Atom:
            out += table.symbol(e.atom_id());
            break;
        case Op::Const:
            out += e.const_value() ? "True" : "False";
            break;
        case Op::Not:
            out += '~';
            print_infix(e.child(0), table, 5, out);
            break;
        case Op::And:
        case Op::Or: {
            const char* sep = e.op() == Op::And ? " & " : " | ";
            for (int i = 0; i < e.arity(); ++i) {
                if (i) out += sep;
                print_infix(e.child(i), table, prec, out);
            }
            break;
        }
        case Op::Implies:
        case Op::Iff:
            // Right-associative: the antecedent needs parens at equal
            // precedence, the consequent does not.
            print_infix(e.child(0), table, prec + 1, out);
            out += e.op() == Op::Implies ? " -> " : " <-> ";
            print_infix(e.child(1), table, prec, out);
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string print_expr(const Expr& expr, const AtomTable& table, PrintStyle style) {
    std::string out;
    if (style == PrintStyle::function_call)
        print_function_call(expr, table, out);
    else
        print_infix(expr, table, 1, out);
    return out;
}

// ── normalize ───────────────────────────────────────────────────────────────

Expr normalize(const Expr& expr) {
    switch (expr.op()) {
        case Op::Atom:
        case Op::Const:
            return expr;
        case Op::Not: {
            Expr c = normalize(expr.child(0));
            if (c.op() == Op::Not) return c.child(0);  // already normalized
            if (c.op() == Op::Const) return Expr::constant(!c.const_value());
            return Expr::negate(std::move(c));
        }
        case Op::And:
        case Op::Or: {
            const bool is_and = expr.op() == Op::And;
            const bool identity = is_and;      // And drops true, Or drops false
            std::vector<Expr> flat;
            for (const Expr& raw : expr.children()) {
                Expr c = normalize(raw);
                if (c.op() == expr.op()) {
                    for (const Expr& gc : c.children()) flat.push_back(gc);
                } else if (c.op() == Op::Const) {
                    if (c.const_value() == identity) continue;    // identity element
                    return Expr::constant(!identity);             // absorbing element
                } else {
                    flat.push_back(std::move(c));
                }
            }
            return is_and ? Expr::conj_fold(std::move(flat))
                          : Expr::disj_fold(std::move(flat));
        }
        case Op::Implies: {
            Expr a = normalize(expr.child(0));
            Expr b = normalize(expr.child(1));
            if (a.op() == Op::Const)
                return a.const_value() ? b : Expr::constant(true);
            if (b.op() == Op::Const)
                return b.const_value() ? Expr::constant(true) : normalize(Expr::negate(a));
            return Expr::implies(std::move(a), std::move(b));
        }
        case Op::Iff: {
            Expr a = normalize(expr.child(0));
            Expr b = normalize(expr.child(1));
            if (a.op() == Op::Const)
                return a.const_value() ? b : normalize(Expr::negate(b));
            if (b.op() == Op::Const)
                return b.const_value() ? a : normalize(Expr::negate(a));
            return Expr::iff(std::move(a), std::move(b));
        }
    }
    return expr;
}

}  // namespace l2l
