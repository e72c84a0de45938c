#include "l2l/dimacs.hpp"

#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace l2l {

void export_dimacs(const ClauseSet& cs, std::ostream& out) {
    const AtomTable& table = *cs.table();
    for (int i = 0; i < table.size(); ++i)
        out << "c var " << i + 1 << " = \"" << table.phrase(i) << "\"\n";
    out << "p cnf " << table.size() << ' ' << cs.size() << '\n';
    for (const Clause& c : cs.clauses()) {
        for (Literal l : c.literals()) out << (l.positive ? l.atom + 1 : -(l.atom + 1)) << ' ';
        out << "0\n";
    }
}

std::string export_dimacs(const ClauseSet& cs) {
    std::ostringstream os;
    export_dimacs(cs, os);
    return os.str();
}

namespace {

// `c var <n> = "<phrase>"` — anything else after `c` is a free comment.
bool parse_var_comment(const std::string& line, int line_no, int& var, std::string& phrase) {
    std::istringstream is(line);
    std::string c, var_kw;
    if (!(is >> c >> var_kw) || var_kw != "var") return false;
    if (!(is >> var)) throw FormatError(line_no, "malformed c var comment");
    std::string rest;
    std::getline(is, rest);
    std::size_t open = rest.find('"');
    std::size_t close = rest.rfind('"');
    if (open == std::string::npos || close <= open)
        throw FormatError(line_no, "c var comment lacks a quoted phrase");
    phrase = rest.substr(open + 1, close - open - 1);
    return true;
}

}  // namespace

ClauseSet import_dimacs(std::istream& in) {
    std::map<int, std::string> phrases;  // 1-based var -> phrase
    int nvars = -1, nclauses = -1;
    std::vector<Clause> clauses;
    std::vector<Literal> current;
    bool in_clause = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == 'c') {
            int var;
            std::string phrase;
            if (parse_var_comment(line, line_no, var, phrase)) {
                if (phrases.count(var))
                    throw FormatError(line_no, "duplicate c var comment for variable " +
                                                   std::to_string(var));
                phrases[var] = phrase;
            }
            continue;
        }
        if (line[0] == 'p') {
            if (nvars >= 0) throw FormatError(line_no, "duplicate problem line");
            std::istringstream is(line);
            std::string p, fmt;
            if (!(is >> p >> fmt >> nvars >> nclauses) || fmt != "cnf" || nvars < 0 ||
                nclauses < 0)
                throw FormatError(line_no, "malformed problem line (want: p cnf <v> <c>)");
            continue;
        }
        if (nvars < 0) throw FormatError(line_no, "clause data before problem line");
        std::istringstream is(line);
        int lit;
        while (is >> lit) {
            if (lit == 0) {
                clauses.push_back(Clause(std::move(current)));
                current.clear();
                in_clause = false;
                continue;
            }
            int var = lit > 0 ? lit : -lit;
            if (var > nvars)
                throw FormatError(line_no, "literal " + std::to_string(lit) +
                                               " out of range for " + std::to_string(nvars) +
                                               " variables");
            current.push_back(Literal{var - 1, lit > 0});
            in_clause = true;
        }
        if (!is.eof()) throw FormatError(line_no, "unexpected token in clause data");
    }
    if (nvars < 0) throw FormatError(line_no, "missing problem line");
    if (in_clause) throw FormatError(line_no, "clause not terminated by 0");
    if (static_cast<int>(clauses.size()) != nclauses)
        throw FormatError(line_no, "clause count " + std::to_string(clauses.size()) +
                                       " does not match header " + std::to_string(nclauses));
    for (const auto& [var, phrase] : phrases)
        if (var < 1 || var > nvars)
            throw FormatError(line_no,
                              "c var comment for out-of-range variable " + std::to_string(var));

    auto table = std::make_shared<AtomTable>();
    for (int v = 1; v <= nvars; ++v) {
        auto it = phrases.find(v);
        try {
            table->add_auto(it != phrases.end() ? it->second : "v" + std::to_string(v));
        } catch (const DuplicateEntryError& e) {
            throw FormatError(line_no, e.what());
        }
    }
    return ClauseSet(std::move(clauses), std::move(table));
}

ClauseSet import_dimacs(const std::string& text) {
    std::istringstream is(text);
    return import_dimacs(is);
}

}  // namespace l2l
