#pragma once

// DIMACS CNF interchange. Exports are self-describing: the atom legend
// rides in `c var <n> = "<phrase>"` comment lines ahead of the header, with
// 1-based DIMACS numbering (atom id + 1).

#include <iosfwd>
#include <string>

#include "l2l/cnf.hpp"
#include "l2l/error.hpp"

namespace l2l {

struct FormatError : Error {
    int line_no;
    std::string reason;
    FormatError(int line_no_, std::string reason_)
        : Error("dimacs line " + std::to_string(line_no_) + ": " + reason_),
          line_no(line_no_),
          reason(std::move(reason_)) {}
};

// Emits one `c var` comment per table entry, the `p cnf <nvars> <nclauses>`
// header, then one clause per line with literals as signed integers and a
// trailing ` 0`. LF line endings. An empty clause set over an empty table
// exports as just `p cnf 0 0`.
void export_dimacs(const ClauseSet& cs, std::ostream& out);
std::string export_dimacs(const ClauseSet& cs);

// Inverse of export_dimacs up to clause/literal ordering. `c var` comments
// restore phrases; variables without one get the phrase v<n>. Comment lines
// are tolerated anywhere. Throws FormatError on non-conformant input.
ClauseSet import_dimacs(std::istream& in);
ClauseSet import_dimacs(const std::string& text);

}  // namespace l2l
