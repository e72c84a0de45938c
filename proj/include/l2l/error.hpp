#pragma once

#include <stdexcept>
#include <string>

namespace l2l {

// Root of the project's error hierarchy. Every failure a caller might want
// to inspect programmatically derives from this and carries typed fields.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace l2l
