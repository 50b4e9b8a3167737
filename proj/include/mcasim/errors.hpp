#pragma once

#include <stdexcept>
#include <string>

namespace mcasim {

// Caller passed arguments that violate an operation's preconditions.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration (file, grid budget, register size) is out of the supported range.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal consistency check failed; indicates a bug, not bad input.
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mcasim
