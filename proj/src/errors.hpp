#pragma once

#include <stdexcept>
#include <string>

namespace spiral {

// Bad arguments or violated preconditions.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plane fit could not be formed (no energy, too few paths, singular system).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}

} // namespace spiral
