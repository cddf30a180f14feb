#pragma once

#include <stdexcept>
#include <string>

namespace pbb84 {

/// Invalid or incomplete run configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative routine exhausted its budget before reaching the requested tolerance.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root bracketing preconditions violated (no sign change on the given interval).
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pbb84
