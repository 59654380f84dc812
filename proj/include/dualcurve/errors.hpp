#pragma once

#include <stdexcept>
#include <string>

namespace dualcurve {

// Raised when a run would exceed its enumeration budget. CLI maps this to
// exit code 3.
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed or out-of-range configuration. CLI maps this to exit
// code 2. `line` is zero when no source line applies.
class config_error : public std::runtime_error {
public:
    config_error(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

// Invariant breakage inside the library (e.g. a root bracket that cannot
// fail on valid input). CLI maps this to exit code 4.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace dualcurve
