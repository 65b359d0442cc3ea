#pragma once

#include <stdexcept>
#include <string>

namespace wco {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation outside the closed unit disk.
struct OutsideDomainError : Error {
    explicit OutsideDomainError(const std::string& msg) : Error(msg) {}
};

// Evaluation at a listed singular boundary point.
struct SingularPointError : Error {
    explicit SingularPointError(const std::string& msg) : Error(msg) {}
};

// A quadrature or sweep failed its doubling / stabilization check.
struct NonConvergentError : Error {
    explicit NonConvergentError(const std::string& msg) : Error(msg) {}
};

// The estimated coefficient tail at the sampling radius is too large.
struct AliasingError : Error {
    explicit AliasingError(const std::string& msg) : Error(msg) {}
};

// A stability criterion could not decide either way.  CLI maps this to
// exit code 2 rather than 1.
struct UndecidedError : Error {
    explicit UndecidedError(const std::string& msg) : Error(msg) {}
};

// Iterative norm computation hit its iteration cap.
struct NoConvergenceError : Error {
    explicit NoConvergenceError(const std::string& msg) : Error(msg) {}
};

// A required boundedness hypothesis failed (e.g. the Carleson test).
struct NotBoundedError : Error {
    explicit NotBoundedError(const std::string& msg) : Error(msg) {}
};

// No disk-grid point reached the requested superlevel set.
struct EmptyLevelError : Error {
    explicit EmptyLevelError(const std::string& msg) : Error(msg) {}
};

// Scenario text could not be parsed.
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(col_) + ")"),
          line(line_), column(col_) {}
};

// Scenario parsed but failed semantic validation.
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

} // namespace wco
