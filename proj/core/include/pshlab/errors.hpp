#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pshlab {

/// Syntax error raised by the expression parser; `position` is a byte offset
/// into the input string.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class DimensionMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by to_polynomial when the expression contains an exp node.
class NotPolynomial : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when the growth rule cannot certify integrability against the
/// Gaussian measure.
class UnboundedGrowth : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonFiniteSample : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotHermitian : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pshlab
