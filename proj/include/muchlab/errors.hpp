#pragma once

#include <stdexcept>
#include <string>

namespace muchlab {

// Precondition violations: bad arguments, unsupported parameter ranges.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation left the range of double precision or produced NaN.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error("at position " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace muchlab
