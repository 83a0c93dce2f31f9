#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rrk {

/// Dimension mismatch, out-of-range index, or a malformed sparse structure.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed Matrix Market input. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& detail, std::size_t line, const std::string& source = {})
      : std::runtime_error(format(detail, line, source)), detail_(detail), line_(line) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(const std::string& detail, std::size_t line, const std::string& source) {
    std::string out = source.empty() ? std::string{} : source + ":";
    if (line) out += (source.empty() ? "line " : "") + std::to_string(line) + ":";
    return out.empty() ? detail : out + " " + detail;
  }

  std::string detail_;
  std::size_t line_;
};

/// Input that is well formed but mathematically degenerate (zero matrix, A*1 = 0, ...).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of an operation does not hold (zero column under NR-SSOR, omega outside (0,2), ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller misuse: size caps, asymmetric input to a symmetric routine, missing history.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rrk
