#pragma once

#include <stdexcept>
#include <string>

namespace portsel {

/// Malformed input text. Carries the 1-based line where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Well-formed input that violates a model invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No portfolio of the requested shape satisfies the quantity bounds.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A move could not be applied to a state, either because its preconditions
/// fail or because the repair step cannot restore feasibility.
class MoveRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Renormalization cannot keep every held asset within its bounds.
class RepairError : public MoveRejected {
 public:
  using MoveRejected::MoveRejected;
};

}  // namespace portsel
