#pragma once

// Exception hierarchy shared by all loopinvar modules.

#include <stdexcept>
#include <string>

namespace loopinvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Lexical or syntactic error in a .loop source, with 1-based position.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int col)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) +
              ": " + msg),
        line(line), col(col) {}
  int line;
  int col;
};

/// Structurally well-formed input that violates a semantic restriction
/// (unknown symbol, probabilities not summing to one, repeated assignment
/// in a probabilistic body, degenerate distribution, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Desugaring failure (e.g. an if-condition over a variable that is not a
/// Bernoulli draw from the same body).
class DesugarError : public Error {
public:
  using Error::Error;
};

/// Moment-closure worklist exceeded its monomial budget.
class ClosureBudgetExceeded : public Error {
public:
  using Error::Error;
};

/// A defective monomial leaked into an effective moment-closure system;
/// indicates an internal inconsistency between partition and recurrences.
class DefectiveLeakError : public Error {
public:
  using Error::Error;
};

/// The contributing spectrum of a closure system has an irrational or
/// complex eigenvalue; closed forms over Q are out of reach.
class UnsupportedSpectrumError : public Error {
public:
  using Error::Error;
};

/// Oracle unrolling exceeded its term budget.
class BudgetExceededError : public Error {
public:
  using Error::Error;
};

/// Cooperative cancellation: a pipeline stage ran past its deadline.
class TimeoutError : public Error {
public:
  using Error::Error;
};

/// Synthesis was asked to run on a program whose defective set is empty
/// (every recurrence already solvable; nothing to synthesize over).
class NoDefectiveVariablesError : public Error {
public:
  using Error::Error;
};

/// Brute-force solvability search refused an instance above its size cap.
class TooLargeError : public Error {
public:
  using Error::Error;
};

/// Polynomial substitution was given no image for a variable it mentions.
class MissingBindingError : public Error {
public:
  using Error::Error;
};

}  // namespace loopinvar
