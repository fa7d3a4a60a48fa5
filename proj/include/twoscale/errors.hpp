#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twoscale {

// Base of every error raised by the library. The CLI maps the subclasses onto
// exit codes (config 2, precondition 3, self-check 4).
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

class EvalError : public Error {
  public:
    using Error::Error;
};

// Input shape or range violations (bad grid, mismatched sizes, t outside [0,T]).
class DomainError : public Error {
  public:
    using Error::Error;
};

// A mathematical precondition of a solver does not hold: vanishing envelope,
// degenerate Lambda_n, unsolvable spatial problem, truncation too coarse.
class PreconditionError : public Error {
  public:
    PreconditionError(const std::string& what, int mode = 0) : Error(what), mode_(mode) {}

    // Offending mode/harmonic index, 0 when not applicable.
    int mode() const noexcept { return mode_; }

  private:
    int mode_;
};

class SelfCheckError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace twoscale
