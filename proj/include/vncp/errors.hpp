#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vncp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// A splitting whose M has a zero on the diagonal.
class SingularSplitting : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// t/(1+t) evaluated at t = -1.
class PoleError : public Error {
public:
  using Error::Error;
};

class NonFiniteError : public Error {
public:
  using Error::Error;
};

/// Raised when the iteration-step bound is requested for a tau with ||T_gamma||_inf >= 1.
class InfeasibleEstimate : public Error {
public:
  using Error::Error;
};

}  // namespace vncp
