#pragma once

#include <stdexcept>
#include <string>

namespace afem {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Parse failure in the boundary/expression mini-language; position is the
// 0-based character offset into the input string.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A linear solve gave up; carries the relative residual it reached.
class SolveError : public Error {
 public:
  SolveError(const std::string& what, double achieved_residual)
      : Error(what + " (achieved relative residual " +
              std::to_string(achieved_residual) + ")"),
        achieved_residual_(achieved_residual) {}
  double achieved_residual() const { return achieved_residual_; }

 private:
  double achieved_residual_;
};

}  // namespace afem
