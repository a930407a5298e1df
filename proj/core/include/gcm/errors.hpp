#pragma once

#include <stdexcept>
#include <string>

namespace gcm {

// Input/usage problems: bad files, bad parameters, out-of-range queries.
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax errors in netlists / config files, with a 1-based position.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& msg, int line, int col = 0)
      : ValidationError(format(msg, line, col)), line(line), col(col) {}
  int line;
  int col;

 private:
  static std::string format(const std::string& msg, int line, int col) {
    std::string s = "line " + std::to_string(line);
    if (col > 0) s += ", col " + std::to_string(col);
    return s + ": " + msg;
  }
};

// Query outside the model grid hull. No extrapolation ever.
class OutOfHullError : public ValidationError {
 public:
  OutOfHullError(const std::string& axis, double value, double lo, double hi)
      : ValidationError("design point outside grid hull: axis '" + axis + "' value " +
                        std::to_string(value) + " not in [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]"),
        axis(axis) {}
  std::string axis;
};

// Numerical failures (Newton non-convergence, singular MNA system,
// timestep underflow). The CLI maps these to exit code 2.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gcm
