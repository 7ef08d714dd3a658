#pragma once

#include <stdexcept>
#include <string>

namespace levysplit {

// Bad inputs: parameters, grids, configs. The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A stability condition on the grid step is violated.
class StabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class GridMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Failures during computation. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public NumericalError {
 public:
  OverflowError(const std::string& what, int squarings)
      : NumericalError(what), squarings_(squarings) {}
  int squarings() const { return squarings_; }

 private:
  int squarings_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : NumericalError(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

}  // namespace levysplit
