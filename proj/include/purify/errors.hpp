#pragma once

#include <stdexcept>
#include <string>

namespace purify {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class NotHermitian : public Error {
  public:
    using Error::Error;
};

// A dense construction would exceed the desk-scale work/memory budget.
class BudgetExceeded : public Error {
  public:
    using Error::Error;
};

// Post-selection has (numerically) zero success probability.
class PostSelectionFailed : public Error {
  public:
    using Error::Error;
};

class DegenerateSpectrum : public Error {
  public:
    using Error::Error;
};

class UnreachableGoal : public Error {
  public:
    using Error::Error;
};

class SolverError : public Error {
  public:
    using Error::Error;
};

class TrainingFailed : public Error {
  public:
    TrainingFailed(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

  private:
    double best_residual_;
};

}  // namespace purify
