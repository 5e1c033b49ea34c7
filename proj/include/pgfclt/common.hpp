#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace pgfclt {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Input violates a documented precondition. The CLI maps this to exit code 1.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotAPgfError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Distribution or construction with no meaningful answer (sigma = 0, k = 0, ...).
class DegenerateError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// An iterative solver hit its cap; `best` carries the last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best)
      : std::runtime_error(what), best_(best) {}
  double best() const noexcept { return best_; }

 private:
  double best_;
};

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value();
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

enum class Exec { serial, parallel };

}  // namespace pgfclt
