#pragma once

#include <cstddef>
#include <vector>

#include "pgfclt/common.hpp"

namespace pgfclt {

// Law of a nonnegative integer random variable supported on {0, span, 2 span, ...}.
class DiscretePMF {
 public:
  // Strict: entries must be >= 0 and sum to 1 within 1e-9 (then renormalized).
  explicit DiscretePMF(std::vector<double> probs, long span = 1);

  // Normalizes any nonnegative weight vector with positive mass.
  static DiscretePMF from_weights(std::vector<double> weights, long span = 1);
  static DiscretePMF point_mass(std::size_t at = 0);

  const std::vector<double>& probs() const noexcept { return probs_; }
  long span() const noexcept { return span_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  DiscretePMF with_span(long span) const;

  // Coefficients of the PGF in z (span folded in: index i*span).
  std::vector<double> expanded() const;

 private:
  struct Unchecked {};
  DiscretePMF(Unchecked, std::vector<double> probs, long span)
      : probs_(std::move(probs)), span_(span) {}

  std::vector<double> probs_;
  long span_ = 1;
};

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  double sigma() const { return std::sqrt(variance); }
};

MomentSummary moments(const DiscretePMF& p);

// Cumulants kappa_0..kappa_J (index 0 unused, set to 0).
std::vector<double> cumulants_from_pmf(const DiscretePMF& p, int J = 16);

DiscretePMF convolve(const DiscretePMF& p, const DiscretePMF& q, Exec exec = Exec::parallel);
DiscretePMF convolution_power(const DiscretePMF& p, long m);
DiscretePMF scale_support(const DiscretePMF& p, long k);

// sup_t |F(t) - Phi(t)| for the standardized law. Evaluated at every atom against
// both one-sided limits of the step CDF.
double kolmogorov_distance(const DiscretePMF& p, Exec exec = Exec::parallel);

namespace serial {
DiscretePMF convolve(const DiscretePMF& p, const DiscretePMF& q);
double kolmogorov_distance(const DiscretePMF& p);
}  // namespace serial

}  // namespace pgfclt
