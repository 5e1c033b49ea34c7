#pragma once

#include <vector>

#include "pgfclt/common.hpp"
#include "pgfclt/dist_core.hpp"
#include "pgfclt/pgf_roots.hpp"

namespace pgfclt {

// Normalized cumulants a_j = kappa_j / j!, stored for j = 0..J (a_0 = 0).
class CumulantSeq {
 public:
  CumulantSeq() = default;
  explicit CumulantSeq(std::vector<double> a);
  static CumulantSeq from_kappa(const std::vector<double>& kappa);

  int order() const noexcept { return static_cast<int>(a_.size()) - 1; }
  double operator[](int j) const { return a_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& a() const noexcept { return a_; }
  std::vector<double> kappa() const;
  double mean() const { return a_.size() > 1 ? a_[1] : 0.0; }
  double variance() const { return a_.size() > 2 ? 2.0 * a_[2] : 0.0; }

 private:
  std::vector<double> a_;
};

CumulantSeq cumulants_from_roots(const RootSet& roots, int J = 16);
CumulantSeq cumulant_seq_from_pmf(const DiscretePMF& p, int J = 16);

struct TailRatio {
  double ratio = 0.0;
  // Geometric extrapolation of the neglected tail beyond J, relative to the
  // denominator; infinite when the last terms are not decaying.
  double truncation_estimate = 0.0;
};

// sum_{j>=L} |a_j| eps^j / sum_{j>=2} |a_j| eps^j, sums truncated at J.
TailRatio tail_ratio(const CumulantSeq& a, double eps, int L);

struct TailDecayReport {
  double max_scaled_ratio = 0.0;  // max over L of tail_ratio * 2^L
  int worst_L = 2;
  bool within_bound = true;       // tail_ratio <= 3^390 2^-L for every L
};

TailDecayReport tail_decay_report(const CumulantSeq& a, double eps);

struct DominantTerm {
  int ell = 0;
  double s_star = 0.0;
  int iterations = 0;
};

// c[i-1] holds c_i. Requires sum_{i<=L} c_i s^i > sum_{i>L} c_i s^i.
DominantTerm dominant_term_search(std::span<const double> c, double s, double A, int L);

struct TameResult {
  double s_star = 0.0;
  int iterations = 0;
};

// Scale s_star with |a_2| >= s_star^{j-2} |a_j| for every stored j >= 3.
TameResult tame_cumulants(const CumulantSeq& a, double s, int L);

struct NegcosExtrema {
  double min_val, argmin, max_val, argmax;
};

// Extrema of (cos t)^j - cos(j t) over [0, 2 pi].
NegcosExtrema negcos_extrema(int j);

}  // namespace pgfclt
