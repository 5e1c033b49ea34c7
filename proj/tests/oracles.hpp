#pragma once

// Independent reference computations used only by tests. They take different routes
// from the library (raw moments instead of central moments, long double brute force,
// closed forms) so that agreement is meaningful.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

inline std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  const long double lp = std::log(static_cast<long double>(p));
  const long double lq = std::log1p(-static_cast<long double>(p));
  for (int k = 0; k <= n; ++k) {
    const long double lc = std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L);
    out[k] = static_cast<double>(std::exp(lc + k * lp + (n - k) * lq));
  }
  return out;
}

// sup |F - Phi| over atoms and left limits, long double throughout.
inline double kolmogorov(const std::vector<double>& probs) {
  long double mu = 0, m2 = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) mu += i * static_cast<long double>(probs[i]);
  for (std::size_t i = 0; i < probs.size(); ++i) m2 += (i - mu) * (i - mu) * probs[i];
  const long double s = std::sqrt(m2);
  long double F = 0, D = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == 0.0) continue;
    const long double Phi = 0.5L * std::erfc(-((i - mu) / s) / std::sqrt(2.0L));
    D = std::max(D, std::fabs(F - Phi));
    F += probs[i];
    D = std::max(D, std::fabs(F - Phi));
  }
  return static_cast<double>(D);
}

// kappa_1..kappa_J from the log of the raw-moment generating series.
inline std::vector<double> cumulants_raw(const std::vector<double>& probs, int J) {
  std::vector<long double> m(J + 1, 0.0L);  // m_j = E X^j / j!
  for (std::size_t k = 0; k < probs.size(); ++k) {
    long double term = probs[k];
    for (int j = 0; j <= J; ++j) {
      m[j] += term;
      term *= static_cast<long double>(k) / (j + 1);
    }
  }
  // h = log(m) with m_0 = 1: n h_n = n m_n - sum_{k=1}^{n-1} k h_k m_{n-k}
  std::vector<long double> h(J + 1, 0.0L);
  for (int n = 1; n <= J; ++n) {
    long double acc = n * m[n];
    for (int k = 1; k < n; ++k) acc -= k * h[k] * m[n - k];
    h[n] = acc / n;
  }
  std::vector<double> kappa(J + 1, 0.0);
  long double fact = 1;
  for (int j = 1; j <= J; ++j) {
    fact *= j;
    kappa[j] = static_cast<double>(h[j] * fact);
  }
  return kappa;
}

inline std::complex<long double> poly_eval(const std::vector<double>& c, std::complex<long double> z) {
  std::complex<long double> acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + static_cast<long double>(*it);
  return acc;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace oracle
