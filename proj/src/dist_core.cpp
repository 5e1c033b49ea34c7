#include "pgfclt/dist_core.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <omp.h>

namespace pgfclt {

namespace {

void check_entries(const std::vector<double>& v) {
  require(!v.empty(), "probs: empty vector");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0)
      throw NotAPgfError("probs[" + std::to_string(i) + "]: negative or non-finite entry");
  }
}

struct IndexMoments {
  double mean;
  double var;
};

// Mean and variance in index units, two-pass with compensation.
IndexMoments index_moments(const std::vector<double>& p) {
  CompensatedSum m;
  for (std::size_t i = 0; i < p.size(); ++i) m += p[i] * static_cast<double>(i);
  const double mu = m.value();
  CompensatedSum v;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = static_cast<double>(i) - mu;
    v += p[i] * d * d;
  }
  return {mu, std::max(0.0, v.value())};
}

}  // namespace

DiscretePMF::DiscretePMF(std::vector<double> probs, long span) : probs_(std::move(probs)), span_(span) {
  require(span_ >= 1, "span: must be a positive integer");
  check_entries(probs_);
  const double total = compensated_sum(probs_);
  if (std::abs(total - 1.0) > 1e-9)
    throw NotAPgfError("probs: entries sum to " + std::to_string(total) + ", not 1");
  if (total != 1.0)
    for (double& x : probs_) x /= total;
}

DiscretePMF DiscretePMF::from_weights(std::vector<double> weights, long span) {
  require(span >= 1, "span: must be a positive integer");
  check_entries(weights);
  const double total = compensated_sum(weights);
  if (!(total > 0.0)) throw DegenerateError("probs: zero total mass");
  for (double& x : weights) x /= total;
  return DiscretePMF(Unchecked{}, std::move(weights), span);
}

DiscretePMF DiscretePMF::point_mass(std::size_t at) {
  std::vector<double> v(at + 1, 0.0);
  v[at] = 1.0;
  return DiscretePMF(Unchecked{}, std::move(v), 1);
}

DiscretePMF DiscretePMF::with_span(long span) const {
  require(span >= 1, "span: must be a positive integer");
  return DiscretePMF(Unchecked{}, probs_, span);
}

std::vector<double> DiscretePMF::expanded() const {
  if (span_ == 1) return probs_;
  std::vector<double> out((probs_.size() - 1) * static_cast<std::size_t>(span_) + 1, 0.0);
  for (std::size_t i = 0; i < probs_.size(); ++i) out[i * static_cast<std::size_t>(span_)] = probs_[i];
  return out;
}

MomentSummary moments(const DiscretePMF& p) {
  const auto im = index_moments(p.probs());
  const double k = static_cast<double>(p.span());
  return {k * im.mean, k * k * im.var};
}

std::vector<double> cumulants_from_pmf(const DiscretePMF& p, int J) {
  require(J >= 1 && J <= 64, "J: must lie in [1, 64]");
  const auto im = index_moments(p.probs());
  const double span = static_cast<double>(p.span());
  std::vector<double> kappa(static_cast<std::size_t>(J) + 1, 0.0);
  kappa[1] = span * im.mean;
  if (J == 1 || im.var == 0.0) return kappa;

  // Moments of the standardized variable, then the moment/cumulant recurrence,
  // then undo the scaling.
  const double s = std::sqrt(im.var);
  std::vector<double> m(static_cast<std::size_t>(J) + 1, 0.0);
  {
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(J) + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) continue;
      const double x = (static_cast<double>(i) - im.mean) / s;
      double pw = p[i];
      for (int j = 1; j <= J; ++j) {
        pw *= x;
        acc[j] += pw;
      }
    }
    for (int j = 1; j <= J; ++j) m[j] = acc[j].value();
  }
  m[1] = 0.0;

  std::vector<double> binom(static_cast<std::size_t>(J) + 1, 0.0);
  std::vector<double> ks(static_cast<std::size_t>(J) + 1, 0.0);
  for (int n = 1; n <= J; ++n) {
    // binom[k] = C(n-1, k-1)
    binom.assign(binom.size(), 0.0);
    binom[1] = 1.0;
    for (int k = 2; k <= n; ++k) binom[k] = binom[k - 1] * (n - k + 1) / (k - 1);
    double v = m[n];
    for (int k = 1; k < n; ++k) v -= binom[k] * ks[k] * m[n - k];
    ks[n] = v;
  }
  double scale = 1.0;
  const double unit = span * s;
  for (int j = 1; j <= J; ++j) {
    scale *= unit;
    if (j >= 2) kappa[j] = ks[j] * scale;
    if (!std::isfinite(kappa[j]))
      throw std::overflow_error("cumulant of order " + std::to_string(j) + " is not representable");
  }
  return kappa;
}

namespace serial {

DiscretePMF convolve(const DiscretePMF& p, const DiscretePMF& q) {
  require(p.span() == q.span(), "span: convolution needs equal spans");
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  return DiscretePMF::from_weights(std::move(out), p.span());
}

double kolmogorov_distance(const DiscretePMF& p) {
  const auto im = index_moments(p.probs());
  if (im.var == 0.0) throw DegenerateError("kolmogorov_distance: sigma = 0");
  const double s = std::sqrt(im.var);
  double below = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    const double phi = normal_cdf((static_cast<double>(i) - im.mean) / s);
    const double after = below + p[i];
    worst = std::max({worst, std::abs(phi - below), std::abs(after - phi)});
    below = after;
  }
  return worst;
}

}  // namespace serial

DiscretePMF convolve(const DiscretePMF& p, const DiscretePMF& q, Exec exec) {
  if (exec == Exec::serial) return serial::convolve(p, q);
  require(p.span() == q.span(), "span: convolution needs equal spans");
  const long n = static_cast<long>(p.size() + q.size() - 1);
  const auto& a = p.probs();
  const auto& b = q.probs();
  const long na = static_cast<long>(a.size());
  const long nb = static_cast<long>(b.size());
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static) if (n > 4096)
  for (long k = 0; k < n; ++k) {
    const long lo = std::max(0L, k - nb + 1);
    const long hi = std::min(k, na - 1);
    double acc = 0.0;
    for (long i = lo; i <= hi; ++i) acc += a[i] * b[k - i];
    out[k] = acc;
  }
  return DiscretePMF::from_weights(std::move(out), p.span());
}

DiscretePMF convolution_power(const DiscretePMF& p, long m) {
  require(m >= 0, "power: must be >= 0");
  if (m == 0) return DiscretePMF::point_mass().with_span(p.span());
  std::optional<DiscretePMF> result;
  DiscretePMF base = p;
  while (true) {
    if (m & 1) result = result ? convolve(*result, base) : base;
    m >>= 1;
    if (m == 0) break;
    base = convolve(base, base);
  }
  return *result;
}

DiscretePMF scale_support(const DiscretePMF& p, long k) {
  require(k >= 1, "k: support scaling factor must be a positive integer");
  return p.with_span(p.span() * k);
}

double kolmogorov_distance(const DiscretePMF& p, Exec exec) {
  if (exec == Exec::serial) return serial::kolmogorov_distance(p);
  const auto im = index_moments(p.probs());
  if (im.var == 0.0) throw DegenerateError("kolmogorov_distance: sigma = 0");
  const double s = std::sqrt(im.var);
  const auto& pr = p.probs();
  const long n = static_cast<long>(pr.size());

  // Prefix sums must match the serial order exactly, so they stay sequential;
  // the normal CDF evaluations are the expensive part.
  std::vector<double> below(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (long i = 0; i < n; ++i) {
    below[i] = acc;
    if (pr[i] != 0.0) acc = acc + pr[i];
  }
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static) if (n > 4096)
  for (long i = 0; i < n; ++i) {
    if (pr[i] == 0.0) continue;
    const double phi = normal_cdf((static_cast<double>(i) - im.mean) / s);
    const double after = below[i] + pr[i];
    worst = std::max({worst, std::abs(phi - below[i]), std::abs(after - phi)});
  }
  return worst;
}

}  // namespace pgfclt
