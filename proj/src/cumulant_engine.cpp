#include "pgfclt/cumulant_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pgfclt/series.hpp"

namespace pgfclt {

CumulantSeq::CumulantSeq(std::vector<double> a) : a_(std::move(a)) {
  for (std::size_t j = 0; j < a_.size(); ++j)
    if (!std::isfinite(a_[j])) throw std::overflow_error("a[" + std::to_string(j) + "]: not finite");
  if (!a_.empty()) a_[0] = 0.0;
}

CumulantSeq CumulantSeq::from_kappa(const std::vector<double>& kappa) {
  std::vector<double> a(kappa.size(), 0.0);
  double fact = 1.0;
  for (std::size_t j = 1; j < kappa.size(); ++j) {
    fact *= static_cast<double>(j);
    a[j] = kappa[j] / fact;
  }
  return CumulantSeq(std::move(a));
}

std::vector<double> CumulantSeq::kappa() const {
  std::vector<double> k(a_.size(), 0.0);
  double fact = 1.0;
  for (std::size_t j = 1; j < a_.size(); ++j) {
    fact *= static_cast<double>(j);
    k[j] = a_[j] * fact;
  }
  return k;
}

CumulantSeq cumulants_from_roots(const RootSet& roots, int J) {
  require(J >= 1 && J <= 64, "J: must lie in [1, 64]");
  using C = std::complex<long double>;
  using Series = TruncatedSeries<C>;
  const Series em1 = Series::expm1(J);
  std::vector<long double> acc(static_cast<std::size_t>(J) + 1, 0.0L);
  for (const auto& r : roots.roots) {
    if (r.value == 1.0) throw PreconditionError("roots: a root equals 1");
    // e^w - zeta = (1 - zeta)(1 + t(e^w - 1)) with t = 1/(1 - zeta)
    const C t = C(1.0L) / (C(1.0L) - C(r.value.real(), r.value.imag()));
    Series g = em1;
    g *= t;
    const Series h = Series::log1p(g);
    for (int j = 1; j <= J; ++j) acc[j] += static_cast<long double>(r.multiplicity) * h[j].real();
  }
  std::vector<double> a(acc.begin(), acc.end());
  return CumulantSeq(std::move(a));
}

CumulantSeq cumulant_seq_from_pmf(const DiscretePMF& p, int J) {
  return CumulantSeq::from_kappa(cumulants_from_pmf(p, J));
}

TailRatio tail_ratio(const CumulantSeq& a, double eps, int L) {
  require(eps > 0.0, "eps: must be positive");
  require(L >= 2, "L: must be >= 2");
  CompensatedSum num, den;
  double pw = eps;
  std::vector<double> terms(static_cast<std::size_t>(a.order()) + 1, 0.0);
  for (int j = 2; j <= a.order(); ++j) {
    pw *= eps;
    terms[j] = std::abs(a[j]) * pw;
    den += terms[j];
    if (j >= L) num += terms[j];
  }
  if (den.value() == 0.0) throw DegenerateError("tail_ratio: zero denominator");
  TailRatio out;
  out.ratio = num.value() / den.value();
  const int J = a.order();
  if (J >= 3 && terms[J - 1] > 0.0) {
    const double q = terms[J] / terms[J - 1];
    out.truncation_estimate = q < 1.0 ? terms[J] * q / (1.0 - q) / den.value() : kInf;
  }
  return out;
}

TailDecayReport tail_decay_report(const CumulantSeq& a, double eps) {
  TailDecayReport rep;
  const double log2_C = 390.0 * std::log2(3.0);
  for (int L = 2; L <= a.order(); ++L) {
    const double r = tail_ratio(a, eps, L).ratio;
    const double scaled = r * std::ldexp(1.0, L);
    if (scaled > rep.max_scaled_ratio) {
      rep.max_scaled_ratio = scaled;
      rep.worst_L = L;
    }
    if (r > 0.0 && std::log2(r) > log2_C - L) rep.within_bound = false;
  }
  return rep;
}

DominantTerm dominant_term_search(std::span<const double> c, double s, double A, int L) {
  require(A >= 1.0, "A: must be >= 1");
  require(s > 0.0, "s: must be positive");
  require(L >= 1 && static_cast<std::size_t>(L) <= c.size(), "L: must lie in [1, len(c)]");
  for (std::size_t i = 0; i < c.size(); ++i)
    require(c[i] >= 0.0 && std::isfinite(c[i]), "c[" + std::to_string(i) + "]: must be finite and >= 0");

  const int N = static_cast<int>(c.size());
  auto term = [&](int i, double x) { return c[i - 1] * std::pow(x, i); };
  auto head_tail = [&](double x) {
    CompensatedSum h, t;
    for (int i = 1; i <= N; ++i) (i <= L ? h : t) += term(i, x);
    return std::pair{h.value(), t.value()};
  };
  {
    const auto [h, t] = head_tail(s);
    if (!(h > t)) throw PreconditionError("c: head sum does not exceed the tail sum at s");
  }

  double st = s / (2.0 * A);
  int j = L;
  for (int t = 0;; ++t) {
    const double x = term(j, st);
    CompensatedSum head_others, all_others;
    for (int i = 1; i <= N; ++i) {
      if (i == j) continue;
      const double v = term(i, st);
      if (i <= L) head_others += v;
      all_others += v;
    }
    // The head condition alone does not imply the conclusion when it fires at the
    // first scale, so the conclusion is required as well.
    if (x > 2.0 * A * head_others.value() && x > A * all_others.value()) return {j, st, t};
    if (t > L + 64) throw ConvergenceError("dominant_term_search: no halt", st);
    const double next = st / (16.0 * A);
    int best = 1;
    double best_val = term(1, next);
    for (int i = 2; i <= j; ++i) {
      const double v = term(i, next);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    j = best;
    st = next;
  }
}

TameResult tame_cumulants(const CumulantSeq& a, double s, int L) {
  require(s > 0.0 && s < 0.5, "s: must lie in (0, 1/2)");
  require(L >= 2 && L <= a.order(), "L: must lie in [2, J]");
  std::vector<double> c(static_cast<std::size_t>(a.order()), 0.0);  // c[i-1] = c_i, c_1 = 0
  bool any = false;
  for (int j = 2; j <= a.order(); ++j) {
    c[j - 1] = std::abs(a[j]);
    any = any || c[j - 1] != 0.0;
  }
  if (!any) throw DegenerateError("a: identically zero for j >= 2");
  const auto dt = dominant_term_search(c, s, 4.0, L);
  if (dt.ell != 2)
    throw NotAPgfError("tame_cumulants: dominant index " + std::to_string(dt.ell) +
                       " != 2, sequence is not weakly positive");
  return {dt.s_star, dt.iterations};
}

NegcosExtrema negcos_extrema(int j) {
  require(j >= 3, "j: must be >= 3");
  auto f = [j](double t) { return std::pow(std::cos(t), j) - std::cos(j * t); };
  constexpr int n = 10000;
  const double h = 2.0 * kPi / n;
  int imin = 0, imax = 0;
  double vmin = f(0.0), vmax = vmin;
  for (int i = 1; i <= n; ++i) {
    const double v = f(i * h);
    if (v < vmin) vmin = v, imin = i;
    if (v > vmax) vmax = v, imax = i;
  }
  // golden-section refinement on the bracketing grid cell
  auto refine = [&](int i, double sign) {
    double lo = (i - 1) * h, hi = (i + 1) * h;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = sign * f(x1), f2 = sign * f(x2);
    for (int it = 0; it < 100; ++it) {
      if (f1 < f2) {
        hi = x2, x2 = x1, f2 = f1;
        x1 = hi - g * (hi - lo), f1 = sign * f(x1);
      } else {
        lo = x1, x1 = x2, f1 = f2;
        x2 = lo + g * (hi - lo), f2 = sign * f(x2);
      }
    }
    const double x = 0.5 * (lo + hi);
    return std::pair{x, f(x)};
  };
  NegcosExtrema out{vmin, imin * h, vmax, imax * h};
  if (auto [x, v] = refine(imin, 1.0); v < out.min_val) out.min_val = v, out.argmin = x;
  if (auto [x, v] = refine(imax, -1.0); v > out.max_val) out.max_val = v, out.argmax = x;
  return out;
}

}  // namespace pgfclt
