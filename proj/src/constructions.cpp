#include "pgfclt/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pgfclt {

namespace {

constexpr double kLowerConstant = 1.1253517471925912e-07;  // e^{-16}

// Adds `value` with `mult` to the list, merging with an existing entry closer than 1e-12.
void add_root(RootSet& rs, Complex value, int mult) {
  for (auto& r : rs.roots)
    if (std::abs(r.value - value) <= 1e-12 * std::max(1.0, std::abs(value))) {
      r.multiplicity += mult;
      return;
    }
  rs.roots.push_back({value, mult});
}

void sort_roots(RootSet& rs) {
  std::sort(rs.roots.begin(), rs.roots.end(), [](const Root& a, const Root& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
}

// Coefficients of p(z^k).
std::vector<double> substitute_power(const std::vector<double>& c, long k) {
  std::vector<double> out((c.size() - 1) * static_cast<std::size_t>(k) + 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) out[i * static_cast<std::size_t>(k)] = c[i];
  return out;
}

}  // namespace

PGFPoly seed_sector_pgf(double rho, double theta) {
  require(rho >= 1.0 && std::isfinite(rho), "rho: must be >= 1");
  if (!(theta >= kPi / 2 - 1e-12 && theta <= kPi + 1e-12))
    throw NotAPgfError("theta: must lie in [pi/2, pi], otherwise the middle coefficient is negative");
  // cos(pi/2) is not exactly zero in floating point
  const double middle = std::max(0.0, -2.0 * rho * std::cos(theta));
  const double total = rho * rho + middle + 1.0;
  return PGFPoly::normalize({rho * rho / total, middle / total, 1.0 / total});
}

double seed_variance(double rho, double theta) {
  const auto c = seed_sector_pgf(rho, theta).coeffs();
  const double p1 = c.size() > 1 ? c[1] : 0.0;
  const double p2 = c.size() > 2 ? c[2] : 0.0;
  const double mean = p1 + 2.0 * p2;
  return p1 + 4.0 * p2 - mean * mean;
}

double solve_rho_for_variance(double theta, double target_var) {
  const double top = seed_variance(1.0, theta);
  require(target_var > 0.0, "target_var: must be positive");
  if (target_var > top * (1.0 + 1e-12))
    throw PreconditionError("target_var: infeasible, exceeds Var(Y_{1,theta}) = " + std::to_string(top));
  if (target_var >= top) return 1.0;
  double lo = 1.0, hi = 2.0;
  while (seed_variance(hi, theta) > target_var) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e150) throw ConvergenceError("solve_rho_for_variance: no bracket", hi);
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = seed_variance(mid, theta);
    if (std::abs(v - target_var) <= 1e-14 * std::max(1.0, target_var) || mid == lo || mid == hi) return mid;
    (v > target_var ? lo : hi) = mid;
  }
  const double mid = 0.5 * (lo + hi);
  if (std::abs(seed_variance(mid, theta) - target_var) > 1e-12)
    throw ConvergenceError("solve_rho_for_variance: tolerance not reached", mid);
  return mid;
}

ConstructionResult construct_sector_sharp(double sigma, double delta) {
  require(delta > 0.0 && delta <= kPi, "delta: must lie in (0, pi]");
  require(sigma > 0.0, "sigma: must be positive");
  if (delta * sigma < 1.0) throw PreconditionError("delta*sigma: must be >= 1");
  const long k = static_cast<long>(std::ceil(kPi / (2.0 * delta) - 1e-12));
  const double theta = std::min(kPi, static_cast<double>(k) * delta);
  const double per_seed = seed_variance(1.0, theta);
  const double target = (sigma / k) * (sigma / k);
  const long m = static_cast<long>(std::ceil(target / per_seed - 1e-12));
  const double rho = solve_rho_for_variance(theta, target / static_cast<double>(m));
  const PGFPoly seed = seed_sector_pgf(rho, theta);

  ConstructionResult out;
  out.family = "sector";
  out.params = {{"sigma", sigma}, {"delta", delta}, {"theta", theta}, {"rho", rho},
                {"m", static_cast<double>(m)}, {"k", static_cast<double>(k)}};
  out.k = k;
  out.pmf = scale_support(convolution_power(seed.pmf(), m), k);
  out.law = FactoredPGF(PGFPoly::normalize(substitute_power(seed.coeffs(), k)), m);

  // z^k = rho e^{+-i theta}
  RootSet rs;
  const double mod = std::pow(rho, 1.0 / static_cast<double>(k));
  for (long j = 0; j < k; ++j)
    for (double sgn : {1.0, -1.0}) {
      double a = std::remainder((sgn * theta + 2.0 * kPi * j) / k, 2.0 * kPi);
      add_root(rs, std::polar(mod, a), static_cast<int>(m));
    }
  sort_roots(rs);
  finish_root_set(rs);
  out.achieved_delta = root_geometry(rs).delta_sector;
  out.roots = std::move(rs);
  out.achieved_sigma = static_cast<double>(k) * std::sqrt(static_cast<double>(m) * seed_variance(rho, theta));
  out.lower_bound = discrete_lower_bound(out.achieved_sigma, k);
  return out;
}

ConstructionResult construct_ball_sharp(long n, double delta, double sigma, double c_k) {
  require(n >= 2, "n: must be >= 2");
  require(delta > 0.0, "delta: must be positive");
  require(c_k > 0.0, "c_k: must be positive");
  const double ln = std::log(static_cast<double>(n));
  const double var = sigma * sigma;
  require(var >= 1.0 && var < std::pow(static_cast<double>(n), 0.9), "sigma: sigma^2 must lie in [1, n^0.9)");
  const long k = static_cast<long>(std::floor(ln / (c_k * delta)));
  if (k < 1)
    throw DegenerateError("c_k: k = floor(log n/(c_k delta)) = 0 at c_k = " + std::to_string(c_k));
  const long N = n / k;
  if (N < 1) throw DegenerateError("c_k: k exceeds n at c_k = " + std::to_string(c_k));

  // p(1-p) = sigma^2/(k^2 N) on the branch p = n^{-alpha} <= 1/2
  const double target = var / (static_cast<double>(k) * static_cast<double>(k) * static_cast<double>(N));
  auto pq = [&](double alpha) {
    const double p = std::exp(-alpha * ln);
    return p * (1.0 - p);
  };
  double lo = std::max(0.01, std::log(2.0) / ln), hi = 1.0;
  if (target > pq(lo) || target < pq(hi))
    throw PreconditionError("sigma: no alpha in [0.01, 1) gives Var = sigma^2 with k = " + std::to_string(k));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pq(mid) > target ? lo : hi) = mid;
  }
  const double alpha = 0.5 * (lo + hi);
  const double p = std::exp(-alpha * ln);

  ConstructionResult out;
  out.family = "ball";
  out.params = {{"n", static_cast<double>(n)}, {"delta", delta}, {"sigma", sigma}, {"c_k", c_k},
                {"alpha", alpha}, {"p", p}, {"N", static_cast<double>(N)}, {"k", static_cast<double>(k)}};
  out.k = k;
  const PGFPoly bern = PGFPoly::normalize({1.0 - p, p});
  out.pmf = scale_support(convolution_power(bern.pmf(), N), k);
  std::vector<double> factor(static_cast<std::size_t>(k) + 1, 0.0);
  factor[0] = 1.0 - p;
  factor[static_cast<std::size_t>(k)] = p;
  out.law = FactoredPGF(PGFPoly::normalize(factor), N);

  // z^k = -(1-p)/p
  RootSet rs;
  const double mod = std::pow((1.0 - p) / p, 1.0 / static_cast<double>(k));
  for (long j = 0; j < k; ++j)
    add_root(rs, std::polar(mod, std::remainder(kPi * (2.0 * j + 1.0) / k, 2.0 * kPi)), static_cast<int>(N));
  sort_roots(rs);
  finish_root_set(rs);
  out.achieved_delta = root_geometry(rs).delta_ball;
  out.roots = std::move(rs);
  out.achieved_sigma = static_cast<double>(k) * std::sqrt(static_cast<double>(N) * p * (1.0 - p));
  out.lower_bound = discrete_lower_bound(out.achieved_sigma, k);
  return out;
}

ConstructionResult poisson_scaled(double sigma, double kappa, double tail_tol, double eval_radius) {
  require(sigma > 0.0 && kappa > 0.0, "sigma, kappa: must be positive");
  require(tail_tol > 0.0 && tail_tol < 1.0, "tail_tol: must lie in (0, 1)");
  require(eval_radius > 0.0, "eval_radius: must be positive");
  const double lambda = 4.0 * sigma * sigma / (kappa * kappa);
  const double r = std::pow(std::max(1.0, eval_radius), kappa / 2.0);
  // |f| >= e^{-lambda(1 + r)} on |w| <= r, so an absolute tail below tail_tol times that
  // keeps log|f| accurate to about tail_tol.
  const double log_budget = std::log(tail_tol) - lambda * (1.0 + r);
  auto log_term = [&](double y) { return -lambda + y * std::log(lambda * r) - std::lgamma(y + 1.0); };
  long M = static_cast<long>(std::ceil(lambda * r));
  for (;; ++M) {
    if (M > kPoissonSupportCap)
      throw PreconditionError("tail_tol: unreachable within the support cap of " +
                              std::to_string(kPoissonSupportCap) + " atoms");
    const double y = static_cast<double>(M + 1);
    const double q = lambda * r / (y + 1.0);  // ratio bound for later terms
    if (q < 1.0 && log_term(y) - std::log1p(-q) <= log_budget) break;
  }
  std::vector<double> w(static_cast<std::size_t>(M) + 1);
  for (long y = 0; y <= M; ++y)
    w[y] = std::exp(-lambda + y * std::log(lambda) - std::lgamma(static_cast<double>(y) + 1.0));
  if (lambda == 0.0) w[0] = 1.0;

  ConstructionResult out;
  out.family = "poisson";
  out.params = {{"sigma", sigma}, {"kappa", kappa}, {"lambda", lambda}, {"tail_tol", tail_tol},
                {"eval_radius", eval_radius}, {"truncation", static_cast<double>(M)}};
  out.pmf = DiscretePMF::from_weights(std::move(w));
  out.support_scale = kappa / 2.0;
  const double half = kappa / 2.0;
  if (half == std::floor(half)) {
    out.k = static_cast<long>(half);
    out.pmf = scale_support(out.pmf, out.k);
    out.support_scale = 1.0;
  }
  const auto m = moments(out.pmf);
  out.achieved_sigma = out.support_scale * m.sigma();
  out.achieved_delta = kPi;  // the PGF is zero free
  const double sigma_y = 2.0 * sigma / kappa;
  // scaling leaves D unchanged, so the lattice bound for Y applies to X
  out.lower_bound = sigma_y >= 0.125 ? discrete_lower_bound(sigma_y, 1) : 0.0;
  return out;
}

double poisson_potential(double sigma, double kappa, Complex z) {
  require(sigma > 0.0 && kappa > 0.0, "sigma, kappa: must be positive");
  require(z != 0.0, "z: must be nonzero");
  const double lambda = 4.0 * sigma * sigma / (kappa * kappa);
  return lambda * (std::pow(z, kappa / 2.0).real() - 1.0);
}

double discrete_lower_bound(double sigma, long k) {
  require(k >= 1, "k: must be >= 1");
  require(sigma > 0.0 && sigma / static_cast<double>(k) >= 0.125, "sigma: sigma/k must be >= 1/8");
  return kLowerConstant * static_cast<double>(k) / sigma;
}

}  // namespace pgfclt
