#pragma once

#include <map>
#include <optional>
#include <string>

#include "pgfclt/common.hpp"
#include "pgfclt/dist_core.hpp"
#include "pgfclt/pgf_roots.hpp"

namespace pgfclt {

// (z^2 - 2 rho cos(theta) z + rho^2) / (1 - 2 rho cos(theta) + rho^2), theta in [pi/2, pi].
PGFPoly seed_sector_pgf(double rho, double theta);

// Variance of the seed law above.
double seed_variance(double rho, double theta);

// rho >= 1 with Var(seed(rho, theta)) = target, by bisection (variance decreases in rho).
double solve_rho_for_variance(double theta, double target_var);

struct ConstructionResult {
  std::string family;                    // "sector", "ball" or "poisson"
  std::map<std::string, double> params;  // inputs and derived parameters
  DiscretePMF pmf = DiscretePMF::point_mass();
  double support_scale = 1.0;            // X = support_scale * (lattice variable of pmf)
  std::optional<FactoredPGF> law;        // factored PGF when X is integer valued
  std::optional<RootSet> roots;          // exact roots from the closed form
  long k = 1;
  double achieved_sigma = 0.0;
  double achieved_delta = 0.0;
  double lower_bound = 0.0;
};

// X = k (Y_1 + ... + Y_m) with Y_i i.i.d. seeds, sigma(X) = sigma and all roots at angle >= delta.
ConstructionResult construct_sector_sharp(double sigma, double delta);

// X = k Binomial(floor(n/k), p) with k = floor(log n/(c_k delta)) and p = n^{-alpha}.
ConstructionResult construct_ball_sharp(long n, double delta, double sigma, double c_k = 100.0);

// X = (kappa/2) Y with Y ~ Poisson(4 sigma^2/kappa^2), truncated. The truncation is
// chosen so that f is accurate to tail_tol in sup norm on |z| <= eval_radius.
ConstructionResult poisson_scaled(double sigma, double kappa, double tail_tol = 1e-12, double eval_radius = 1.0);

// Closed-form potential of the untruncated scaled Poisson law.
double poisson_potential(double sigma, double kappa, Complex z);

// e^{-16} k / sigma, requiring sigma/k >= 1/8.
double discrete_lower_bound(double sigma, long k);

inline constexpr long kPoissonSupportCap = 10'000'000;

}  // namespace pgfclt
