#pragma once

#include <functional>
#include <vector>

#include "pgfclt/common.hpp"
#include "pgfclt/cumulant_engine.hpp"
#include "pgfclt/dist_core.hpp"
#include "pgfclt/pgf_roots.hpp"

namespace pgfclt {

// Characteristic function of (X - mean)/sigma, evaluated from a pmf or from a factored PGF.
class StandardizedCF {
 public:
  explicit StandardizedCF(const DiscretePMF& p);
  explicit StandardizedCF(const PGFPoly& f) : StandardizedCF(f.pmf()) {}
  explicit StandardizedCF(const FactoredPGF& f);

  Complex operator()(double xi) const;
  double mean() const noexcept { return mean_; }
  double sigma() const noexcept { return sigma_; }

 private:
  std::vector<std::pair<std::vector<double>, long>> factors_;  // (coefficients, power)
  long span_ = 1;
  double mean_ = 0.0;
  double sigma_ = 0.0;
};

Complex characteristic_star(const PGFPoly& f, double xi);
Complex characteristic_star(const FactoredPGF& f, double xi);

// r_j = a_j / sigma^j for j >= 3; entries below 3 are zero.
struct RemainderSeries {
  std::vector<double> r;
  double sigma = 1.0;

  static RemainderSeries from(const CumulantSeq& a, double sigma);
  int order() const noexcept { return static_cast<int>(r.size()) - 1; }
};

struct RemainderValue {
  Complex value;
  bool beyond_radius = false;  // |xi| > sigma * s_star / 2
};

// sum_{j>=3} r_j (i xi)^j. When s_star > 0 the convergence heuristic is checked.
RemainderValue remainder_eval(const RemainderSeries& r, Complex xi, double s_star = 0.0);
RemainderValue remainder_eval(const CumulantSeq& a, double sigma, Complex xi, double s_star = 0.0);

// max of |R(xi)| / |xi|^3 over a uniform grid on 0 < xi < tau.
double remainder_eta(const RemainderSeries& r, double tau, int samples = 512);

// 2^9 max{eta, 1/tau}
double fourier_inversion_bound(double eta, double tau);

// (1/pi) int_{-T}^{T} |(psi(xi) - e^{-xi^2/2}) / xi| dxi + 4/T by adaptive Gauss-Kronrod.
double esseen_bound(const std::function<Complex(double)>& psi_star, double T, double rel_tol = 1e-8);
double esseen_bound(const PGFPoly& f, double T);
double esseen_bound(const FactoredPGF& f, double T);

// Bounds are astronomically large, so they are carried in log2 and capped at 1.
struct ConstantBound {
  double log2_value = 0.0;
  double capped = 0.0;  // min(1, 2^log2_value)
};

enum class BoundMode { ball, sector, general };

struct GrowthSpec {
  double kappa = 1.0;
  double delta = 1.0;
};

ConstantBound constant_bound_ball(double n, double delta_ball, double sigma);       // 2^3261 log n/(delta sigma)
ConstantBound constant_bound_sector(double delta_sector, double sigma);             // 2^3257/(delta sigma)
ConstantBound constant_bound_general(const GrowthSpec& g, double sigma);            // 2^3258 max{1/delta, kappa}/sigma
ConstantBound local_ball_bound(double eps, double sigma);                         // 2^3255/(eps sigma)
ConstantBound constant_bound(BoundMode mode, double n, const RootGeometry& geom, double sigma);

struct BoundReport {
  long degree = 0;
  double sigma = 0.0;
  double D = 0.0;
  double delta_ball = kInf;
  double delta_sector = kPi;
  ConstantBound bound_ball;
  ConstantBound bound_sector;
  double ratio_sector = 0.0;  // D delta_sector sigma
  double ratio_ball = 0.0;    // D delta_ball sigma / log n
  double esseen_T = 0.0;
  double esseen_value = 0.0;
};

BoundReport verify_normal_approx(const PGFPoly& f, Exec exec = Exec::parallel);
BoundReport verify_normal_approx(const FactoredPGF& f, Exec exec = Exec::parallel);

// Finite-ray stand-in for the growth condition: |u(z)|/|z|^kappa and |u(1/z)|/|z|^kappa
// along rays |arg z| <= delta at |z| = 2^1..2^levels. A heuristic, not a certificate.
struct GrowthCheck {
  std::vector<double> outer;  // max over rays at each level
  std::vector<double> inner;
  bool decaying = false;      // both sequences nonincreasing over the last half of levels
};

GrowthCheck growth_heuristic(const std::function<double(Complex)>& u, const GrowthSpec& g, int levels = 24,
                             int rays = 9);

}  // namespace pgfclt
