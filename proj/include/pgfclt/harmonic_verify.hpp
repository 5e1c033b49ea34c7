#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "pgfclt/common.hpp"
#include "pgfclt/pgf_roots.hpp"

namespace pgfclt {

using Potential = std::function<double(Complex)>;

// {z : alpha <= arg z <= beta, 1/R <= |z| <= R}
struct SectorSpec {
  double alpha = -kPi / 2;
  double beta = kPi / 2;
  double R = 2.0;
  bool contains(Complex z) const;
};

struct BallSpec {
  Complex center = 1.0;
  double radius = 0.5;
  bool contains(Complex z) const { return std::abs(z - center) < radius; }
};

using Region = std::variant<BallSpec, SectorSpec>;

struct GridSpec {
  int radial = 256;
  int angular = 1024;
  Region region = SectorSpec{};
};

std::vector<Complex> grid_points(const GridSpec& g);

struct CheckReport {
  bool pass = true;
  double min_slack = kInf;
  Complex worst_point = 0.0;
  GridSpec grid;
  long evaluated = 0;
  long skipped = 0;
};

// u(|z|) - u(z)
double weak_positivity_slack(const Potential& u, Complex z);

CheckReport weak_positivity_check(const Potential& u, const GridSpec& grid, Exec exec = Exec::parallel);
CheckReport weak_positivity_check(const PGFPoly& f, const GridSpec& grid, Exec exec = Exec::parallel);

// min over rings and 0 <= t1 <= t2 of u(r e^{i t1}) - u(r e^{i t2}) + b, with rings and
// angles taken from the grid. All pairs on a ring are covered via a running minimum.
CheckReport b_decreasing_check(const PGFPoly& f, double b, const GridSpec& grid, Exec exec = Exec::parallel);

// b certified by the sector exit bound: (8/3)(r/R)^{1/delta} * max |u| on the ends.
double certified_b(double u_max_ends, double r, double R, double delta);

// max |u| on the two end arcs |z| in {1/R, R}, |arg z| <= delta.
double max_abs_potential_on_ends(const PGFPoly& f, double R, double delta, int samples = 4096);

// The ball-theorem parameter choice eps = delta/(64 log n), R = 1 + delta/4, r = 1 + eps.
struct BallParameters {
  double eps, R, r, exponent, target;  // exponent = log(R/r)/eps, target = 7 log n
};
BallParameters ball_parameters(long n, double delta);

enum class DifferenceKind { reflection, rotation };

// reflection: u(z) - u(e^{i a} conj z) + b;  rotation: u(z) - u(e^{i a} z) + b
double difference_eval(const PGFPoly& f, Complex z, DifferenceKind kind, double angle, double b);

enum class MoneyStatus { pass, fail, inapplicable };

struct MoneyReport {
  MoneyStatus status = MoneyStatus::inapplicable;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string reason;
};

MoneyReport money_check(const PGFPoly& f, double eps, double eta, double b, int radial = 64, int angular = 256);

// Poisson kernel of the ball B(center, radius) at interior z, boundary point w.
double poisson_density_ball(Complex z, Complex w, Complex center, double radius);

// 7 n log(4/delta)
double end_bound(double n, double delta);

// 3^{2d/eps + 1}
double harnack_chain_bound(double d, double eps);

namespace planar {
// Each returns false only when the premise holds and the conclusion fails.
bool ball_to_polar(Complex z, double eps);          // z in B(1,eps), eps <= 1/2
bool half_ball_to_polar(Complex z, double eps);     // z in B(1,eps/2), eps <= 1
bool polar_to_ball(Complex z, double eps);          // |z| in [1-eps,1+eps], |arg| <= eps
bool exp_of_ball(Complex w, double eps);            // w in B(0,eps), eps < 1/2
}  // namespace planar

}  // namespace pgfclt
