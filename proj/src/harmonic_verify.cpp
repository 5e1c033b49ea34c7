#include "pgfclt/harmonic_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace pgfclt {

namespace {

constexpr double kRootMargin = 1e-6;
const double kUnderflowLog = std::log(1e-300);

void check_counts(const GridSpec& g) {
  require(g.radial >= 8 && g.angular >= 8, "grid: radial and angular counts must be >= 8");
}

double theta_max_in_ball(double rho, double c, double r) {
  const double x = (rho * rho + c * c - r * r) / (2.0 * rho * c);
  return std::acos(std::clamp(x, -1.0, 1.0));
}

// Deterministic arg-min over a slack vector.
void reduce(CheckReport& rep, const std::vector<double>& slack, const std::vector<Complex>& pts,
            double pass_tol) {
  for (std::size_t i = 0; i < slack.size(); ++i) {
    if (std::isnan(slack[i])) {
      ++rep.skipped;
      continue;
    }
    ++rep.evaluated;
    if (slack[i] < rep.min_slack) {
      rep.min_slack = slack[i];
      rep.worst_point = pts[i];
    }
  }
  rep.pass = rep.min_slack >= pass_tol;
}

bool near_root(const RootSet* rs, Complex z) {
  if (rs == nullptr) return false;
  for (const auto& r : rs->roots)
    if (std::abs(z - r.value) < kRootMargin) return true;
  return false;
}

}  // namespace

bool SectorSpec::contains(Complex z) const {
  if (z == 0.0) return false;
  const double a = std::arg(z), m = std::abs(z);
  return a >= alpha && a <= beta && m >= 1.0 / R && m <= R;
}

std::vector<Complex> grid_points(const GridSpec& g) {
  check_counts(g);
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(g.radial) * g.angular + 1);
  if (const auto* ball = std::get_if<BallSpec>(&g.region)) {
    pts.push_back(ball->center);
    for (int i = 1; i <= g.radial; ++i) {
      const double r = ball->radius * i / (g.radial + 1.0);
      for (int k = 0; k < g.angular; ++k)
        pts.push_back(ball->center + std::polar(r, 2.0 * kPi * k / g.angular));
    }
  } else {
    const auto& s = std::get<SectorSpec>(g.region);
    require(s.R > 1.0 && std::isfinite(s.R), "sector: R must be finite and > 1");
    require(s.alpha <= s.beta, "sector: alpha must not exceed beta");
    const double lr = std::log(s.R);
    for (int i = 0; i < g.radial; ++i) {
      const double rho = std::exp(-lr + 2.0 * lr * i / (g.radial - 1));
      for (int k = 0; k < g.angular; ++k)
        pts.push_back(std::polar(rho, s.alpha + (s.beta - s.alpha) * k / (g.angular - 1)));
    }
  }
  return pts;
}

double weak_positivity_slack(const Potential& u, Complex z) { return u(Complex(std::abs(z), 0.0)) - u(z); }

CheckReport weak_positivity_check(const Potential& u, const GridSpec& grid, Exec exec) {
  const auto pts = grid_points(grid);
  std::vector<double> slack(pts.size());
  const long n = static_cast<long>(pts.size());
  auto body = [&](long i) {
    const double uz = u(pts[i]);
    if (std::isinf(uz) && uz < 0) {
      slack[i] = std::numeric_limits<double>::quiet_NaN();  // at a root: skipped
      return;
    }
    const double s = u(Complex(std::abs(pts[i]), 0.0)) - uz;
    slack[i] = std::isnan(s) ? -kInf : s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) body(i);
  } else {
    for (long i = 0; i < n; ++i) body(i);
  }
  CheckReport rep;
  rep.grid = grid;
  reduce(rep, slack, pts, -1e-10);
  return rep;
}

CheckReport weak_positivity_check(const PGFPoly& f, const GridSpec& grid, Exec exec) {
  Potential u = [&f](Complex z) {
    const double v = log_potential(f, z);
    return v < kUnderflowLog ? -kInf : v;
  };
  return weak_positivity_check(u, grid, exec);
}

CheckReport b_decreasing_check(const PGFPoly& f, double b, const GridSpec& grid, Exec exec) {
  check_counts(grid);
  require(b >= 0.0, "b: must be >= 0");
  std::optional<RootSet> roots;
  if (f.degree() >= 1) {
    try {
      roots = find_roots(f);
    } catch (const ConvergenceError&) {
      // fall back to the underflow criterion only
    }
  }
  const RootSet* rs = roots ? &*roots : nullptr;

  // rings and their angular ranges [0, hi]
  std::vector<double> rho(grid.radial), lo(grid.radial), hi(grid.radial);
  if (const auto* ball = std::get_if<BallSpec>(&grid.region)) {
    require(ball->center.imag() == 0.0 && ball->center.real() > ball->radius,
            "ball: b-decreasing needs a real center c > radius");
    const double c = ball->center.real(), r = ball->radius;
    for (int i = 0; i < grid.radial; ++i) {
      rho[i] = c - r + 2.0 * r * (i + 0.5) / grid.radial;
      lo[i] = 0.0;
      hi[i] = theta_max_in_ball(rho[i], c, r) * (1.0 - 1e-12);
    }
  } else {
    const auto& s = std::get<SectorSpec>(grid.region);
    require(s.R > 1.0 && std::isfinite(s.R), "sector: R must be finite and > 1");
    const double lr = std::log(s.R);
    for (int i = 0; i < grid.radial; ++i) {
      rho[i] = std::exp(-lr + 2.0 * lr * i / (grid.radial - 1));
      lo[i] = std::max(0.0, s.alpha);
      hi[i] = s.beta;
    }
  }

  const int na = grid.angular;
  std::vector<double> ring_min(grid.radial, kInf);
  std::vector<Complex> ring_pt(grid.radial, 0.0);
  std::vector<long> ring_skip(grid.radial, 0), ring_eval(grid.radial, 0);
  auto ring = [&](long i) {
    double running = kInf;
    for (int k = 0; k < na; ++k) {
      const double t = lo[i] + (hi[i] - lo[i]) * k / (na - 1);
      const Complex z = std::polar(rho[i], t);
      const double u = log_potential(f, z);
      if (near_root(rs, z) || !std::isfinite(u) || u < kUnderflowLog) {
        ++ring_skip[i];
        continue;
      }
      ++ring_eval[i];
      running = std::min(running, u);
      const double d = running - u;
      if (d < ring_min[i]) {
        ring_min[i] = d;
        ring_pt[i] = z;
      }
    }
  };
  const long nr = grid.radial;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < nr; ++i) ring(i);
  } else {
    for (long i = 0; i < nr; ++i) ring(i);
  }
  CheckReport rep;
  rep.grid = grid;
  for (long i = 0; i < nr; ++i) {
    rep.evaluated += ring_eval[i];
    rep.skipped += ring_skip[i];
    if (ring_min[i] + b < rep.min_slack) {
      rep.min_slack = ring_min[i] + b;
      rep.worst_point = ring_pt[i];
    }
  }
  rep.pass = rep.min_slack >= -1e-9;
  return rep;
}

double certified_b(double u_max_ends, double r, double R, double delta) {
  require(u_max_ends >= 0.0, "u_max_ends: must be >= 0");
  require(R > r && r > 0.0, "radii: need R > r > 0");
  require(delta > 0.0 && delta < kPi, "delta: must lie in (0, pi)");
  return (8.0 / 3.0) * std::pow(r / R, 1.0 / delta) * u_max_ends;
}

double max_abs_potential_on_ends(const PGFPoly& f, double R, double delta, int samples) {
  require(R > 1.0, "R: must exceed 1");
  double m = 0.0;
  for (double rad : {1.0 / R, R})
    for (int k = 0; k < samples; ++k) {
      const double t = -delta + 2.0 * delta * k / (samples - 1);
      m = std::max(m, std::abs(log_potential(f, std::polar(rad, t))));
    }
  return m;
}

BallParameters ball_parameters(long n, double delta) {
  require(n >= 2, "n: must be >= 2");
  require(delta > 0.0 && delta < 1.0, "delta: must lie in (0, 1)");
  const double ln = std::log(static_cast<double>(n));
  BallParameters p;
  p.eps = delta / (64.0 * ln);
  p.R = 1.0 + delta / 4.0;
  p.r = 1.0 + p.eps;
  p.exponent = std::log(p.R / p.r) / p.eps;
  p.target = 7.0 * ln;
  return p;
}

double difference_eval(const PGFPoly& f, Complex z, DifferenceKind kind, double angle, double b) {
  const Complex rot = std::polar(1.0, angle);
  const Complex other = kind == DifferenceKind::reflection ? rot * std::conj(z) : rot * z;
  const double u1 = log_potential(f, z), u2 = log_potential(f, other);
  if (!std::isfinite(u1) || !std::isfinite(u2))
    throw PreconditionError("z: difference function evaluated at a root");
  return u1 - u2 + b;
}

MoneyReport money_check(const PGFPoly& f, double eps, double eta, double b, int radial, int angular) {
  MoneyReport rep;
  if (!(eps > 0.0 && eps < 0.125)) {
    rep.reason = "eps outside (0, 1/8)";
    return rep;
  }
  if (!(eta > 0.0 && eta <= eps)) {
    rep.reason = "eta outside (0, eps]";
    return rep;
  }
  if (!(b >= 0.0)) {
    rep.reason = "b must be >= 0";
    return rep;
  }
  if (f.degree() >= 1) {
    const auto g = root_geometry(find_roots(f));
    if (!(g.delta_ball > 8.0 * eps)) {
      rep.reason = "a root lies in B(1, 8 eps)";
      return rep;
    }
    GridSpec gs{radial, angular, BallSpec{1.0, 8.0 * eps}};
    if (!b_decreasing_check(f, b, gs).pass) {
      rep.reason = "not b-decreasing on B(1, 8 eps)";
      return rep;
    }
  }
  const double mu = f.mean();
  double lhs = 0.0;
  for (int i = 0; i <= radial; ++i) {
    const double r = eps * i / radial;
    for (int k = 0; k < (i == 0 ? 1 : angular); ++k) {
      const Complex z = 1.0 + std::polar(r, 2.0 * kPi * k / angular);
      lhs = std::max(lhs, std::abs(log_potential(f, z) - mu * std::log(std::abs(z))));
    }
  }
  const double phi = log_potential(f, 1.0) - log_potential(f, std::polar(1.0, eta)) + b;
  rep.lhs = lhs;
  const double log_factor = (4.0 + 96.0 * eps / eta) * std::log(3.0);
  rep.rhs = phi * std::exp(log_factor);
  bool ok;
  if (phi <= 0.0)
    ok = lhs <= std::max(phi, 0.0) && phi >= 0.0;
  else
    ok = lhs == 0.0 || std::log(lhs) <= log_factor + std::log(phi);
  rep.status = ok ? MoneyStatus::pass : MoneyStatus::fail;
  return rep;
}

double poisson_density_ball(Complex z, Complex w, Complex center, double radius) {
  require(radius > 0.0, "radius: must be positive");
  const double dz = std::abs(z - center);
  if (!(dz < radius)) throw PreconditionError("z: must lie strictly inside the ball");
  if (std::abs(std::abs(w - center) - radius) > 1e-9 * radius)
    throw PreconditionError("w: must lie on the boundary circle");
  const double d = std::abs(z - w);
  return (radius * radius - dz * dz) / (2.0 * kPi * radius * d * d);
}

double end_bound(double n, double delta) {
  require(delta > 0.0, "delta: must be positive");
  return 7.0 * n * std::log(4.0 / delta);
}

double harnack_chain_bound(double d, double eps) {
  require(eps > 0.0 && d >= 0.0, "harnack: need d >= 0, eps > 0");
  return std::pow(3.0, 2.0 * d / eps + 1.0);
}

namespace planar {

namespace {
constexpr double kSlack = 1e-14;
}

bool ball_to_polar(Complex z, double eps) {
  if (!(eps <= 0.5) || !(std::abs(z - 1.0) < eps)) return true;
  const double m = std::abs(z);
  return m >= 1.0 - eps - kSlack && m <= 1.0 + eps + kSlack && std::abs(std::arg(z)) <= 2.0 * eps + kSlack;
}

bool half_ball_to_polar(Complex z, double eps) {
  if (!(eps <= 1.0) || !(std::abs(z - 1.0) < eps / 2.0)) return true;
  const double m = std::abs(z);
  return m >= 1.0 / (1.0 + eps) - kSlack && m <= 1.0 + eps + kSlack && std::abs(std::arg(z)) <= eps + kSlack;
}

bool polar_to_ball(Complex z, double eps) {
  const double m = std::abs(z);
  if (!(eps <= 1.0) || m < 1.0 - eps || m > 1.0 + eps || std::abs(std::arg(z)) > eps) return true;
  return std::abs(z - 1.0) <= 2.0 * eps + kSlack;
}

bool exp_of_ball(Complex w, double eps) {
  if (!(eps < 0.5) || !(std::abs(w) < eps)) return true;
  return std::abs(std::exp(w) - 1.0) < 2.0 * eps + kSlack;
}

}  // namespace planar

}  // namespace pgfclt
