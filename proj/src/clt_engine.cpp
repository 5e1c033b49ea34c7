#include "pgfclt/clt_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pgfclt {

namespace {

struct FactorMoments {
  double mean = 0.0, variance = 0.0;
};

FactorMoments coefficient_moments(const std::vector<double>& c) {
  CompensatedSum m1, m2;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double x = static_cast<double>(k);
    m1 += c[k] * x;
    m2 += c[k] * x * x;
  }
  const double mean = m1.value();
  FactorMoments out{mean, 0.0};
  CompensatedSum v;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double d = static_cast<double>(k) - mean;
    v += c[k] * d * d;
  }
  out.variance = v.value();
  return out;
}

Complex horner(const std::vector<double>& c, Complex w) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w + *it;
  return acc;
}

constexpr double kLog2Ball = 3261.0;
constexpr double kLog2Sector = 3257.0;
constexpr double kLog2General = 3258.0;
constexpr double kLog2LocalBall = 3255.0;

ConstantBound make_bound(double log2_value) {
  return {log2_value, log2_value >= 0.0 ? 1.0 : std::exp2(log2_value)};
}

}  // namespace

StandardizedCF::StandardizedCF(const DiscretePMF& p) : span_(p.span()) {
  const auto m = moments(p);
  if (!(m.variance > 0.0)) throw DegenerateError("sigma: zero variance");
  mean_ = m.mean;
  sigma_ = m.sigma();
  factors_.push_back({p.probs(), 1});
}

StandardizedCF::StandardizedCF(const FactoredPGF& f) {
  double mean = 0.0, var = 0.0;
  for (const auto& fac : f.factors()) {
    const auto m = coefficient_moments(fac.poly.coeffs());
    mean += static_cast<double>(fac.power) * m.mean;
    var += static_cast<double>(fac.power) * m.variance;
    factors_.push_back({fac.poly.coeffs(), fac.power});
  }
  if (!(var > 0.0)) throw DegenerateError("sigma: zero variance");
  mean_ = mean;
  sigma_ = std::sqrt(var);
}

Complex StandardizedCF::operator()(double xi) const {
  const double t = xi / sigma_;
  const Complex w = std::polar(1.0, t * static_cast<double>(span_));
  // accumulate log for powered factors, plain product otherwise
  Complex prod = std::polar(1.0, -mean_ * t);
  Complex log_acc = 0.0;
  for (const auto& [c, power] : factors_) {
    const Complex v = horner(c, w);
    if (power == 1)
      prod *= v;
    else
      log_acc += static_cast<double>(power) * std::log(v);
  }
  return log_acc == 0.0 ? prod : prod * std::exp(log_acc);
}

Complex characteristic_star(const PGFPoly& f, double xi) { return StandardizedCF(f)(xi); }
Complex characteristic_star(const FactoredPGF& f, double xi) { return StandardizedCF(f)(xi); }

RemainderSeries RemainderSeries::from(const CumulantSeq& a, double sigma) {
  require(sigma > 0.0, "sigma: must be positive");
  RemainderSeries out;
  out.sigma = sigma;
  out.r.assign(static_cast<std::size_t>(std::max(a.order(), 2)) + 1, 0.0);
  double scale = sigma * sigma;
  for (int j = 3; j <= a.order(); ++j) {
    scale *= sigma;
    out.r[j] = a[j] / scale;
  }
  return out;
}

RemainderValue remainder_eval(const RemainderSeries& r, Complex xi, double s_star) {
  const Complex iz = Complex(0.0, 1.0) * xi;
  Complex acc = 0.0;
  for (int j = r.order(); j >= 3; --j) acc = (acc + r.r[j]) * iz;
  acc *= iz * iz;
  RemainderValue out{acc, false};
  if (s_star > 0.0) out.beyond_radius = std::abs(xi) > r.sigma * s_star / 2.0;
  return out;
}

RemainderValue remainder_eval(const CumulantSeq& a, double sigma, Complex xi, double s_star) {
  return remainder_eval(RemainderSeries::from(a, sigma), xi, s_star);
}

double remainder_eta(const RemainderSeries& r, double tau, int samples) {
  require(tau > 0.0, "tau: must be positive");
  require(samples >= 1, "samples: must be >= 1");
  double eta = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double xi = tau * i / (samples + 1.0);
    eta = std::max(eta, std::abs(remainder_eval(r, xi).value) / (xi * xi * xi));
  }
  return eta;
}

double fourier_inversion_bound(double eta, double tau) {
  require(eta >= 0.0 && tau > 0.0, "fourier bound: need eta >= 0 and tau > 0");
  return 512.0 * std::max(eta, 1.0 / tau);
}

double esseen_bound(const std::function<Complex(double)>& psi_star, double T, double rel_tol) {
  require(T > 0.0, "T: must be positive");
  // The integrand is even in xi, so integrate over (0, T] and double.
  auto integrand = [&](double xi) {
    if (xi == 0.0) return 0.0;
    return std::abs(psi_star(xi) - std::exp(-0.5 * xi * xi)) / xi;
  };
  double err = 0.0;
  const double I =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, T, 30, rel_tol, &err);
  const double value = 2.0 / kPi * I + 4.0 / T;
  if (!std::isfinite(I) || err > std::max(rel_tol * std::abs(I), 1e-14))
    throw ConvergenceError("esseen_bound: quadrature reached error " + std::to_string(err), value);
  return value;
}

double esseen_bound(const PGFPoly& f, double T) {
  const StandardizedCF psi(f);
  return esseen_bound([&](double xi) { return psi(xi); }, T);
}

double esseen_bound(const FactoredPGF& f, double T) {
  const StandardizedCF psi(f);
  return esseen_bound([&](double xi) { return psi(xi); }, T);
}

ConstantBound constant_bound_ball(double n, double delta_ball, double sigma) {
  require(n >= 1.0, "n: must be >= 1");
  require(delta_ball > 0.0, "delta: zero (root at 1)");
  require(sigma > 0.0, "sigma: must be positive");
  const double ln = std::log(n);
  if (ln == 0.0) return {-kInf, 0.0};
  return make_bound(kLog2Ball + std::log2(ln) - std::log2(delta_ball) - std::log2(sigma));
}

ConstantBound constant_bound_sector(double delta_sector, double sigma) {
  require(delta_sector > 0.0, "delta: zero (root on the positive axis)");
  require(sigma > 0.0, "sigma: must be positive");
  return make_bound(kLog2Sector - std::log2(delta_sector) - std::log2(sigma));
}

ConstantBound constant_bound_general(const GrowthSpec& g, double sigma) {
  require(g.kappa > 0.0 && g.delta > 0.0, "growth: kappa and delta must be positive");
  require(sigma > 0.0, "sigma: must be positive");
  return make_bound(kLog2General + std::log2(std::max(1.0 / g.delta, g.kappa)) - std::log2(sigma));
}

ConstantBound local_ball_bound(double eps, double sigma) {
  require(eps > 0.0 && sigma > 0.0, "local ball bound: eps and sigma must be positive");
  return make_bound(kLog2LocalBall - std::log2(eps) - std::log2(sigma));
}

ConstantBound constant_bound(BoundMode mode, double n, const RootGeometry& geom, double sigma) {
  switch (mode) {
    case BoundMode::ball:
      return constant_bound_ball(n, geom.delta_ball, sigma);
    case BoundMode::sector:
      return constant_bound_sector(geom.delta_sector, sigma);
    case BoundMode::general:
      break;
  }
  throw PreconditionError("mode: the general bound needs a GrowthSpec");
}

namespace {

BoundReport assemble(long degree, const DiscretePMF& pmf, const RootSet& roots, const StandardizedCF& psi,
                     Exec exec) {
  BoundReport rep;
  rep.degree = degree;
  rep.sigma = psi.sigma();
  rep.D = kolmogorov_distance(pmf, exec);
  const auto geom = root_geometry(roots);
  rep.delta_ball = geom.delta_ball;
  rep.delta_sector = geom.delta_sector;
  // The ball theorem is stated for delta < 1; larger distances give no extra room.
  const double ball_delta = std::min(geom.delta_ball, 1.0);
  if (degree >= 2) {
    rep.bound_ball = constant_bound_ball(static_cast<double>(degree), ball_delta, rep.sigma);
    rep.ratio_ball = rep.D * geom.delta_ball * rep.sigma / std::log(static_cast<double>(degree));
  } else {
    rep.bound_ball = {-kInf, 0.0};
    rep.ratio_ball = std::numeric_limits<double>::quiet_NaN();
  }
  rep.bound_sector = constant_bound_sector(geom.delta_sector, rep.sigma);
  rep.ratio_sector = rep.D * geom.delta_sector * rep.sigma;
  rep.esseen_T = std::max(rep.sigma, 4.0);
  rep.esseen_value = esseen_bound([&](double xi) { return psi(xi); }, rep.esseen_T);
  return rep;
}

}  // namespace

BoundReport verify_normal_approx(const PGFPoly& f, Exec exec) {
  const DiscretePMF pmf = f.pmf();
  const StandardizedCF psi(pmf);
  return assemble(f.degree(), pmf, find_roots(f), psi, exec);
}

BoundReport verify_normal_approx(const FactoredPGF& f, Exec exec) {
  const StandardizedCF psi(f);
  return assemble(f.degree(), f.pmf(), f.roots(), psi, exec);
}

GrowthCheck growth_heuristic(const std::function<double(Complex)>& u, const GrowthSpec& g, int levels, int rays) {
  require(g.kappa > 0.0 && g.delta > 0.0, "growth: kappa and delta must be positive");
  require(levels >= 4 && rays >= 1, "growth: need levels >= 4 and rays >= 1");
  GrowthCheck out;
  for (int l = 1; l <= levels; ++l) {
    const double r = std::ldexp(1.0, l);
    double mo = 0.0, mi = 0.0;
    for (int k = 0; k < rays; ++k) {
      const double a = rays == 1 ? 0.0 : -g.delta + 2.0 * g.delta * k / (rays - 1);
      const Complex z = std::polar(r, a);
      mo = std::max(mo, std::abs(u(z)) / std::pow(r, g.kappa));
      mi = std::max(mi, std::abs(u(1.0 / z)) / std::pow(r, g.kappa));
    }
    out.outer.push_back(mo);
    out.inner.push_back(mi);
  }
  auto tail_nonincreasing = [&](const std::vector<double>& v) {
    for (std::size_t i = v.size() / 2 + 1; i < v.size(); ++i)
      if (!(v[i] <= v[i - 1] * (1.0 + 1e-12))) return false;
    return true;
  };
  out.decaying = tail_nonincreasing(out.outer) && tail_nonincreasing(out.inner);
  return out;
}

}  // namespace pgfclt
