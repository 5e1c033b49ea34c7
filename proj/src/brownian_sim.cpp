#include "pgfclt/brownian_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace pgfclt {

namespace {

constexpr long kBlock = 1024;

// One generator per fixed block of samples, keyed by (seed, block index), so the
// estimate does not depend on how blocks are spread over threads.
std::mt19937_64 block_rng(std::uint64_t seed, long block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

struct Probe {
  double dist;  // radius of a disk inside the domain
  bool end;     // nearest boundary piece is an end
};

// Walk on spheres until within `shell(z)` of the boundary. Returns the last point and
// whether it was absorbed at an end.
template <class Dist, class Shell>
std::pair<Complex, bool> walk(Complex z, const Dist& dist, const Shell& shell, long max_steps,
                              std::mt19937_64& rng) {
  for (long step = 0; step < max_steps; ++step) {
    const Probe p = dist(z);
    if (p.dist <= shell(z)) return {z, p.end};
    const double angle = 2.0 * kPi * std::generate_canonical<double, 53>(rng);
    z += std::polar(p.dist, angle);
  }
  throw ConvergenceError("walk on spheres: path not absorbed within max_steps", static_cast<double>(max_steps));
}

// Runs n walks in blocks; `one(rng)` returns 1 for an end hit, 0 otherwise.
template <class One>
ExitEstimate run_bernoulli(long n, std::uint64_t seed, Exec exec, const One& one) {
  require(n >= 1, "samples: must be >= 1");
  const long blocks = (n + kBlock - 1) / kBlock;
  std::vector<long> hits(static_cast<std::size_t>(blocks), 0);
  bool failed = false;
  std::string failure;
  auto run_block = [&](long b) {
    auto rng = block_rng(seed, b);
    const long lo = b * kBlock, hi = std::min(n, lo + kBlock);
    long h = 0;
    for (long i = lo; i < hi; ++i) h += one(rng);
    hits[b] = h;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < blocks; ++b) {
      try {
        run_block(b);
      } catch (const std::exception& e) {
#pragma omp critical
        {
          failed = true;
          failure = e.what();
        }
      }
    }
    if (failed) throw ConvergenceError(failure, 0.0);
  } else {
    for (long b = 0; b < blocks; ++b) run_block(b);
  }
  long total = 0;
  for (long h : hits) total += h;
  ExitEstimate est;
  est.n_samples = n;
  est.seed = seed;
  est.p_hat = static_cast<double>(total) / static_cast<double>(n);
  est.stderr_ = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(n));
  return est;
}

Probe rectangle_probe(const RectangleSpec& q, Complex z) {
  const double d_end = q.b - std::abs(z.real());
  const double d_side = q.delta - std::abs(z.imag());
  return {std::min(d_end, d_side), d_end <= d_side};
}

Probe sector_probe(const TruncatedSectorSpec& s, Complex z) {
  const double rho = std::abs(z), phi = std::arg(z);
  const double d_end = std::min(s.R - rho, rho - 1.0 / s.R);
  double d_side = kInf;
  for (double ray : {s.delta, -s.delta}) {
    double a = std::abs(phi - ray);
    a = std::min(a, 2.0 * kPi - a);
    d_side = std::min(d_side, a >= kPi / 2 ? rho : rho * std::sin(a));
  }
  return {std::min(d_end, d_side), d_end <= d_side};
}

}  // namespace

ExitEstimate estimate_exit_rectangle(const RectangleSpec& q, Complex start, long n, const WosConfig& cfg,
                                     Exec exec) {
  require(q.b > 0.0 && q.delta > 0.0, "rectangle: b and delta must be positive");
  if (std::abs(start.real()) > q.b || std::abs(start.imag()) > q.delta)
    throw PreconditionError("start: outside the rectangle");
  const double shell = cfg.epsilon_abs > 0.0 ? cfg.epsilon_abs : 1e-5 * 2.0 * std::hypot(q.b, q.delta);
  return run_bernoulli(n, cfg.seed, exec, [&](std::mt19937_64& rng) -> long {
    auto dist = [&](Complex z) { return rectangle_probe(q, z); };
    auto sh = [&](Complex) { return shell; };
    return walk(start, dist, sh, cfg.max_steps, rng).second ? 1 : 0;
  });
}

ExitEstimate estimate_exit_sector(const TruncatedSectorSpec& s, Complex start, long n, const WosConfig& cfg,
                                  SectorRoute route, Exec exec) {
  require(s.delta > 0.0 && s.delta < kPi, "sector: delta must lie in (0, pi)");
  require(s.R > 1.0, "sector: R must exceed 1");
  if (start == 0.0 || std::abs(std::arg(start)) > s.delta || std::abs(start) > s.R || std::abs(start) < 1.0 / s.R)
    throw PreconditionError("start: outside the truncated sector");
  if (route == SectorRoute::conformal) {
    // log maps the sector onto {|Re w| < log R, |Im w| < delta}, ends to ends
    return estimate_exit_rectangle({std::log(s.R), s.delta}, std::log(start), n, cfg, exec);
  }
  // The sector is scale invariant, so the default shell scales with |z|.
  const double rel = 1e-5;
  return run_bernoulli(n, cfg.seed, exec, [&](std::mt19937_64& rng) -> long {
    auto dist = [&](Complex z) { return sector_probe(s, z); };
    auto sh = [&](Complex z) { return cfg.epsilon_abs > 0.0 ? cfg.epsilon_abs : rel * std::abs(z); };
    return walk(start, dist, sh, cfg.max_steps, rng).second ? 1 : 0;
  });
}

MeanValueReport mean_value_check(const std::function<double(Complex)>& u, Complex center, double radius,
                                 Complex start, long n, const WosConfig& cfg, Exec exec) {
  require(radius > 0.0, "radius: must be positive");
  require(n >= 2, "samples: must be >= 2");
  if (!(std::abs(start - center) < radius)) throw PreconditionError("start: outside the ball");
  const double shell = cfg.epsilon_abs > 0.0 ? cfg.epsilon_abs : 1e-5 * 2.0 * radius;
  const long blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> s1(static_cast<std::size_t>(blocks)), s2(static_cast<std::size_t>(blocks));
  auto run_block = [&](long b) {
    auto rng = block_rng(cfg.seed, b);
    const long lo = b * kBlock, hi = std::min(n, lo + kBlock);
    CompensatedSum a, a2;
    for (long i = lo; i < hi; ++i) {
      auto dist = [&](Complex z) { return Probe{radius - std::abs(z - center), true}; };
      auto sh = [&](Complex) { return shell; };
      const Complex z = walk(start, dist, sh, cfg.max_steps, rng).first;
      const Complex d = z - center;
      const Complex exit = center + (std::abs(d) > 0.0 ? d * (radius / std::abs(d)) : Complex(radius));
      const double v = u(exit);
      a += v;
      a2 += v * v;
    }
    s1[b] = a.value();
    s2[b] = a2.value();
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < blocks; ++b) run_block(b);
  } else {
    for (long b = 0; b < blocks; ++b) run_block(b);
  }
  CompensatedSum t1, t2;
  for (long b = 0; b < blocks; ++b) {
    t1 += s1[b];
    t2 += s2[b];
  }
  const double nn = static_cast<double>(n);
  MeanValueReport rep;
  rep.mc_mean = t1.value() / nn;
  const double var = std::max(0.0, (t2.value() - nn * rep.mc_mean * rep.mc_mean) / (nn - 1.0));
  rep.stderr_ = std::sqrt(var / nn);
  rep.u_start = u(start);
  const double diff = rep.mc_mean - rep.u_start;
  if (rep.stderr_ > 0.0)
    rep.z_score = diff / rep.stderr_;
  else
    rep.z_score = std::abs(diff) <= 1e-12 * (1.0 + std::abs(rep.u_start)) ? 0.0 : std::copysign(kInf, diff);
  rep.pass = std::abs(rep.z_score) <= 4.0;
  return rep;
}

double rectangle_exit_bound(double distance_to_end, double delta) {
  require(delta > 0.0 && distance_to_end >= 0.0, "rectangle bound: need delta > 0, distance >= 0");
  return std::exp(-std::log(4.0 / 3.0) * std::floor(distance_to_end / delta));
}

double sector_exit_bound(double r, double R, double delta) {
  require(R > r && r > 0.0 && delta > 0.0, "sector bound: need R > r > 0, delta > 0");
  return (4.0 / 3.0) * std::pow(r / R, std::log(4.0 / 3.0) / delta);
}

}  // namespace pgfclt
