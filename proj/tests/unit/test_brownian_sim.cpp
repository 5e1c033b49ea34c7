#include "doctest.h"
#include "pgfclt/brownian_sim.hpp"

using namespace pgfclt;

TEST_CASE("square crossing from the center is one half") {
  WosConfig cfg;
  cfg.seed = 1;
  const auto e = estimate_exit_rectangle({1.0, 1.0}, 0.0, 20000, cfg);
  CHECK(std::abs(e.p_hat - 0.5) <= 3 * e.stderr_);
  CHECK(e.stderr_ == doctest::Approx(std::sqrt(e.p_hat * (1 - e.p_hat) / 20000)));
  CHECK(e.n_samples == 20000);
}

TEST_CASE("rectangle exit bound") {
  WosConfig cfg;
  cfg.seed = 2;
  const double delta = 1.0;
  // start at the center of a rectangle with b - a = 10 delta, a = 0
  const auto e = estimate_exit_rectangle({10.0, delta}, 0.0, 20000, cfg);
  CHECK(e.p_hat <= rectangle_exit_bound(10.0, delta) + 3 * e.stderr_);
  CHECK(rectangle_exit_bound(10.0, 1.0) == doctest::Approx(std::pow(0.75, 10)));
  CHECK_THROWS_AS(estimate_exit_rectangle({1.0, 1.0}, Complex(2.0, 0.0), 10, cfg), PreconditionError);
}

TEST_CASE("start on an end is absorbed immediately") {
  WosConfig cfg;
  cfg.seed = 3;
  const auto e = estimate_exit_rectangle({1.0, 1.0}, Complex(1.0 - 1e-7, 0.0), 1000, cfg);
  CHECK(e.p_hat == 1.0);
}

TEST_CASE("sector exit: bound and route agreement") {
  WosConfig cfg;
  cfg.seed = 4;
  const double delta = kPi / 4;
  const double R = std::exp(5 * delta);
  const auto d = estimate_exit_sector({delta, R}, 1.0, 20000, cfg, SectorRoute::direct);
  CHECK(d.p_hat <= sector_exit_bound(1.0, R, delta) + 3 * d.stderr_);
  const TruncatedSectorSpec half{kPi / 2, 4.0};
  const auto a = estimate_exit_sector(half, 1.0, 20000, cfg, SectorRoute::direct);
  cfg.seed = 5;
  const auto b = estimate_exit_sector(half, 1.0, 20000, cfg, SectorRoute::conformal);
  CHECK(std::abs(a.p_hat - b.p_hat) <= 4 * std::hypot(a.stderr_, b.stderr_));
  CHECK(sector_exit_bound(1.0, 1.0001, 0.5) > 1.0);
  CHECK_THROWS_AS(estimate_exit_sector(half, Complex(-1.0, 0.0), 10, cfg), PreconditionError);
}

TEST_CASE("estimates are reproducible and independent of scheduling") {
  WosConfig cfg;
  cfg.seed = 99;
  const auto a = estimate_exit_rectangle({2.0, 1.0}, Complex(0.3, 0.2), 5000, cfg, Exec::serial);
  const auto b = estimate_exit_rectangle({2.0, 1.0}, Complex(0.3, 0.2), 5000, cfg, Exec::parallel);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("mean value property") {
  WosConfig cfg;
  cfg.seed = 6;
  const auto re = mean_value_check([](Complex z) { return z.real(); }, 0.0, 1.0, 0.0, 20000, cfg);
  CHECK(re.pass);
  const auto lg = mean_value_check([](Complex z) { return std::log(std::abs((1.0 + z) / 2.0)); }, 1.0, 0.5, 1.0,
                                   20000, cfg);
  CHECK(lg.pass);
  CHECK(std::abs(lg.u_start) < 1e-15);
  const auto sq = mean_value_check([](Complex z) { return std::norm(z); }, 0.0, 1.0, 0.0, 2000, cfg);
  CHECK_FALSE(sq.pass);
  CHECK(sq.mc_mean > 0.99);
}
