#include "doctest.h"
#include "oracles.hpp"
#include "pgfclt/constructions.hpp"

using namespace pgfclt;

TEST_CASE("sector seeds") {
  auto a = seed_sector_pgf(1.0, kPi / 2).coeffs();
  REQUIRE(a.size() == 3);
  CHECK(a[0] == doctest::Approx(0.5));
  CHECK(a[1] == 0.0);
  CHECK(a[2] == doctest::Approx(0.5));
  auto b = seed_sector_pgf(1.0, kPi).coeffs();
  CHECK(b[0] == doctest::Approx(0.25));
  CHECK(b[1] == doctest::Approx(0.5));
  CHECK(b[2] == doctest::Approx(0.25));
  CHECK_THROWS_AS(seed_sector_pgf(1.0, kPi / 3), NotAPgfError);
  CHECK_THROWS_AS(seed_sector_pgf(0.5, kPi / 2), PreconditionError);
  for (double theta : {kPi / 2, 2.0, 2.7}) {
    const double rho = 1.7;
    const auto rs = find_roots(seed_sector_pgf(rho, theta));
    for (const auto& r : rs.roots) {
      CHECK(std::abs(std::abs(r.value) - rho) < 1e-8);
      CHECK(std::abs(std::abs(std::arg(r.value)) - theta) < 1e-8);
    }
  }
}

TEST_CASE("rho solver") {
  CHECK(solve_rho_for_variance(kPi / 2, 1.0) == 1.0);
  const double rho = solve_rho_for_variance(kPi / 2, 0.5);
  const auto c = seed_sector_pgf(rho, kPi / 2).coeffs();
  const double mean = 2 * c[2];
  CHECK(std::abs(4 * c[2] - mean * mean - 0.5) <= 1e-12);
  CHECK_THROWS_AS(solve_rho_for_variance(kPi / 2, 10.0), PreconditionError);
  CHECK(seed_variance(1.0, kPi / 2) == doctest::Approx(1.0));
}

TEST_CASE("sector-sharp construction") {
  const auto c1 = construct_sector_sharp(10.0, kPi / 2);
  CHECK(c1.k == 1);
  CHECK(c1.params.at("theta") == doctest::Approx(kPi / 2));
  CHECK(std::abs(c1.achieved_sigma - 10.0) < 1e-6);
  CHECK(std::abs(moments(c1.pmf).sigma() - 10.0) < 1e-6);
  CHECK(std::abs(c1.achieved_delta - kPi / 2) < 1e-9);

  const auto c2 = construct_sector_sharp(10.0, kPi / 4);
  CHECK(c2.k == 2);
  CHECK(std::abs(moments(c2.pmf).sigma() - 10.0) < 1e-6);
  REQUIRE(c2.roots);
  std::vector<double> args;
  for (const auto& r : c2.roots->roots) args.push_back(std::abs(std::arg(r.value)));
  std::sort(args.begin(), args.end());
  CHECK(args.front() == doctest::Approx(kPi / 4));
  CHECK(args.back() == doctest::Approx(3 * kPi / 4));
  // the closed-form roots agree with the root finder on the factor
  const auto found = c2.law->roots();
  CHECK(std::abs(root_geometry(found).delta_sector - kPi / 4) < 1e-8);
  // here rho = 1 and X = 4 Binomial(25, 1/2); enumeration value frozen at 40 digits
  CHECK(std::abs(kolmogorov_distance(c2.pmf) - 0.079259709439103023) < 1e-12);
  CHECK(c2.lower_bound <= kolmogorov_distance(c2.pmf));

  CHECK_THROWS_AS(construct_sector_sharp(1.0, 0.5), PreconditionError);
}

TEST_CASE("ball-sharp construction") {
  const auto c = construct_ball_sharp(4096, 0.25, 16.0, 1.0);
  CHECK(c.k == 33);
  CHECK(c.params.at("N") == 124);
  CHECK(std::abs(c.achieved_sigma * c.achieved_sigma - 256.0) < 1e-6);
  CHECK(std::abs(moments(c.pmf).variance - 256.0) < 1e-6);
  // p solves p(1-p) = 256/(33^2 124) on the small branch
  CHECK(c.params.at("p") == doctest::Approx(0.0018993984666307768).epsilon(1e-12));
  CHECK(std::abs(kolmogorov_distance(c.pmf) - 0.47641392717478489) < 1e-10);
  CHECK(c.lower_bound <= kolmogorov_distance(c.pmf));
  // closed-form roots match the root finder
  const auto found = c.law->roots();
  CHECK(std::abs(root_geometry(found).delta_ball - c.achieved_delta) < 1e-8);

  CHECK_THROWS_AS(construct_ball_sharp(4096, 0.25, 64.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(construct_ball_sharp(4096, 0.25, 16.0), DegenerateError);
  try {
    construct_ball_sharp(4096, 0.25, 16.0);
  } catch (const DegenerateError& e) {
    CHECK(std::string(e.what()).find("c_k") != std::string::npos);
  }
}

TEST_CASE("scaled Poisson construction") {
  const auto c = poisson_scaled(4.0, 2.0);
  CHECK(c.k == 1);
  CHECK(std::abs(c.achieved_sigma - 4.0) < 1e-9);
  CHECK(poisson_potential(4.0, 2.0, 1.0) == 0.0);
  CHECK(poisson_potential(3.0, 0.7, 1.0) == 0.0);
  // mass beyond the truncation is below tail_tol
  const double lambda = 16.0;
  const std::size_t M = c.pmf.size() - 1;
  double tail = 0.0;
  for (std::size_t y = M + 1; y < M + 400; ++y)
    tail += std::exp(-lambda + y * std::log(lambda) - std::lgamma(y + 1.0));
  CHECK(tail < 1e-12);

  // closed form vs truncated PGF on |z| <= 2, |arg z| <= delta/2
  const auto wide = poisson_scaled(4.0, 2.0, 1e-12, 2.0);
  const double delta = kPi / 2;
  for (double r : {0.3, 1.0, 1.5, 2.0})
    for (double a : {-delta / 2, 0.0, 0.3, delta / 2}) {
      const Complex z = std::polar(r, a);
      const double direct = std::log(std::abs(oracle::poly_eval(wide.pmf.probs(), z)));
      CHECK(std::abs(direct - poisson_potential(4.0, 2.0, z)) < 1e-8);
    }
  const auto frac = poisson_scaled(5.0, 0.8, 1e-12, 2.0);
  CHECK(frac.support_scale == doctest::Approx(0.4));
  CHECK(std::abs(frac.achieved_sigma - 5.0) < 1e-9);
  for (double r : {0.5, 2.0}) {
    const Complex z = std::polar(r, 0.4);
    const Complex w = std::pow(z, 0.4);
    CHECK(std::abs(std::log(std::abs(oracle::poly_eval(frac.pmf.probs(), w))) - poisson_potential(5.0, 0.8, z)) <
          1e-8);
  }
  CHECK_THROWS_AS(poisson_scaled(4000.0, 0.01), PreconditionError);
}

TEST_CASE("discrete lower bound") {
  CHECK(discrete_lower_bound(1.0, 1) == doctest::Approx(1.1253517471925912e-7));
  CHECK(discrete_lower_bound(3.0, 3) == doctest::Approx(std::exp(-16.0)));
  CHECK_THROWS_AS(discrete_lower_bound(0.1, 1), PreconditionError);
}
