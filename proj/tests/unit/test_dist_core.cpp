#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pgfclt/dist_core.hpp"

using namespace pgfclt;

TEST_CASE("pmf construction validates and renormalizes") {
  CHECK_NOTHROW(DiscretePMF({0.5, 0.5}));
  CHECK_THROWS_AS(DiscretePMF({0.5, 0.6}), PreconditionError);
  CHECK_THROWS_AS(DiscretePMF({1.1, -0.1}), PreconditionError);
  CHECK_THROWS_AS(DiscretePMF({0.5, 0.5}, 0), PreconditionError);
  const DiscretePMF p({0.5 + 1e-10, 0.5});
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));
  try {
    DiscretePMF({0.5, -0.5, 1.0});
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("probs[1]") != std::string::npos);
  }
}

TEST_CASE("moments of small laws") {
  auto pm = moments(DiscretePMF::point_mass(0));
  CHECK(pm.mean == 0.0);
  CHECK(pm.variance == 0.0);
  auto b = moments(DiscretePMF({0.5, 0.5}));
  CHECK(b.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.variance == doctest::Approx(0.25).epsilon(1e-15));
  auto t = moments(DiscretePMF({0.25, 0.5, 0.25}));
  CHECK(t.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t.variance == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("cumulants from the pmf") {
  auto pm = cumulants_from_pmf(DiscretePMF::point_mass(3), 6);
  CHECK(pm[1] == doctest::Approx(3.0));
  for (int j = 2; j <= 6; ++j) CHECK(std::abs(pm[j]) < 1e-12);

  auto b = cumulants_from_pmf(DiscretePMF({0.5, 0.5}), 4);
  CHECK(b[1] == doctest::Approx(0.5));
  CHECK(b[2] == doctest::Approx(0.25));
  CHECK(std::abs(b[3]) < 1e-15);
  CHECK(b[4] == doctest::Approx(-0.125));

  // frozen exact values for (0.2, 0.5, 0.3), from symbolic expansion of log E e^{tX}
  const double frozen[] = {1.1, 0.49, -0.048, -0.2306, 0.09024, 0.42088, -0.352128, -1.5772904};
  auto k = cumulants_from_pmf(DiscretePMF({0.2, 0.5, 0.3}), 8);
  for (int j = 1; j <= 8; ++j) CHECK(k[j] == doctest::Approx(frozen[j - 1]).epsilon(1e-11));

  CHECK_THROWS_AS(cumulants_from_pmf(DiscretePMF({0.5, 0.5}), 0), PreconditionError);
  CHECK_THROWS_AS(cumulants_from_pmf(DiscretePMF({0.5, 0.5}), 65), PreconditionError);
}

TEST_CASE("cumulants additivity and agreement with the raw-moment oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(2 + rng() % 6), b(2 + rng() % 6);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    const auto p = DiscretePMF::from_weights(a), q = DiscretePMF::from_weights(b);
    const auto kp = cumulants_from_pmf(p, 8), kq = cumulants_from_pmf(q, 8);
    const auto kc = cumulants_from_pmf(convolve(p, q), 8);
    const auto ko = oracle::cumulants_raw(p.probs(), 8);
    for (int j = 1; j <= 8; ++j) {
      const double scale = std::max({1.0, std::abs(kp[j]), std::abs(kq[j])});
      CHECK(std::abs(kc[j] - kp[j] - kq[j]) <= 1e-9 * scale);
      CHECK(std::abs(kp[j] - ko[j]) <= 1e-9 * std::max(1.0, std::abs(ko[j])));
    }
    const auto m = moments(p);
    CHECK(std::abs(kp[1] - m.mean) <= 1e-12);
    CHECK(std::abs(kp[2] - m.variance) <= 1e-12);
  }
}

TEST_CASE("convolution examples and span rules") {
  const DiscretePMF bern({0.5, 0.5});
  auto c = convolve(DiscretePMF::point_mass(0), bern);
  CHECK(c.probs() == bern.probs());
  auto bb = convolve(bern, bern);
  REQUIRE(bb.size() == 3);
  CHECK(bb[0] == doctest::Approx(0.25));
  CHECK(bb[1] == doctest::Approx(0.5));
  CHECK(bb[2] == doctest::Approx(0.25));
  auto mixed = convolve(bern, DiscretePMF({1.0 / 3, 2.0 / 3}));
  CHECK(mixed[0] == doctest::Approx(1.0 / 6));
  CHECK(mixed[1] == doctest::Approx(0.5));
  CHECK(mixed[2] == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(convolve(bern, bern.with_span(2)), PreconditionError);
}

TEST_CASE("serial and parallel convolution agree bit for bit") {
  const auto a = DiscretePMF(oracle::binomial_pmf(5000, 0.3));
  const auto b = DiscretePMF(oracle::binomial_pmf(3000, 0.6));
  const auto s = serial::convolve(a, b), p = convolve(a, b, Exec::parallel);
  CHECK(s.probs() == p.probs());
  CHECK(compensated_sum(s.probs()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("convolution power matches the binomial oracle") {
  const auto p = convolution_power(DiscretePMF({0.7, 0.3}), 37);
  const auto o = oracle::binomial_pmf(37, 0.3);
  REQUIRE(p.size() == o.size());
  for (std::size_t i = 0; i < o.size(); ++i) CHECK(std::abs(p[i] - o[i]) <= 1e-14);
  CHECK(convolution_power(p, 0).size() == 1);
}

TEST_CASE("scale_support") {
  const DiscretePMF bern({0.5, 0.5});
  CHECK(scale_support(bern, 1).probs() == bern.probs());
  auto two = scale_support(bern, 2);
  CHECK(two.span() == 2);
  CHECK(moments(two).sigma() == doctest::Approx(1.0));
  auto three = scale_support(DiscretePMF({0.25, 0.5, 0.25}), 3);
  CHECK(three.expanded() == std::vector<double>{0.25, 0, 0, 0.5, 0, 0, 0.25});
  CHECK(moments(three).sigma() == doctest::Approx(3.0 * std::sqrt(0.5)));
  CHECK_THROWS_AS(scale_support(bern, 0), PreconditionError);
}

TEST_CASE("kolmogorov distance") {
  const double bern = kolmogorov_distance(DiscretePMF({0.5, 0.5}));
  CHECK(std::abs(bern - 0.34134474606854293) <= 1e-12);
  CHECK_THROWS_AS(kolmogorov_distance(DiscretePMF::point_mass(4)), DegenerateError);

  const auto b100 = DiscretePMF(oracle::binomial_pmf(100, 0.5));
  const double D = kolmogorov_distance(b100);
  CHECK(std::abs(D - oracle::kolmogorov(b100.probs())) <= 1e-12);
  const double lattice = 1.0 / (2.0 * 5.0 * std::sqrt(2.0 * kPi));
  CHECK(std::abs(D - lattice) <= 0.2 * lattice);

  // invariances hold exactly
  const auto p = DiscretePMF({0.1, 0.2, 0.3, 0.4});
  CHECK(kolmogorov_distance(scale_support(p, 7)) == kolmogorov_distance(p));
  const auto padded = DiscretePMF({0.1, 0.2, 0.3, 0.4, 0.0, 0.0});
  CHECK(kolmogorov_distance(padded) == kolmogorov_distance(p));
  CHECK(serial::kolmogorov_distance(b100) == kolmogorov_distance(b100, Exec::parallel));
}

TEST_CASE("kolmogorov distance of binomials against frozen enumeration") {
  // exact enumeration at 40 digits
  const std::pair<int, double> frozen[] = {{64, 0.049673376873983448}, {256, 0.024909554968070076},
                                           {1024, 0.012463902946489772}, {4096, 0.0062330926818801298}};
  for (auto [n, d] : frozen) CHECK(std::abs(kolmogorov_distance(DiscretePMF(oracle::binomial_pmf(n, 0.5))) - d) <= 1e-12);
}
