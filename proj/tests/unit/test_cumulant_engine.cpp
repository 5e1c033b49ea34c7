#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pgfclt/cumulant_engine.hpp"
#include "pgfclt/random_pgf.hpp"
#include "pgfclt/series.hpp"

using namespace pgfclt;

TEST_CASE("truncated series log and exp are inverse") {
  TruncatedSeries<double> g(10);
  for (int j = 1; j <= 10; ++j) g[j] = 1.0 / (j + 1.0);
  auto e = TruncatedSeries<double>::exp(g);
  e[0] -= 1.0;
  const auto l = TruncatedSeries<double>::log1p(e);
  for (int j = 1; j <= 10; ++j) CHECK(l[j] == doctest::Approx(g[j]).epsilon(1e-13));
  const auto c = compose(TruncatedSeries<double>::expm1(10), g);
  for (int j = 1; j <= 10; ++j) CHECK(c[j] == doctest::Approx(e[j]).epsilon(1e-13));
  CHECK(g.evaluate(0.5) == doctest::Approx(0.5 / 2 + 0.25 / 3 + 0.125 / 4 + 0.0625 / 5 + std::pow(0.5, 5) / 6 +
                                           std::pow(0.5, 6) / 7 + std::pow(0.5, 7) / 8 + std::pow(0.5, 8) / 9 +
                                           std::pow(0.5, 9) / 10 + std::pow(0.5, 10) / 11));
}

TEST_CASE("cumulants from roots: closed forms") {
  RootSet minus_one{{{-1.0, 1}}, 0, 0};
  auto a = cumulants_from_roots(minus_one, 8);
  CHECK(a.kappa()[1] == doctest::Approx(0.5));
  CHECK(a.kappa()[2] == doctest::Approx(0.25));
  RootSet dbl{{{-1.0, 2}}, 0, 0};
  CHECK(cumulants_from_roots(dbl, 4).kappa()[2] == doctest::Approx(0.5));
  RootSet pm_i{{{Complex(0, 1), 1}, {Complex(0, -1), 1}}, 0, 0};
  auto k = cumulants_from_roots(pm_i, 6).kappa();
  CHECK(k[1] == doctest::Approx(1.0));
  CHECK(k[2] == doctest::Approx(1.0));
  const auto ko = oracle::cumulants_raw({0.5, 0.0, 0.5}, 6);
  for (int j = 1; j <= 6; ++j) CHECK(std::abs(k[j] - ko[j]) < 1e-12);
  RootSet at_one{{{1.0, 1}}, 0, 0};
  CHECK_THROWS_AS(cumulants_from_roots(at_one), PreconditionError);
  CHECK_THROWS_AS(cumulants_from_roots(minus_one, 65), PreconditionError);
}

TEST_CASE("cumulants from roots agree with the raw-moment oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_coefficient_pgf(1 + static_cast<int>(rng() % 20), rng);
    const auto k = cumulants_from_roots(find_roots(f), 8).kappa();
    const auto o = oracle::cumulants_raw(f.coeffs(), 8);
    for (int j = 1; j <= 8; ++j) CHECK(std::abs(k[j] - o[j]) <= 1e-8 * std::max(1.0, std::abs(o[j])));
  }
}

TEST_CASE("tail ratio") {
  CumulantSeq only2({0, 0, 1.0, 0, 0, 0});
  CHECK(tail_ratio(only2, 0.3, 2).ratio == doctest::Approx(1.0));
  CHECK(tail_ratio(only2, 0.3, 3).ratio == 0.0);
  std::vector<double> geo(65, 0.0);
  for (int j = 1; j <= 64; ++j) geo[j] = std::ldexp(1.0, -j);
  auto t = tail_ratio(CumulantSeq(geo), 1.0, 4);
  CHECK(t.ratio == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(t.truncation_estimate < 1e-15);
  CHECK_THROWS_AS(tail_ratio(CumulantSeq({0, 1.0, 0, 0}), 0.5, 2), DegenerateError);
}

TEST_CASE("tail decay bound holds for PGFs zero free near 1") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_seed_product(6, 1, rng);
    const auto rs = f.roots();
    const double dball = root_geometry(rs).delta_ball;
    const double eps = dball / 16.0 * 0.99;
    const auto rep = tail_decay_report(cumulants_from_roots(rs, 32), eps);
    CHECK(rep.within_bound);
    CHECK(rep.max_scaled_ratio >= 0.0);
  }
}

TEST_CASE("dominant term search: hand traces") {
  const std::vector<double> c1{1, 0, 0};
  auto r = dominant_term_search(c1, 1.0, 1.0, 1);
  CHECK(r.ell == 1);
  CHECK(r.s_star == 0.5);
  const std::vector<double> c2{1, 1};
  r = dominant_term_search(c2, 1.0, 1.0, 2);
  CHECK(r.ell == 1);
  CHECK(r.s_star == 1.0 / 32);
  CHECK_THROWS_AS(dominant_term_search(std::vector<double>{0.0, 1.0}, 1.0, 1.0, 1), PreconditionError);
  CHECK_THROWS_AS(dominant_term_search(c2, 1.0, 0.5, 2), PreconditionError);
}

TEST_CASE("dominant term search: the first-scale counterexample is handled") {
  // head-only halting at the first scale would return ell = 2 here, violating the conclusion
  const std::vector<double> c{0.99, 4.0, 4.98};
  const auto r = dominant_term_search(c, 1.0, 1.0, 2);
  double others = 0.0;
  for (int i = 1; i <= 3; ++i)
    if (i != r.ell) others += c[i - 1] * std::pow(r.s_star, i);
  CHECK(c[r.ell - 1] * std::pow(r.s_star, r.ell) > others);
}

TEST_CASE("tame cumulants") {
  CumulantSeq only2({0, 0.3, 1.0, 0, 0, 0});
  CHECK_NOTHROW(tame_cumulants(only2, 0.25, 3));
  const auto bern = cumulant_seq_from_pmf(DiscretePMF({0.5, 0.5}), 16);
  CHECK(bern[2] == doctest::Approx(0.125));
  CHECK(bern[4] == doctest::Approx(-1.0 / 192));
  const auto t = tame_cumulants(bern, 0.25, 4);
  CHECK(t.s_star > 0.25 * std::pow(2.0, -6.0 * 5));
  for (int j = 3; j <= 16; ++j) CHECK(std::abs(bern[2]) >= std::pow(t.s_star, j - 2) * std::abs(bern[j]));
  CHECK_THROWS_AS(tame_cumulants(CumulantSeq({0, 1.0, 0, 0, 0}), 0.25, 3), DegenerateError);
  CHECK_THROWS_AS(tame_cumulants(bern, 0.5, 4), PreconditionError);
}

TEST_CASE("negcos extrema") {
  const auto e3 = negcos_extrema(3);
  CHECK(e3.min_val <= -9.0 / 8 + 1e-9);
  CHECK(e3.max_val >= 9.0 / 8 - 1e-9);
  const double at_4pi3 = std::pow(std::cos(4 * kPi / 3), 3) - std::cos(4 * kPi);
  CHECK(at_4pi3 == doctest::Approx(-9.0 / 8));
  CHECK(negcos_extrema(4).min_val < -0.5);
  CHECK_THROWS_AS(negcos_extrema(2), PreconditionError);
}
