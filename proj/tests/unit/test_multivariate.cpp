#include "doctest.h"
#include "oracles.hpp"
#include "pgfclt/multivariate.hpp"

using namespace pgfclt;

namespace {

MultiPGF two_point() { return MultiPGF(2, {{{1, 0}, 0.5}, {{0, 1}, 0.5}}, true); }

MultiPGF binomial_coordinate(int d, int i, int n) {
  std::map<Exponent, double> t;
  const auto pmf = oracle::binomial_pmf(n, 0.5);
  for (int k = 0; k <= n; ++k) {
    Exponent e(static_cast<std::size_t>(d), 0);
    e[i] = k;
    t[e] = pmf[k];
  }
  return MultiPGF::from_weights(d, std::move(t), true);
}

}  // namespace

TEST_CASE("MultiPGF validation") {
  CHECK_THROWS_AS(MultiPGF(2, {{{1, 0}, 0.5}}), PreconditionError);
  CHECK_THROWS_AS(MultiPGF(2, {{{1, 0}, 1.5}, {{0, 1}, -0.5}}), PreconditionError);
  CHECK_THROWS_AS(MultiPGF(2, {{{1}, 1.0}}), PreconditionError);
  const std::vector<double> ones{1.0, 1.0};
  CHECK(two_point()(ones) == doctest::Approx(1.0));
}

TEST_CASE("projection") {
  const auto f = two_point();
  const std::vector<int> v11{1, 1}, v12{1, 2}, v0{0, 0};
  const auto p = project(f, v11);
  CHECK(p.coeffs() == std::vector<double>{0.0, 1.0});
  const auto q = project(f, v12);
  CHECK(q.coeffs() == std::vector<double>{0.0, 0.5, 0.5});
  const auto rs = find_roots(q);
  std::vector<double> re;
  for (const auto& r : rs.roots) re.push_back(r.value.real());
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-1.0));
  CHECK(re[1] == 0.0);
  CHECK_THROWS_AS(project(f, v0), PreconditionError);
  // a law depending only on the first coordinate projects to its marginal
  const MultiPGF m(2, {{{0, 0}, 0.25}, {{2, 0}, 0.75}});
  const std::vector<int> v30{3, 5};
  CHECK(project(m, v30).coeffs() == std::vector<double>{0.25, 0, 0, 0, 0, 0, 0.75});
}

TEST_CASE("covariance statistics") {
  const auto s = covariance_stats(two_point());
  CHECK(s.A(0, 0) == doctest::Approx(0.25));
  CHECK(s.A(0, 1) == doctest::Approx(-0.25));
  CHECK(s.sigma2_max == doctest::Approx(0.5));
  const auto pm = covariance_stats(MultiPGF(3, {{{1, 2, 3}, 1.0}}));
  CHECK(pm.A.norm() == 0.0);
  const auto ind = MultiPGF(2, {{{0, 0}, 0.5}, {{1, 0}, 0.5}}) * MultiPGF(2, {{{0, 0}, 0.5}, {{0, 1}, 0.5}});
  const auto si = covariance_stats(ind);
  CHECK(std::abs(si.A(0, 1)) < 1e-15);
  CHECK(si.A(0, 0) == doctest::Approx(0.25));
}

TEST_CASE("stable products") {
  const std::vector<AffineForm> one{{0.0, {0.5, 0.5}}};
  const auto f = stable_product_generator(2, one);
  CHECK(f.constructively_stable());
  CHECK(f.terms() == two_point().terms());
  const std::vector<AffineForm> ind{{1.0, {1.0, 0.0}}, {1.0, {0.0, 1.0}}};
  const auto g = stable_product_generator(2, ind);
  CHECK(g.terms().size() == 4);
  for (const auto& [e, p] : g.terms()) CHECK(p == doctest::Approx(0.25));
  const std::vector<AffineForm> bad{{1.0, {0.0, 0.0}}};
  CHECK_THROWS_AS(stable_product_generator(2, bad), PreconditionError);
  const auto a = stable_product_generator(3, random_affine_forms(3, 10, 42));
  const auto b = stable_product_generator(3, random_affine_forms(3, 10, 42));
  CHECK(a.terms() == b.terms());
}

TEST_CASE("projection variance identity and sector guarantee") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = stable_product_generator(3, random_affine_forms(3, 6, seed));
    const auto cov = covariance_stats(f);
    CHECK(cov.min_eigenvalue >= -1e-10);
    for (const auto& v : enumerate_directions(3, 3)) {
      const auto m = moments(project(f, v).pmf());
      CHECK(std::abs(m.variance - projected_variance(cov, v)) <= 1e-10 * std::max(1.0, m.variance));
      CHECK(projection_sector_check(f, v).pass);
    }
  }
  const std::vector<int> v12{1, 2};
  const auto rep = projection_sector_check(two_point(), v12);
  CHECK(rep.pass);
  CHECK(rep.min_abs_arg == doctest::Approx(kPi));
  CHECK(projection_sector_check(two_point(), std::vector<int>{1, 1}).nonzero_roots == 0);
  CHECK_THROWS_AS(projection_sector_check(MultiPGF(2, {{{1, 0}, 1.0}}), v12), PreconditionError);
}

TEST_CASE("direction enumeration") {
  const auto d = enumerate_directions(2, 3);
  CHECK(d.size() == 15);
  CHECK(d.front() == std::vector<int>{0, 1});
  CHECK(d.back() == std::vector<int>{3, 3});
}

TEST_CASE("per-direction normality improves with n") {
  const auto dirs = enumerate_directions(2, 2);
  std::vector<double> prev(dirs.size(), 1.0);
  for (int n : {16, 64, 256}) {
    const std::vector<MultiPGF> parts{binomial_coordinate(2, 0, n), binomial_coordinate(2, 1, n)};
    const auto reps = direction_reports(parts, dirs);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      CHECK(reps[i].D < prev[i]);
      prev[i] = reps[i].D;
    }
    // the independent product agrees with the expanded product
    if (n == 16) {
      const auto full = parts[0] * parts[1];
      for (const auto& v : dirs) {
        const auto a = project(full, v).coeffs(), b = project(std::span<const MultiPGF>(parts), v).coeffs();
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-15);
      }
    }
  }
}

TEST_CASE("null directions concentrate") {
  // X = (B, m - B): v = (1, 1) has zero variance while sigma^2 grows with m
  for (int m : {10, 100, 1000}) {
    std::map<Exponent, double> t;
    const auto pmf = oracle::binomial_pmf(m, 0.5);
    for (int k = 0; k <= m; ++k) t[{k, m - k}] = pmf[k];
    const auto f = MultiPGF::from_weights(2, t);
    const auto cov = covariance_stats(f);
    const std::vector<int> v{1, 1};
    CHECK(projected_variance(cov, v) / cov.sigma2_max < 1e-12);
    const auto p = project(f, v);
    CHECK(p.coeffs().back() == doctest::Approx(1.0));
  }
}
