#include "doctest.h"
#include "pgfclt/serialize.hpp"

using namespace pgfclt;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const PreconditionError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("decimal strings round trip exactly") {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) CHECK(parse_decimal(decimal_string(x), "x") == x);
  CHECK(decimal_string(kInf) == "inf");
  CHECK(std::isnan(parse_decimal(Json("nan"), "x")));
  CHECK(parse_decimal(Json(0.25), "x") == 0.25);
  CHECK(error_of([] { parse_decimal(Json("0.5abc"), "alpha"); }).find("alpha") != std::string::npos);
  CHECK(error_of([] { parse_decimal(Json(true), "beta"); }).find("beta") != std::string::npos);
}

TEST_CASE("coefficient parsing names the offending entry") {
  CHECK(parse_coefficients(std::string(R"(["0.5", 0.25, "0.25"])")) == std::vector<double>{0.5, 0.25, 0.25});
  const auto msg = error_of([] { parse_coefficients(std::string(R"(["0.5", "x", "0.5"])")); });
  CHECK(msg.find("coeffs[1]") != std::string::npos);
  CHECK(error_of([] { parse_coefficients(std::string("[0.5,")); }).find("malformed") != std::string::npos);
  CHECK(error_of([] { parse_coefficients(std::string("{}")); }).find("coeffs") != std::string::npos);
}

TEST_CASE("root sets and reports round trip") {
  const auto rs = find_roots(PGFPoly::normalize({0.2, 0.3, 0.5}));
  const auto back = root_set_from_json(Json::parse(to_json(rs).dump()));
  REQUIRE(back.roots.size() == rs.roots.size());
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    CHECK(back.roots[i].value == rs.roots[i].value);
    CHECK(back.roots[i].multiplicity == rs.roots[i].multiplicity);
  }
  CHECK(back.c_X == rs.c_X);
  CHECK(back.N_X == rs.N_X);

  const auto rep = verify_normal_approx(PGFPoly::normalize({0.25, 0.5, 0.25}));
  const auto r2 = bound_report_from_json(Json::parse(to_json(rep).dump()));
  CHECK(r2.D == rep.D);
  CHECK(r2.esseen_value == rep.esseen_value);
  CHECK(r2.bound_sector.log2_value == rep.bound_sector.log2_value);
  CHECK(std::isnan(r2.ratio_ball) == std::isnan(rep.ratio_ball));
  CHECK(to_json(r2) == to_json(rep));
}

TEST_CASE("constructions round trip") {
  const auto c = construct_sector_sharp(10.0, kPi / 4);
  const auto j = to_json(c);
  CHECK(j.contains("pmf"));
  const auto back = construction_from_json(Json::parse(j.dump()));
  CHECK(back.pmf.probs() == c.pmf.probs());
  CHECK(back.pmf.span() == c.pmf.span());
  CHECK(back.k == c.k);
  REQUIRE(back.law);
  CHECK(back.law->degree() == c.law->degree());
  CHECK(to_json(back) == j);

  Json gen = j;
  gen.erase("pmf");
  gen["generator"] = {{"family", "sector"}};
  const auto rebuilt = construction_from_json(gen);
  CHECK(rebuilt.pmf.probs() == c.pmf.probs());

  Json bad = j;
  bad["params"]["sigma"] = "ten";
  CHECK(error_of([&] { construction_from_json(bad); }).find("construction.params.sigma") != std::string::npos);
  Json missing = j;
  missing.erase("k");
  CHECK(error_of([&] { construction_from_json(missing); }).find("construction.k") != std::string::npos);
}

TEST_CASE("estimates, multivariate laws and direction reports round trip") {
  const ExitEstimate e{0.125, 0.01, 4000, 18446744073709551615ULL};
  const auto e2 = exit_estimate_from_json(Json::parse(to_json(e).dump()));
  CHECK(e2.p_hat == e.p_hat);
  CHECK(e2.seed == e.seed);

  const MultiPGF f(2, {{{1, 0}, 0.5}, {{0, 1}, 0.5}}, true);
  const auto f2 = multi_pgf_from_json(Json::parse(to_json(f).dump()));
  CHECK(f2.terms() == f.terms());
  CHECK(f2.constructively_stable());
  Json broken = to_json(f);
  broken["terms"][1]["exponents"][0] = "one";
  CHECK(error_of([&] { multi_pgf_from_json(broken); }).find("mpgf.terms[1].exponents[0]") != std::string::npos);

  const DirectionReport d{{1, 2}, 0.5, 0.7, 0.01};
  const auto d2 = direction_report_from_json(Json::parse(to_json(d).dump()));
  CHECK(d2.v == d.v);
  CHECK(d2.lattice_sigma == d.lattice_sigma);
  const SectorCheckReport s{true, kPi / 2, 2.0, 3};
  CHECK(to_json(sector_check_from_json(to_json(s))) == to_json(s));
}
