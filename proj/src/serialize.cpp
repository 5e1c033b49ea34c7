#include "pgfclt/serialize.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace pgfclt {

std::string decimal_string(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_decimal(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw PreconditionError(field + ": expected a number or decimal string");
  const auto& s = j.get_ref<const std::string&>();
  if (s.empty()) throw PreconditionError(field + ": empty decimal string");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw PreconditionError(field + ": not a decimal number: \"" + s + "\"");
  return v;
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  return decimal_string(x);
}

std::vector<double> parse_coefficients(const Json& j, const std::string& field) {
  if (!j.is_array()) throw PreconditionError(field + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_decimal(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> parse_coefficients(const std::string& text, const std::string& field) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw PreconditionError(field + ": malformed JSON (" + e.what() + ")");
  }
  return parse_coefficients(j, field);
}

namespace {

const Json& at(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw PreconditionError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw PreconditionError(where + "." + key + ": missing");
  return *it;
}

double num_at(const Json& j, const std::string& key, const std::string& where) {
  return parse_decimal(at(j, key, where), where + "." + key);
}

long long_at(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = at(j, key, where);
  if (!v.is_number_integer()) throw PreconditionError(where + "." + key + ": expected an integer");
  return v.get<long>();
}

Json complex_json(Complex z) { return Json::array({decimal_string(z.real()), decimal_string(z.imag())}); }

Complex complex_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw PreconditionError(where + ": expected [re, im]");
  return {parse_decimal(j[0], where + "[0]"), parse_decimal(j[1], where + "[1]")};
}

Json decimal_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(decimal_string(x));
  return a;
}

}  // namespace

Json to_json(const RootSet& rs) {
  Json roots = Json::array();
  for (const auto& r : rs.roots) roots.push_back({{"value", complex_json(r.value)}, {"multiplicity", r.multiplicity}});
  return {{"roots", roots}, {"c_X", number(rs.c_X)}, {"N_X", rs.N_X}};
}

RootSet root_set_from_json(const Json& j) {
  RootSet rs;
  const Json& roots = at(j, "roots", "rootset");
  if (!roots.is_array()) throw PreconditionError("rootset.roots: expected an array");
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const std::string w = "rootset.roots[" + std::to_string(i) + "]";
    rs.roots.push_back({complex_from(at(roots[i], "value", w), w + ".value"),
                        static_cast<int>(long_at(roots[i], "multiplicity", w))});
  }
  rs.c_X = num_at(j, "c_X", "rootset");
  rs.N_X = static_cast<int>(long_at(j, "N_X", "rootset"));
  return rs;
}

Json to_json(const RootGeometry& g) {
  return {{"delta_ball", number(g.delta_ball)}, {"delta_sector", number(g.delta_sector)}};
}

RootGeometry root_geometry_from_json(const Json& j) {
  return {num_at(j, "delta_ball", "geometry"), num_at(j, "delta_sector", "geometry")};
}

Json to_json(const ConstantBound& b) { return {{"log2", number(b.log2_value)}, {"capped", number(b.capped)}}; }

ConstantBound constant_bound_from_json(const Json& j) { return {num_at(j, "log2", "bound"), num_at(j, "capped", "bound")}; }

Json to_json(const BoundReport& r) {
  return {{"degree", r.degree},
          {"sigma", number(r.sigma)},
          {"D", number(r.D)},
          {"delta_ball", number(r.delta_ball)},
          {"delta_sector", number(r.delta_sector)},
          {"constant_bound_ball", to_json(r.bound_ball)},
          {"constant_bound_sector", to_json(r.bound_sector)},
          {"ratio_sector", number(r.ratio_sector)},
          {"ratio_ball", number(r.ratio_ball)},
          {"esseen_T", number(r.esseen_T)},
          {"esseen_value", number(r.esseen_value)}};
}

BoundReport bound_report_from_json(const Json& j) {
  const std::string w = "report";
  BoundReport r;
  r.degree = long_at(j, "degree", w);
  r.sigma = num_at(j, "sigma", w);
  r.D = num_at(j, "D", w);
  r.delta_ball = num_at(j, "delta_ball", w);
  r.delta_sector = num_at(j, "delta_sector", w);
  r.bound_ball = constant_bound_from_json(at(j, "constant_bound_ball", w));
  r.bound_sector = constant_bound_from_json(at(j, "constant_bound_sector", w));
  r.ratio_sector = num_at(j, "ratio_sector", w);
  r.ratio_ball = num_at(j, "ratio_ball", w);
  r.esseen_T = num_at(j, "esseen_T", w);
  r.esseen_value = num_at(j, "esseen_value", w);
  return r;
}

Json to_json(const DiscretePMF& p) { return {{"probs", decimal_array(p.probs())}, {"span", p.span()}}; }

DiscretePMF pmf_from_json(const Json& j) {
  return DiscretePMF(parse_coefficients(at(j, "probs", "pmf"), "pmf.probs"), long_at(j, "span", "pmf"));
}

Json to_json(const ConstructionResult& c) {
  Json params = Json::object();
  for (const auto& [k, v] : c.params) params[k] = number(v);
  Json out = {{"family", c.family},
              {"params", params},
              {"k", c.k},
              {"support_scale", number(c.support_scale)},
              {"achieved_sigma", number(c.achieved_sigma)},
              {"achieved_delta", number(c.achieved_delta)},
              {"lower_bound", number(c.lower_bound)},
              {"support_size", c.pmf.size()}};
  if (c.pmf.size() <= kInlinePmfLimit)
    out["pmf"] = to_json(c.pmf);
  else
    out["generator"] = {{"family", c.family}, {"params", params}};
  if (c.law) {
    Json factors = Json::array();
    for (const auto& f : c.law->factors())
      factors.push_back({{"coeffs", decimal_array(f.poly.coeffs())}, {"power", f.power}});
    out["factors"] = factors;
  }
  if (c.roots) out["roots"] = to_json(*c.roots);
  return out;
}

ConstructionResult construction_from_json(const Json& j) {
  const std::string w = "construction";
  const Json& fam = at(j, "family", w);
  if (!fam.is_string()) throw PreconditionError(w + ".family: expected a string");
  std::map<std::string, double> params;
  const Json& pj = at(j, "params", w);
  for (auto it = pj.begin(); it != pj.end(); ++it) params[it.key()] = parse_decimal(it.value(), w + ".params." + it.key());

  ConstructionResult c;
  if (j.contains("generator")) {
    auto p = [&](const char* key) {
      auto it = params.find(key);
      if (it == params.end()) throw PreconditionError(w + ".params." + key + ": missing");
      return it->second;
    };
    const std::string f = fam.get<std::string>();
    if (f == "sector")
      c = construct_sector_sharp(p("sigma"), p("delta"));
    else if (f == "ball")
      c = construct_ball_sharp(static_cast<long>(p("n")), p("delta"), p("sigma"), p("c_k"));
    else if (f == "poisson")
      c = poisson_scaled(p("sigma"), p("kappa"), p("tail_tol"), p("eval_radius"));
    else
      throw PreconditionError(w + ".family: unknown family \"" + f + "\"");
    return c;
  }
  c.family = fam.get<std::string>();
  c.params = std::move(params);
  c.k = long_at(j, "k", w);
  c.support_scale = num_at(j, "support_scale", w);
  c.achieved_sigma = num_at(j, "achieved_sigma", w);
  c.achieved_delta = num_at(j, "achieved_delta", w);
  c.lower_bound = num_at(j, "lower_bound", w);
  c.pmf = pmf_from_json(at(j, "pmf", w));
  if (j.contains("factors")) {
    FactoredPGF law;
    const Json& fs = j["factors"];
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string fw = w + ".factors[" + std::to_string(i) + "]";
      law.times(PGFPoly::normalize(parse_coefficients(at(fs[i], "coeffs", fw), fw + ".coeffs")),
                long_at(fs[i], "power", fw));
    }
    c.law = std::move(law);
  }
  if (j.contains("roots")) c.roots = root_set_from_json(j["roots"]);
  return c;
}

Json to_json(const ExitEstimate& e) {
  return {{"p_hat", number(e.p_hat)}, {"stderr", number(e.stderr_)}, {"n_samples", e.n_samples}, {"seed", e.seed}};
}

ExitEstimate exit_estimate_from_json(const Json& j) {
  ExitEstimate e;
  e.p_hat = num_at(j, "p_hat", "estimate");
  e.stderr_ = num_at(j, "stderr", "estimate");
  e.n_samples = long_at(j, "n_samples", "estimate");
  const Json& s = at(j, "seed", "estimate");
  if (!s.is_number_unsigned() && !s.is_number_integer()) throw PreconditionError("estimate.seed: expected an integer");
  e.seed = s.get<std::uint64_t>();
  return e;
}

Json to_json(const MultiPGF& f) {
  Json terms = Json::array();
  for (const auto& [e, p] : f.terms()) terms.push_back({{"exponents", e}, {"coeff", decimal_string(p)}});
  return {{"dimension", f.dimension()}, {"terms", terms}, {"constructively_stable", f.constructively_stable()}};
}

MultiPGF multi_pgf_from_json(const Json& j) {
  const std::string w = "mpgf";
  const int d = static_cast<int>(long_at(j, "dimension", w));
  const Json& terms = at(j, "terms", w);
  if (!terms.is_array()) throw PreconditionError(w + ".terms: expected an array");
  std::map<Exponent, double> m;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tw = w + ".terms[" + std::to_string(i) + "]";
    const Json& ex = at(terms[i], "exponents", tw);
    if (!ex.is_array()) throw PreconditionError(tw + ".exponents: expected an array");
    Exponent e;
    for (std::size_t k = 0; k < ex.size(); ++k) {
      if (!ex[k].is_number_integer())
        throw PreconditionError(tw + ".exponents[" + std::to_string(k) + "]: expected an integer");
      e.push_back(ex[k].get<int>());
    }
    m[e] += parse_decimal(at(terms[i], "coeff", tw), tw + ".coeff");
  }
  const bool stable = j.contains("constructively_stable") && j["constructively_stable"].is_boolean() &&
                      j["constructively_stable"].get<bool>();
  return MultiPGF(d, std::move(m), stable);
}

Json to_json(const SectorCheckReport& r) {
  return {{"pass", r.pass},
          {"guaranteed_angle", number(r.guaranteed_angle)},
          {"min_abs_arg", number(r.min_abs_arg)},
          {"nonzero_roots", r.nonzero_roots}};
}

SectorCheckReport sector_check_from_json(const Json& j) {
  SectorCheckReport r;
  const Json& p = at(j, "pass", "sector_check");
  if (!p.is_boolean()) throw PreconditionError("sector_check.pass: expected a boolean");
  r.pass = p.get<bool>();
  r.guaranteed_angle = num_at(j, "guaranteed_angle", "sector_check");
  r.min_abs_arg = num_at(j, "min_abs_arg", "sector_check");
  r.nonzero_roots = static_cast<int>(long_at(j, "nonzero_roots", "sector_check"));
  return r;
}

Json to_json(const DirectionReport& r) {
  return {{"v", r.v}, {"variance", number(r.variance)}, {"lattice_sigma", number(r.lattice_sigma)}, {"D", number(r.D)}};
}

DirectionReport direction_report_from_json(const Json& j) {
  DirectionReport r;
  const Json& v = at(j, "v", "direction");
  if (!v.is_array()) throw PreconditionError("direction.v: expected an array");
  for (const auto& x : v) r.v.push_back(x.get<int>());
  r.variance = num_at(j, "variance", "direction");
  r.lattice_sigma = num_at(j, "lattice_sigma", "direction");
  r.D = num_at(j, "D", "direction");
  return r;
}

}  // namespace pgfclt
