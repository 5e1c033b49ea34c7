// pgfclt: command-line front end.
// Exit codes: 0 success, 1 bad input or precondition, 2 internal error.

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "pgfclt/brownian_sim.hpp"
#include "pgfclt/clt_engine.hpp"
#include "pgfclt/constructions.hpp"
#include "pgfclt/cumulant_engine.hpp"
#include "pgfclt/harmonic_verify.hpp"
#include "pgfclt/multivariate.hpp"
#include "pgfclt/random_pgf.hpp"
#include "pgfclt/serialize.hpp"

using namespace pgfclt;

namespace {

enum class Format { json, csv };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Output {
  Json json;
  Table table;
};

std::string csv_text(const Table& t) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    return s + '\n';
  };
  std::string out = line(t.header);
  for (const auto& r : t.rows) out += line(r);
  return out;
}

std::string cell(double x) { return decimal_string(x); }
std::string cell(long x) { return std::to_string(x); }
std::string cell(int x) { return std::to_string(x); }
std::string cell(bool x) { return x ? "true" : "false"; }

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("input: cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw PreconditionError("input: malformed JSON (" + std::string(e.what()) + ")");
  }
}

PGFPoly poly_of(std::vector<double> c) { return PGFPoly(DiscretePMF(std::move(c))); }

// A PGF instance is either a coefficient array or {"coeffs": [...]} or
// {"factors": [{"coeffs": [...], "power": m}, ...]}.
FactoredPGF pgf_from_json(const Json& j, const std::string& where) {
  if (j.is_array()) return FactoredPGF(poly_of(parse_coefficients(j, where)));
  if (!j.is_object()) throw PreconditionError(where + ": expected an array or object");
  if (j.contains("coeffs")) return FactoredPGF(poly_of(parse_coefficients(j["coeffs"], where + ".coeffs")));
  if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
    throw PreconditionError(where + ": needs \"coeffs\" or a nonempty \"factors\" array");
  FactoredPGF f;
  const Json& fs = j["factors"];
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const std::string fw = where + ".factors[" + std::to_string(i) + "]";
    if (!fs[i].is_object() || !fs[i].contains("coeffs")) throw PreconditionError(fw + ".coeffs: missing");
    long power = 1;
    if (fs[i].contains("power")) {
      if (!fs[i]["power"].is_number_integer()) throw PreconditionError(fw + ".power: expected an integer");
      power = fs[i]["power"].get<long>();
    }
    f.times(poly_of(parse_coefficients(fs[i]["coeffs"], fw + ".coeffs")), power);
  }
  return f;
}

// One instance from --coeffs, or one or many (sweep) from --input.
std::vector<FactoredPGF> pgf_instances(const std::string& coeffs, const std::string& input) {
  if (coeffs.empty() == input.empty()) throw PreconditionError("exactly one of --coeffs and --input is required");
  if (!coeffs.empty()) return {FactoredPGF(poly_of(parse_coefficients(coeffs, "coeffs")))};
  const Json j = read_json_file(input);
  if (j.is_object() && j.contains("instances")) {
    const Json& a = j["instances"];
    if (!a.is_array()) throw PreconditionError("instances: expected an array");
    std::vector<FactoredPGF> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(pgf_from_json(a[i], "instances[" + std::to_string(i) + "]"));
    return out;
  }
  return {pgf_from_json(j, "input")};
}

Output analyze(const std::vector<FactoredPGF>& pgfs) {
  Output o;
  o.table.header = {"degree", "sigma", "D", "delta_ball", "delta_sector", "log2_bound_ball", "log2_bound_sector",
                    "ratio_sector", "ratio_ball", "esseen_T", "esseen_value"};
  Json all = Json::array();
  for (const auto& f : pgfs) {
    const auto r = verify_normal_approx(f);
    all.push_back(to_json(r));
    o.table.rows.push_back({cell(r.degree), cell(r.sigma), cell(r.D), cell(r.delta_ball), cell(r.delta_sector),
                            cell(r.bound_ball.log2_value), cell(r.bound_sector.log2_value), cell(r.ratio_sector),
                            cell(r.ratio_ball), cell(r.esseen_T), cell(r.esseen_value)});
  }
  o.json = all.size() == 1 ? all[0] : all;
  return o;
}

Output roots(const std::vector<FactoredPGF>& pgfs) {
  Output o;
  o.table.header = {"instance", "re", "im", "multiplicity", "abs", "arg"};
  Json all = Json::array();
  for (std::size_t i = 0; i < pgfs.size(); ++i) {
    const auto rs = pgfs[i].roots();
    Json j = to_json(rs);
    j["geometry"] = to_json(root_geometry(rs));
    all.push_back(j);
    for (const auto& r : rs.roots)
      o.table.rows.push_back({cell(static_cast<long>(i)), cell(r.value.real()), cell(r.value.imag()),
                              cell(r.multiplicity), cell(std::abs(r.value)), cell(std::arg(r.value))});
  }
  o.json = all.size() == 1 ? all[0] : all;
  return o;
}

Output construction_output(const ConstructionResult& c) {
  Output o;
  const double D = kolmogorov_distance(c.pmf);
  o.json = to_json(c);
  o.json["D"] = number(D);
  o.table.header = {"family", "k", "support_size", "support_scale", "achieved_sigma", "achieved_delta", "lower_bound",
                    "D"};
  o.table.rows.push_back({c.family, cell(c.k), cell(static_cast<long>(c.pmf.size())), cell(c.support_scale),
                          cell(c.achieved_sigma), cell(c.achieved_delta), cell(c.lower_bound), cell(D)});
  return o;
}

Output exit_output(const ExitEstimate& e, double bound) {
  Output o;
  o.json = to_json(e);
  o.json["bound"] = number(bound);
  o.json["within_bound"] = e.p_hat <= bound + 3.0 * e.stderr_;
  o.table.header = {"p_hat", "stderr", "n_samples", "seed", "bound"};
  o.table.rows.push_back({cell(e.p_hat), cell(e.stderr_), cell(e.n_samples), std::to_string(e.seed), cell(bound)});
  return o;
}

std::vector<MultiPGF> multi_instances(const std::string& input) {
  const Json j = read_json_file(input);
  if (j.is_object() && j.contains("factors")) {
    const Json& fs = j["factors"];
    if (!fs.is_array() || fs.empty()) throw PreconditionError("factors: expected a nonempty array");
    std::vector<MultiPGF> out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      try {
        out.push_back(multi_pgf_from_json(fs[i]));
      } catch (const PreconditionError& e) {
        throw PreconditionError("factors[" + std::to_string(i) + "]: " + e.what());
      }
    }
    return out;
  }
  return {multi_pgf_from_json(j)};
}

Output project_cmd(const std::vector<MultiPGF>& parts, const std::vector<int>& v, int max_entry) {
  const int d = parts.front().dimension();
  for (const auto& p : parts)
    if (p.dimension() != d) throw PreconditionError("factors: dimensions differ");
  std::vector<std::vector<int>> dirs;
  if (!v.empty()) {
    if (static_cast<int>(v.size()) != d) throw PreconditionError("v: length must equal the dimension");
    dirs.push_back(v);
  } else {
    dirs = enumerate_directions(d, max_entry);
  }
  const auto cov = covariance_stats(parts);
  const auto reps = direction_reports(parts, dirs);
  const bool stable = std::all_of(parts.begin(), parts.end(), [](const MultiPGF& p) { return p.constructively_stable(); });

  Output o;
  Json A = Json::array();
  for (int i = 0; i < d; ++i) {
    Json row = Json::array();
    for (int k = 0; k < d; ++k) row.push_back(number(cov.A(i, k)));
    A.push_back(row);
  }
  o.json = {{"dimension", d}, {"covariance", A}, {"sigma2_max", number(cov.sigma2_max)}};
  o.table.header = {"v", "variance", "lattice_sigma", "D", "sector_pass", "min_abs_arg", "guaranteed_angle"};
  Json dj = Json::array();
  for (const auto& r : reps) {
    Json e = to_json(r);
    std::vector<std::string> row{join_ints(r.v), cell(r.variance), cell(r.lattice_sigma), cell(r.D)};
    if (stable) {
      // sector guarantee applies to the product, which is stable when every factor is
      MultiPGF prod = parts.front();
      for (std::size_t i = 1; i < parts.size(); ++i) prod = prod * parts[i];
      const auto sc = projection_sector_check(prod, r.v);
      e["sector_check"] = to_json(sc);
      row.insert(row.end(), {cell(sc.pass), cell(sc.min_abs_arg), cell(sc.guaranteed_angle)});
    } else {
      row.insert(row.end(), {"", "", ""});
    }
    dj.push_back(e);
    o.table.rows.push_back(row);
  }
  o.json["directions"] = dj;
  return o;
}

// Named invariant suites. Each returns (instances, failures, worst statistic).
struct SuiteResult {
  long instances = 0;
  long failures = 0;
  double statistic = 0.0;
  std::string statistic_name;
};

SuiteResult suite_cumulant_oracle(std::mt19937_64& rng, long count) {
  SuiteResult r{0, 0, 0.0, "max_relative_deviation"};
  for (long i = 0; i < count; ++i, ++r.instances) {
    const auto f = random_coefficient_pgf(1 + static_cast<int>(rng() % 30), rng);
    const auto a = cumulants_from_roots(find_roots(f), 16), b = cumulant_seq_from_pmf(f.pmf(), 16);
    bool ok = true;
    for (int j = 1; j <= 8; ++j) {
      const double rel = std::abs(a[j] - b[j]) / std::max(1.0, std::abs(b[j]));
      r.statistic = std::max(r.statistic, rel);
      ok = ok && rel <= 1e-8;
    }
    r.failures += !ok;
  }
  return r;
}

SuiteResult suite_esseen(std::mt19937_64& rng, long count) {
  SuiteResult r{0, 0, kInf, "min_bound_minus_D"};
  while (r.instances < count) {
    const auto f = random_coefficient_pgf(5 + static_cast<int>(rng() % 40), rng);
    const double sigma = moments(f.pmf()).sigma();
    if (sigma < 2.0) continue;
    ++r.instances;
    const double gap = esseen_bound(f, sigma) - kolmogorov_distance(f.pmf());
    r.statistic = std::min(r.statistic, gap);
    r.failures += !(gap >= 0.0);
  }
  return r;
}

SuiteResult suite_projection_sector(std::mt19937_64& rng, long count) {
  SuiteResult r{0, 0, kInf, "min_arg_margin"};
  for (long i = 0; i < count; ++i) {
    const int d = 1 + static_cast<int>(i % 3);
    const auto f = stable_product_generator(d, random_affine_forms(d, 2 + static_cast<int>(rng() % 7), rng()));
    for (const auto& v : enumerate_directions(d, 3)) {
      const auto rep = projection_sector_check(f, v);
      ++r.instances;
      if (rep.nonzero_roots > 0) r.statistic = std::min(r.statistic, rep.min_abs_arg - rep.guaranteed_angle);
      r.failures += !rep.pass;
    }
  }
  return r;
}

SuiteResult suite_planar(std::mt19937_64& rng, long count) {
  SuiteResult r{0, 0, 0.0, "violations"};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto disk = [&](Complex c, double rad) { return c + std::polar(rad * std::sqrt(u(rng)), 2.0 * kPi * u(rng)); };
  for (double eps : {0.01, 0.1, 0.4})
    for (long i = 0; i < count; ++i, ++r.instances) {
      const bool ok = planar::ball_to_polar(disk(1.0, eps), eps) && planar::half_ball_to_polar(disk(1.0, eps / 2), eps) &&
                      planar::polar_to_ball(std::polar(1.0 + eps * (2 * u(rng) - 1), eps * (2 * u(rng) - 1)), eps) &&
                      planar::exp_of_ball(disk(0.0, eps), eps);
      r.failures += !ok;
    }
  r.statistic = static_cast<double>(r.failures);
  return r;
}

SuiteResult suite_negcos() {
  SuiteResult r{0, 0, kInf, "min_margin"};
  for (int j = 3; j <= 50; ++j, ++r.instances) {
    const auto e = negcos_extrema(j);
    const double margin = std::min(-0.5 - e.min_val, e.max_val - 0.5);
    r.statistic = std::min(r.statistic, margin);
    r.failures += !(margin > 0.0);
  }
  return r;
}

Output verify(const std::string& suite, std::optional<std::uint64_t> seed, long count) {
  SuiteResult r;
  if (suite == "negcos") {
    r = suite_negcos();
  } else {
    if (!seed) throw PreconditionError("seed: required for suite \"" + suite + "\"");
    std::mt19937_64 rng(*seed);
    if (suite == "cumulant-oracle")
      r = suite_cumulant_oracle(rng, count);
    else if (suite == "esseen")
      r = suite_esseen(rng, count);
    else if (suite == "projection-sector")
      r = suite_projection_sector(rng, count);
    else if (suite == "planar")
      r = suite_planar(rng, count);
    else
      throw PreconditionError("suite: unknown suite \"" + suite + "\"");
  }
  Output o;
  o.json = {{"suite", suite},
            {"pass", r.failures == 0},
            {"instances", r.instances},
            {"failures", r.failures},
            {r.statistic_name, number(r.statistic)}};
  if (seed) o.json["seed"] = *seed;
  o.table.header = {"suite", "pass", "instances", "failures", r.statistic_name};
  o.table.rows.push_back({suite, cell(r.failures == 0), cell(r.instances), cell(r.failures), cell(r.statistic)});
  return o;
}

void apply_worker_env() {
  const char* w = std::getenv("PGFCLT_WORKERS");
  if (!w || !*w) return;
  char* end = nullptr;
  const long n = std::strtol(w, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw PreconditionError("PGFCLT_WORKERS: expected a positive integer");
  omp_set_num_threads(static_cast<int>(n));
}

void emit(const Output& o, Format fmt, const std::string& out_path) {
  const std::string text = fmt == Format::json ? o.json.dump(2) + "\n" : csv_text(o.table);
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw PreconditionError("out: cannot write \"" + out_path + "\"");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal approximation diagnostics for discrete laws via their generating functions"};
  app.require_subcommand(1);
  app.fallthrough();  // --format and --out may follow the subcommand

  Format fmt = Format::json;
  std::string out_path;
  const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}};
  app.add_option("--format", fmt, "Output format")->transform(CLI::CheckedTransformer(formats))->capture_default_str();
  app.add_option("--out", out_path, "Write output to this file instead of stdout");

  std::string coeffs, input;
  std::optional<std::uint64_t> seed;
  std::function<Output()> action;

  auto* an = app.add_subcommand("analyze", "Kolmogorov distance, root geometry, bounds and Esseen value for a PGF");
  an->add_option("--coeffs", coeffs, "Coefficients as a JSON array of numbers or decimal strings");
  an->add_option("--input", input, "JSON file: coefficients, factors, or {\"instances\": [...]}");
  an->callback([&] { action = [&] { return analyze(pgf_instances(coeffs, input)); }; });

  auto* ro = app.add_subcommand("roots", "Roots with multiplicities and their geometry");
  ro->add_option("--coeffs", coeffs, "Coefficients as a JSON array");
  ro->add_option("--input", input, "JSON input file");
  ro->callback([&] { action = [&] { return roots(pgf_instances(coeffs, input)); }; });

  auto* co = app.add_subcommand("construct", "Sharpness constructions");
  co->require_subcommand(1);
  double c_sigma = 0, c_delta = 0, c_kappa = 0, c_ck = 100.0, c_tol = 1e-12, c_radius = 1.0;
  long c_n = 0;
  auto* cs = co->add_subcommand("sector", "Sector-sharp family");
  cs->add_option("--sigma", c_sigma)->required();
  cs->add_option("--delta", c_delta)->required();
  cs->callback([&] { action = [&] { return construction_output(construct_sector_sharp(c_sigma, c_delta)); }; });
  auto* cb = co->add_subcommand("ball", "Ball-sharp Bernoulli family");
  cb->add_option("--n", c_n)->required();
  cb->add_option("--delta", c_delta)->required();
  cb->add_option("--sigma", c_sigma)->required();
  cb->add_option("--ck", c_ck, "Constant in k = floor(log n/(ck delta))")->capture_default_str();
  cb->callback([&] { action = [&] { return construction_output(construct_ball_sharp(c_n, c_delta, c_sigma, c_ck)); }; });
  auto* cp = co->add_subcommand("poisson", "Scaled Poisson family");
  cp->add_option("--sigma", c_sigma)->required();
  cp->add_option("--kappa", c_kappa)->required();
  cp->add_option("--tail-tol", c_tol)->capture_default_str();
  cp->add_option("--eval-radius", c_radius)->capture_default_str();
  cp->callback([&] { action = [&] { return construction_output(poisson_scaled(c_sigma, c_kappa, c_tol, c_radius)); }; });

  auto* br = app.add_subcommand("brownian", "Monte Carlo exit probabilities");
  br->require_subcommand(1);
  double b_half = 1.0, b_delta = 1.0, b_logRr = 1.0, b_eps = 0.0;
  Complex rect_start = 0.0, sector_start = 1.0;
  long samples = 100000;
  std::string route = "direct";
  auto stochastic = [&](CLI::App* s, Complex& start) {
    s->add_option("--seed", seed, "RNG seed (required)")->required();
    s->add_option("--samples", samples)->capture_default_str();
    s->add_option("--epsilon-abs", b_eps, "Absorption shell; 0 picks 1e-5 of the diameter");
    s->add_option("--start", start, "Start point as re,im")->delimiter(',');
  };
  auto* bre = br->add_subcommand("rectangle", "Exit through the ends Re z = +-b of {|Re z| < b, |Im z| < delta}");
  bre->add_option("--b", b_half)->required();
  bre->add_option("--delta", b_delta)->required();
  stochastic(bre, rect_start);
  bre->callback([&] {
    action = [&] {
      const WosConfig cfg{b_eps, 1000000, *seed};
      const auto e = estimate_exit_rectangle({b_half, b_delta}, rect_start, samples, cfg);
      return exit_output(e, rectangle_exit_bound(b_half - std::abs(rect_start.real()), b_delta));
    };
  });
  auto* bse = br->add_subcommand("sector", "Exit through the ends of the sector e^{-logRr} <= |z| <= e^{logRr}");
  bse->add_option("--delta", b_delta)->required();
  bse->add_option("--logRr", b_logRr, "log of outer radius over start radius")->required();
  bse->add_option("--route", route)->check(CLI::IsMember({"direct", "conformal"}))->capture_default_str();
  stochastic(bse, sector_start);
  bse->callback([&] {
    action = [&] {
      const WosConfig cfg{b_eps, 1000000, *seed};
      const Complex start = sector_start;
      const double R = std::exp(b_logRr);
      const auto e = estimate_exit_sector({b_delta, R}, start, samples, cfg,
                                          route == "direct" ? SectorRoute::direct : SectorRoute::conformal);
      return exit_output(e, sector_exit_bound(std::abs(start), R, b_delta));
    };
  });

  auto* pr = app.add_subcommand("project", "Projections of a multivariate law along integer directions");
  std::vector<int> v;
  int max_entry = 3;
  pr->add_option("--input", input, "JSON file: a multivariate PGF or {\"factors\": [...]} of independent ones")
      ->required();
  pr->add_option("--v", v, "Direction; all directions up to --max-entry when omitted")->delimiter(',');
  pr->add_option("--max-entry", max_entry)->capture_default_str();
  pr->callback([&] { action = [&] { return project_cmd(multi_instances(input), v, max_entry); }; });

  auto* ve = app.add_subcommand("verify", "Run a named invariant suite");
  std::string suite;
  long count = 100;
  ve->add_option("--suite", suite, "cumulant-oracle | esseen | projection-sector | planar | negcos")->required();
  ve->add_option("--seed", seed, "RNG seed (required for randomized suites)");
  ve->add_option("--count", count)->capture_default_str();
  ve->callback([&] { action = [&] { return verify(suite, seed, count); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    apply_worker_env();
    emit(action(), fmt, out_path);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
