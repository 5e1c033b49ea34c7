#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "pgfclt/brownian_sim.hpp"
#include "pgfclt/clt_engine.hpp"
#include "pgfclt/constructions.hpp"
#include "pgfclt/multivariate.hpp"
#include "pgfclt/pgf_roots.hpp"

namespace pgfclt {

using Json = nlohmann::json;

// Shortest-exact decimal string ("%.17g"); non-finite values become "inf", "-inf", "nan".
std::string decimal_string(double x);
// Accepts a JSON number or a decimal string; `field` names the value in error messages.
double parse_decimal(const Json& j, const std::string& field);

// Finite doubles as JSON numbers, others as strings.
Json number(double x);

// Coefficient list given as a JSON array of numbers or decimal strings.
std::vector<double> parse_coefficients(const Json& j, const std::string& field = "coeffs");
std::vector<double> parse_coefficients(const std::string& text, const std::string& field = "coeffs");

Json to_json(const RootSet& rs);
RootSet root_set_from_json(const Json& j);
Json to_json(const RootGeometry& g);
RootGeometry root_geometry_from_json(const Json& j);

Json to_json(const ConstantBound& b);
ConstantBound constant_bound_from_json(const Json& j);
Json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const Json& j);

Json to_json(const DiscretePMF& p);
DiscretePMF pmf_from_json(const Json& j);

inline constexpr std::size_t kInlinePmfLimit = 100'000;

// The pmf is inlined up to kInlinePmfLimit atoms, otherwise a generator spec is written
// and reading it back rebuilds the construction.
Json to_json(const ConstructionResult& c);
ConstructionResult construction_from_json(const Json& j);

Json to_json(const ExitEstimate& e);
ExitEstimate exit_estimate_from_json(const Json& j);

Json to_json(const MultiPGF& f);
MultiPGF multi_pgf_from_json(const Json& j);

Json to_json(const SectorCheckReport& r);
SectorCheckReport sector_check_from_json(const Json& j);
Json to_json(const DirectionReport& r);
DirectionReport direction_report_from_json(const Json& j);

}  // namespace pgfclt
