#pragma once

#include <cstdint>
#include <functional>

#include "pgfclt/common.hpp"

namespace pgfclt {

// Q = {|Re z| < b, |Im z| < delta}; the ends are the vertical sides Re z = +-b.
struct RectangleSpec {
  double b = 1.0;
  double delta = 1.0;
};

// Truncated sector {1/R <= |z| <= R, |arg z| <= delta}; ends are the arcs |z| = 1/R, R.
struct TruncatedSectorSpec {
  double delta = kPi / 4;
  double R = 2.0;
};

struct WosConfig {
  double epsilon_abs = 0.0;  // 0 selects 1e-5 times the domain diameter
  long max_steps = 1000000;
  std::uint64_t seed = 0;
};

struct ExitEstimate {
  double p_hat = 0.0;
  double stderr_ = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

// Probability that Brownian motion from `start` leaves Q through an end.
ExitEstimate estimate_exit_rectangle(const RectangleSpec& q, Complex start, long n, const WosConfig& cfg,
                                     Exec exec = Exec::parallel);

enum class SectorRoute { direct, conformal };

ExitEstimate estimate_exit_sector(const TruncatedSectorSpec& s, Complex start, long n, const WosConfig& cfg,
                                  SectorRoute route = SectorRoute::direct, Exec exec = Exec::parallel);

struct MeanValueReport {
  double mc_mean = 0.0;
  double u_start = 0.0;
  double stderr_ = 0.0;
  double z_score = 0.0;
  bool pass = false;  // |z| <= 4
};

// Compares u(start) with the Monte Carlo mean of u at the exit point of B(center, radius).
MeanValueReport mean_value_check(const std::function<double(Complex)>& u, Complex center, double radius,
                                 Complex start, long n, const WosConfig& cfg, Exec exec = Exec::parallel);

// Closed-form bounds used by the checks.
double rectangle_exit_bound(double distance_to_end, double delta);        // exp(-log(4/3) floor(d/delta))
double sector_exit_bound(double r, double R, double delta);               // (4/3)(r/R)^{log(4/3)/delta}

}  // namespace pgfclt
