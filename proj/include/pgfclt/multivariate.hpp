#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pgfclt/common.hpp"
#include "pgfclt/pgf_roots.hpp"

namespace pgfclt {

using Exponent = std::vector<int>;

// Sparse PGF in d variables; terms are kept in lexicographic exponent order.
class MultiPGF {
 public:
  // Coefficients must be >= 0 and sum to 1 within 1e-12.
  MultiPGF(int dimension, std::map<Exponent, double> terms, bool constructively_stable = false);
  static MultiPGF from_weights(int dimension, std::map<Exponent, double> weights,
                               bool constructively_stable = false);

  int dimension() const noexcept { return d_; }
  const std::map<Exponent, double>& terms() const noexcept { return terms_; }
  bool constructively_stable() const noexcept { return stable_; }

  double operator()(std::span<const double> z) const;
  // Law of the sum of independent vectors; stable when both factors are.
  MultiPGF operator*(const MultiPGF& other) const;

 private:
  int d_;
  std::map<Exponent, double> terms_;
  bool stable_;
};

// c0 + sum_i c_i z_i with every c >= 0 and some c_i > 0 (i >= 1).
struct AffineForm {
  double constant = 0.0;
  std::vector<double> linear;
};

// Normalized product of the forms, tagged constructively stable.
MultiPGF stable_product_generator(int dimension, std::span<const AffineForm> forms);
std::vector<AffineForm> random_affine_forms(int dimension, int count, std::uint64_t seed);

// f_v(z) = f(z^{v_1}, ..., z^{v_d})
PGFPoly project(const MultiPGF& f, std::span<const int> v);
// Projection of a product of independent factors, without expanding the product.
PGFPoly project(std::span<const MultiPGF> independent, std::span<const int> v);

struct CovStats {
  Eigen::VectorXd mu;
  Eigen::MatrixXd A;
  double sigma2_max = 0.0;   // largest eigenvalue of A
  double min_eigenvalue = 0.0;
};

CovStats covariance_stats(const MultiPGF& f);
CovStats covariance_stats(std::span<const MultiPGF> independent);

// v^T A v
double projected_variance(const CovStats& s, std::span<const int> v);

struct SectorCheckReport {
  bool pass = true;
  double guaranteed_angle = 0.0;  // pi / max_i v_i
  double min_abs_arg = kPi;       // over nonzero roots
  int nonzero_roots = 0;
};

SectorCheckReport projection_sector_check(const MultiPGF& f, std::span<const int> v, double tol = 1e-6);

// Every v in {0..max_entry}^d except 0, in lexicographic order.
std::vector<std::vector<int>> enumerate_directions(int dimension, int max_entry = 3);

struct DirectionReport {
  std::vector<int> v;
  double variance = 0.0;        // v^T A v
  double lattice_sigma = 0.0;   // sqrt(v^T A v) / gcd(v)
  double D = 0.0;               // Kolmogorov distance of the standardized projection
};

std::vector<DirectionReport> direction_reports(std::span<const MultiPGF> independent,
                                               const std::vector<std::vector<int>>& directions,
                                               Exec exec = Exec::parallel);

}  // namespace pgfclt
