#pragma once

#include <vector>

#include "pgfclt/common.hpp"
#include "pgfclt/dist_core.hpp"

namespace pgfclt {

// Nonnegative coefficients summing to 1 with a positive leading coefficient.
class PGFPoly {
 public:
  // Entries >= -1e-15 are clamped to zero; anything more negative is rejected.
  static PGFPoly normalize(std::vector<double> raw);
  explicit PGFPoly(const DiscretePMF& p);

  const std::vector<double>& coeffs() const noexcept { return c_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  Complex operator()(Complex z) const;
  DiscretePMF pmf() const { return DiscretePMF::from_weights(c_); }
  double mean() const;

 private:
  PGFPoly() = default;
  std::vector<double> c_;
};

struct Root {
  Complex value;
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Root> roots;
  double c_X = 0.0;  // constant making the root form vanish at z = 1
  int N_X = 0;       // roots (with multiplicity) strictly inside the unit disk
  int degree() const;
};

struct FindRootsOptions {
  double backward_tol = 1e-10;  // relative backward error accepted after polishing
  double cluster_tol = 1e-6;
  int max_polish = 80;
};

RootSet find_roots(const PGFPoly& f, const FindRootsOptions& opt = {});

// c_X, N_X recomputed from the root list.
void finish_root_set(RootSet& rs);

struct RootGeometry {
  double delta_ball = kInf;   // min |zeta - 1|
  double delta_sector = kPi;  // min |arg zeta| over nonzero roots
};

RootGeometry root_geometry(const RootSet& rs);

// log|f(z)|, optionally minus mu log|z|. Returns -inf at a root. Falls back to the
// root product when |f(z)| underflows and roots are supplied.
double log_potential(const PGFPoly& f, Complex z, bool subtract_mean = false,
                     const RootSet* roots = nullptr);

// The potential rebuilt from roots: sum of log|1 - zeta/z| inside, log|1 - z/zeta|
// outside, plus c_X + N_X log|z|.
double log_potential_root_form(const RootSet& rs, Complex z);

// Coefficients of prod (z - zeta)^m, scaled to sum to 1.
std::vector<double> poly_from_roots(const RootSet& rs);

// log|p(z)| for a real coefficient vector, using the reversed polynomial when |z| > 1.
double log_abs_poly(std::span<const double> c, Complex z);

// Product of PGF factors raised to integer powers. Used when a law is a high power of a
// small factor: the roots come from the factor, never from the expanded polynomial.
class FactoredPGF {
 public:
  struct Factor {
    PGFPoly poly;
    long power = 1;
  };

  FactoredPGF() = default;
  explicit FactoredPGF(PGFPoly f, long power = 1);
  FactoredPGF& times(PGFPoly f, long power = 1);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  DiscretePMF pmf() const;
  PGFPoly expanded() const { return PGFPoly(pmf()); }
  RootSet roots(const FindRootsOptions& opt = {}) const;
  Complex operator()(Complex z) const;
  double log_potential(Complex z) const;
  long degree() const;

 private:
  std::vector<Factor> factors_;
};

}  // namespace pgfclt
