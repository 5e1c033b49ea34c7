#include "pgfclt/multivariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "pgfclt/dist_core.hpp"

namespace pgfclt {

namespace {

void check_direction(std::span<const int> v, int d) {
  require(static_cast<int>(v.size()) == d, "v: length must equal the dimension " + std::to_string(d));
  bool nonzero = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i] >= 0, "v[" + std::to_string(i) + "]: must be >= 0");
    nonzero = nonzero || v[i] > 0;
  }
  require(nonzero, "v: must not be the zero vector");
}

std::vector<double> projected_coeffs(const MultiPGF& f, std::span<const int> v) {
  check_direction(v, f.dimension());
  std::vector<double> c;
  for (const auto& [e, p] : f.terms()) {
    long deg = 0;
    for (std::size_t i = 0; i < e.size(); ++i) deg += static_cast<long>(e[i]) * v[i];
    if (static_cast<std::size_t>(deg) >= c.size()) c.resize(static_cast<std::size_t>(deg) + 1, 0.0);
    c[static_cast<std::size_t>(deg)] += p;
  }
  return c;
}

}  // namespace

MultiPGF::MultiPGF(int dimension, std::map<Exponent, double> terms, bool constructively_stable)
    : d_(dimension), terms_(std::move(terms)), stable_(constructively_stable) {
  require(d_ >= 1, "dimension: must be >= 1");
  require(!terms_.empty(), "terms: must not be empty");
  CompensatedSum total;
  for (const auto& [e, p] : terms_) {
    require(static_cast<int>(e.size()) == d_, "exponents: length must equal the dimension");
    for (int x : e) require(x >= 0, "exponents: entries must be >= 0");
    require(std::isfinite(p) && p >= 0.0, "coeff: must be finite and >= 0");
    total += p;
  }
  require(std::abs(total.value() - 1.0) <= 1e-12, "coeff: coefficients must sum to 1");
}

MultiPGF MultiPGF::from_weights(int dimension, std::map<Exponent, double> weights, bool constructively_stable) {
  CompensatedSum total;
  for (const auto& [e, p] : weights) {
    require(std::isfinite(p) && p >= 0.0, "coeff: must be finite and >= 0");
    total += p;
  }
  require(total.value() > 0.0, "coeff: total mass must be positive");
  for (auto& [e, p] : weights) p /= total.value();
  for (auto it = weights.begin(); it != weights.end();) it = it->second == 0.0 ? weights.erase(it) : std::next(it);
  // renormalize once more so the strict constructor sees a sum within rounding of 1
  CompensatedSum again;
  for (const auto& [e, p] : weights) again += p;
  for (auto& [e, p] : weights) p /= again.value();
  return MultiPGF(dimension, std::move(weights), constructively_stable);
}

double MultiPGF::operator()(std::span<const double> z) const {
  require(static_cast<int>(z.size()) == d_, "z: length must equal the dimension");
  CompensatedSum acc;
  for (const auto& [e, p] : terms_) {
    double t = p;
    for (int i = 0; i < d_; ++i) t *= std::pow(z[i], e[i]);
    acc += t;
  }
  return acc.value();
}

MultiPGF MultiPGF::operator*(const MultiPGF& other) const {
  require(d_ == other.d_, "dimension: factors must have equal dimension");
  std::map<Exponent, double> out;
  for (const auto& [e1, p1] : terms_)
    for (const auto& [e2, p2] : other.terms_) {
      Exponent e(e1);
      for (int i = 0; i < d_; ++i) e[i] += e2[i];
      out[e] += p1 * p2;
    }
  return from_weights(d_, std::move(out), stable_ && other.stable_);
}

MultiPGF stable_product_generator(int dimension, std::span<const AffineForm> forms) {
  require(dimension >= 1, "dimension: must be >= 1");
  MultiPGF acc(dimension, {{Exponent(static_cast<std::size_t>(dimension), 0), 1.0}}, true);
  for (std::size_t f = 0; f < forms.size(); ++f) {
    const auto& form = forms[f];
    const std::string tag = "forms[" + std::to_string(f) + "]";
    require(static_cast<int>(form.linear.size()) == dimension, tag + ".linear: length must equal the dimension");
    require(form.constant >= 0.0, tag + ".constant: must be >= 0");
    std::map<Exponent, double> w;
    if (form.constant > 0.0) w[Exponent(static_cast<std::size_t>(dimension), 0)] = form.constant;
    bool any = false;
    for (int i = 0; i < dimension; ++i) {
      require(form.linear[i] >= 0.0, tag + ".linear: coefficients must be >= 0");
      if (form.linear[i] > 0.0) {
        Exponent e(static_cast<std::size_t>(dimension), 0);
        e[i] = 1;
        w[e] = form.linear[i];
        any = true;
      }
    }
    require(any, tag + ": linear part is identically zero");
    acc = acc * MultiPGF::from_weights(dimension, std::move(w), true);
  }
  return acc;
}

std::vector<AffineForm> random_affine_forms(int dimension, int count, std::uint64_t seed) {
  require(dimension >= 1 && count >= 0, "random forms: need dimension >= 1 and count >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> pick(0, dimension - 1);
  std::vector<AffineForm> out;
  for (int f = 0; f < count; ++f) {
    AffineForm form;
    form.constant = coin(rng) ? unit(rng) : 0.0;
    form.linear.assign(static_cast<std::size_t>(dimension), 0.0);
    for (auto& c : form.linear)
      if (coin(rng)) c = 0.05 + unit(rng);
    form.linear[static_cast<std::size_t>(pick(rng))] = 0.05 + unit(rng);
    out.push_back(std::move(form));
  }
  return out;
}

PGFPoly project(const MultiPGF& f, std::span<const int> v) { return PGFPoly::normalize(projected_coeffs(f, v)); }

PGFPoly project(std::span<const MultiPGF> independent, std::span<const int> v) {
  require(!independent.empty(), "independent: need at least one factor");
  DiscretePMF acc = DiscretePMF::point_mass();
  for (const auto& f : independent) acc = convolve(acc, DiscretePMF::from_weights(projected_coeffs(f, v)));
  return PGFPoly(acc);
}

CovStats covariance_stats(const MultiPGF& f) {
  const int d = f.dimension();
  CovStats s;
  s.mu = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [e, p] : f.terms())
    for (int i = 0; i < d; ++i) {
      s.mu(i) += p * e[i];
      for (int j = 0; j < d; ++j) second(i, j) += p * e[i] * e[j];
    }
  // centered second moments, summed directly to avoid cancellation
  s.A = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [e, p] : f.terms())
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s.A(i, j) += p * (e[i] - s.mu(i)) * (e[j] - s.mu(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.A);
  s.sigma2_max = eig.eigenvalues().maxCoeff();
  s.min_eigenvalue = eig.eigenvalues().minCoeff();
  return s;
}

CovStats covariance_stats(std::span<const MultiPGF> independent) {
  require(!independent.empty(), "independent: need at least one factor");
  const int d = independent.front().dimension();
  CovStats s;
  s.mu = Eigen::VectorXd::Zero(d);
  s.A = Eigen::MatrixXd::Zero(d, d);
  for (const auto& f : independent) {
    require(f.dimension() == d, "independent: factors must have equal dimension");
    const auto part = covariance_stats(f);
    s.mu += part.mu;
    s.A += part.A;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.A);
  s.sigma2_max = eig.eigenvalues().maxCoeff();
  s.min_eigenvalue = eig.eigenvalues().minCoeff();
  return s;
}

double projected_variance(const CovStats& s, std::span<const int> v) {
  require(static_cast<long>(v.size()) == s.A.rows(), "v: length must equal the dimension");
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = v[i];
  return x.dot(s.A * x);
}

SectorCheckReport projection_sector_check(const MultiPGF& f, std::span<const int> v, double tol) {
  require(f.constructively_stable(), "mpgf: must be tagged constructively stable");
  const PGFPoly g = project(f, v);
  SectorCheckReport rep;
  rep.guaranteed_angle = kPi / *std::max_element(v.begin(), v.end());
  if (g.degree() == 0) return rep;
  for (const auto& r : find_roots(g).roots) {
    if (r.value == 0.0) continue;
    rep.nonzero_roots += r.multiplicity;
    rep.min_abs_arg = std::min(rep.min_abs_arg, std::abs(std::arg(r.value)));
  }
  rep.pass = rep.nonzero_roots == 0 || rep.min_abs_arg >= rep.guaranteed_angle - tol;
  return rep;
}

std::vector<std::vector<int>> enumerate_directions(int dimension, int max_entry) {
  require(dimension >= 1 && max_entry >= 1, "directions: need dimension >= 1 and max_entry >= 1");
  std::vector<std::vector<int>> out;
  std::vector<int> v(static_cast<std::size_t>(dimension), 0);
  for (;;) {
    int i = dimension - 1;
    while (i >= 0 && v[i] == max_entry) v[i--] = 0;
    if (i < 0) break;
    ++v[i];
    out.push_back(v);
  }
  return out;
}

std::vector<DirectionReport> direction_reports(std::span<const MultiPGF> independent,
                                               const std::vector<std::vector<int>>& directions, Exec exec) {
  const CovStats cov = covariance_stats(independent);
  std::vector<DirectionReport> out(directions.size());
  auto one = [&](std::size_t i) {
    const auto& v = directions[i];
    DirectionReport r;
    r.v = v;
    r.variance = projected_variance(cov, v);
    int g = 0;
    for (int x : v) g = std::gcd(g, x);
    r.lattice_sigma = std::sqrt(std::max(0.0, r.variance)) / g;
    r.D = r.variance > 1e-12 ? kolmogorov_distance(project(independent, v).pmf(), Exec::serial)
                             : std::numeric_limits<double>::quiet_NaN();
    out[i] = std::move(r);
  };
  const long n = static_cast<long>(directions.size());
  if (exec == Exec::parallel) {
    bool failed = false;
    std::string msg;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      try {
        one(static_cast<std::size_t>(i));
      } catch (const std::exception& e) {
#pragma omp critical
        {
          failed = true;
          msg = e.what();
        }
      }
    }
    if (failed) throw std::runtime_error(msg);
  } else {
    for (long i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace pgfclt
