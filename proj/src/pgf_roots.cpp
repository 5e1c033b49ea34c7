#include "pgfclt/pgf_roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace pgfclt {

namespace {

// Newton ratio p(z)/p'(z) and relative residual |p(z)| / sum |c_k||z|^k, evaluated on
// the reversed polynomial outside the unit disk.
struct NewtonEval {
  Complex ratio;
  double residual;
};

NewtonEval newton_eval(std::span<const double> c, Complex z) {
  const int d = static_cast<int>(c.size()) - 1;
  if (std::abs(z) <= 1.0) {
    Complex p = c[d], dp = 0.0;
    double scale = std::abs(c[d]);
    const double az = std::abs(z);
    for (int k = d - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + c[k];
      scale = scale * az + std::abs(c[k]);
    }
    const Complex ratio = (dp == 0.0) ? Complex(0.0) : p / dp;
    return {ratio, std::abs(p) / scale};
  }
  const Complex w = 1.0 / z;
  const double aw = std::abs(w);
  Complex r = c[0], dr = 0.0;
  double scale = std::abs(c[0]);
  for (int k = 1; k <= d; ++k) {
    dr = dr * w + r;
    r = r * w + c[k];
    scale = scale * aw + std::abs(c[k]);
  }
  // p(z) = z^d r(w), p'/p = (d - w r'(w)/r(w)) / z
  const Complex denom = static_cast<double>(d) * r - w * dr;
  const Complex ratio = (denom == 0.0) ? Complex(0.0) : z * r / denom;
  return {ratio, std::abs(r) / scale};
}

void balance(Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  constexpr double radix = 2.0;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double col = m.col(i).lpNorm<1>() - std::abs(m(i, i));
      const double row = m.row(i).lpNorm<1>() - std::abs(m(i, i));
      if (col == 0.0 || row == 0.0) continue;
      double g = row / radix, f = 1.0;
      double cnorm = col;
      const double s = col + row;
      while (cnorm < g) {
        f *= radix;
        cnorm *= radix * radix;
      }
      g = row * radix;
      while (cnorm > g) {
        f /= radix;
        cnorm /= radix * radix;
      }
      if ((col * f + row / f) < 0.95 * s) {
        converged = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

std::vector<Complex> companion_eigenvalues(std::span<const double> c) {
  const int d = static_cast<int>(c.size()) - 1;
  // z = scale * y puts the roots near the unit circle.
  const double scale = std::pow(std::abs(c[0]) / std::abs(c[d]), 1.0 / d);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  double pw = 1.0;
  std::vector<double> q(c.size());
  for (int k = 0; k <= d; ++k) {
    q[k] = c[k] * pw;
    pw *= scale;
  }
  for (int k = 0; k < d; ++k) m(0, k) = -q[d - 1 - k] / q[d];
  for (int k = 1; k < d; ++k) m(k, k - 1) = 1.0;
  balance(m);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw ConvergenceError("companion eigen-solve failed", 0.0);
  std::vector<Complex> out;
  out.reserve(d);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(scale * es.eigenvalues()[i]);
  return out;
}

// Aberth steps with a residual safeguard; works on the full root list so that the
// conjugate symmetry is preserved by re-imposing it afterwards.
void polish(std::span<const double> c, std::vector<Complex>& z, int max_iter) {
  const std::size_t n = z.size();
  std::vector<double> res(n);
  for (std::size_t i = 0; i < n; ++i) res[i] = newton_eval(c, z[i]).residual;
  for (int it = 0; it < max_iter; ++it) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ev = newton_eval(c, z[i]);
      if (ev.ratio == 0.0 || ev.residual == 0.0) continue;
      Complex repel = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const Complex diff = z[i] - z[j];
        if (std::abs(diff) > 1e-300) repel += 1.0 / diff;
      }
      Complex step = ev.ratio / (1.0 - ev.ratio * repel);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ev.ratio;
      const Complex cand = z[i] - step;
      const double r = newton_eval(c, cand).residual;
      if (r < res[i]) {
        if (std::abs(step) > 1e-16 * std::abs(z[i])) moved = true;
        z[i] = cand;
        res[i] = r;
      }
    }
    if (!moved) break;
  }
}

}  // namespace

PGFPoly PGFPoly::normalize(std::vector<double> raw) {
  require(!raw.empty(), "coeffs: empty");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) throw NotAPgfError("coeffs[" + std::to_string(i) + "]: not finite");
    if (raw[i] < -1e-15) throw NotAPgfError("coeffs[" + std::to_string(i) + "]: negative coefficient");
    if (raw[i] < 0.0) raw[i] = 0.0;
  }
  while (raw.size() > 1 && raw.back() == 0.0) raw.pop_back();
  const double total = compensated_sum(raw);
  if (!(total > 0.0)) throw NotAPgfError("coeffs: zero polynomial");
  for (double& x : raw) x /= total;
  PGFPoly p;
  p.c_ = std::move(raw);
  return p;
}

PGFPoly::PGFPoly(const DiscretePMF& p) {
  c_ = p.expanded();
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

Complex PGFPoly::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double PGFPoly::mean() const {
  CompensatedSum s;
  for (std::size_t i = 1; i < c_.size(); ++i) s += static_cast<double>(i) * c_[i];
  return s.value();
}

int RootSet::degree() const {
  int d = 0;
  for (const auto& r : roots) d += r.multiplicity;
  return d;
}

void finish_root_set(RootSet& rs) {
  CompensatedSum cx;
  int inside = 0;
  for (const auto& r : rs.roots) {
    const double a = std::abs(r.value);
    if (a < 1.0) {
      inside += r.multiplicity;
      cx += -r.multiplicity * std::log(std::abs(1.0 - r.value));
    } else {
      cx += -r.multiplicity * std::log(std::abs(1.0 - 1.0 / r.value));
    }
  }
  rs.c_X = cx.value();
  rs.N_X = inside;
}

RootSet find_roots(const PGFPoly& f, const FindRootsOptions& opt) {
  const auto& c = f.coeffs();
  RootSet rs;
  std::size_t zeros = 0;
  while (zeros < c.size() && c[zeros] == 0.0) ++zeros;
  if (zeros > 0) rs.roots.push_back({Complex(0.0), static_cast<int>(zeros)});
  std::span<const double> q(c.data() + zeros, c.size() - zeros);
  const int d = static_cast<int>(q.size()) - 1;

  std::vector<Complex> z;
  if (d == 1) {
    z.push_back(-q[0] / q[1]);
  } else if (d >= 2) {
    auto eig = companion_eigenvalues(q);
    // Keep reals and the upper half; the lower half is regenerated by conjugation.
    std::vector<Complex> upper, real;
    for (const auto& e : eig) {
      const double tol = 1e-8 * (1.0 + std::abs(e));
      if (std::abs(e.imag()) <= tol)
        real.emplace_back(e.real(), 0.0);
      else if (e.imag() > 0)
        upper.push_back(e);
    }
    if (real.size() + 2 * upper.size() != eig.size()) {
      z = eig;  // unpaired output; polish everything as is
      polish(q, z, opt.max_polish);
    } else {
      for (const auto& u : upper) {
        z.push_back(u);
        z.push_back(std::conj(u));
      }
      z.insert(z.end(), real.begin(), real.end());
      polish(q, z, opt.max_polish);
      // re-impose exact symmetry and realness
      for (std::size_t i = 0; i < 2 * upper.size(); i += 2) {
        Complex a = z[i];
        if (a.imag() < 0) a = std::conj(a);
        Complex b = std::conj(z[i + 1]);
        if (b.imag() < 0) b = std::conj(b);
        const Complex m = std::abs(newton_eval(q, a).residual) <= std::abs(newton_eval(q, b).residual) ? a : b;
        z[i] = m;
        z[i + 1] = std::conj(m);
      }
      for (std::size_t i = 2 * upper.size(); i < z.size(); ++i) z[i] = Complex(z[i].real(), 0.0);
    }
  }

  double worst = 0.0;
  for (const auto& r : z) worst = std::max(worst, newton_eval(q, r).residual);
  if (!(worst <= opt.backward_tol))
    throw ConvergenceError("find_roots: backward error " + std::to_string(worst) + " above tolerance", worst);

  // Single-linkage clustering into multiple roots.
  std::vector<int> parent(z.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) <= opt.cluster_tol * std::max(1.0, std::abs(z[i])))
        parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
  std::vector<Complex> sum(z.size(), 0.0);
  std::vector<int> count(z.size(), 0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const int r = find(static_cast<int>(i));
    sum[r] += z[i];
    ++count[r];
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (count[i] == 0) continue;
    Complex v = sum[i] / static_cast<double>(count[i]);
    if (std::abs(v.imag()) <= 1e-8 * (1.0 + std::abs(v))) v = Complex(v.real(), 0.0);
    rs.roots.push_back({v, count[i]});
  }
  std::sort(rs.roots.begin(), rs.roots.end(), [](const Root& a, const Root& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  finish_root_set(rs);
  return rs;
}

RootGeometry root_geometry(const RootSet& rs) {
  RootGeometry g;
  for (const auto& r : rs.roots) {
    g.delta_ball = std::min(g.delta_ball, std::abs(r.value - 1.0));
    if (r.value != 0.0) g.delta_sector = std::min(g.delta_sector, std::abs(std::arg(r.value)));
  }
  return g;
}

double log_abs_poly(std::span<const double> c, Complex z) {
  const int d = static_cast<int>(c.size()) - 1;
  const double az = std::abs(z);
  if (az <= 1.0) {
    Complex acc = 0.0;
    for (int k = d; k >= 0; --k) acc = acc * z + c[k];
    const double a = std::abs(acc);
    return a == 0.0 ? -kInf : std::log(a);
  }
  const Complex w = 1.0 / z;
  Complex acc = 0.0;
  for (int k = 0; k <= d; ++k) acc = acc * w + c[k];
  const double a = std::abs(acc);
  return a == 0.0 ? -kInf : d * std::log(az) + std::log(a);
}

double log_potential_root_form(const RootSet& rs, Complex z) {
  const double az = std::abs(z);
  CompensatedSum s;
  s += rs.c_X;
  for (const auto& r : rs.roots) {
    const double term = std::abs(r.value) < 1.0 ? std::log(std::abs(1.0 - r.value / z))
                                                : std::log(std::abs(1.0 - z / r.value));
    if (std::isinf(term)) return term;
    s += r.multiplicity * term;
  }
  if (rs.N_X > 0) {
    if (az == 0.0) return -kInf;
    s += rs.N_X * std::log(az);
  }
  return s.value();
}

double log_potential(const PGFPoly& f, Complex z, bool subtract_mean, const RootSet* roots) {
  if (subtract_mean && z == 0.0) throw PreconditionError("z: log|z| undefined at 0 with subtract_mean");
  double u = log_abs_poly(f.coeffs(), z);
  if (roots != nullptr && (u < std::log(1e-300)) && std::isfinite(u)) u = log_potential_root_form(*roots, z);
  if (roots != nullptr && std::isinf(u) && u < 0) {
    const double alt = log_potential_root_form(*roots, z);
    if (std::isfinite(alt)) u = alt;
  }
  if (subtract_mean) u -= f.mean() * std::log(std::abs(z));
  return u;
}

std::vector<double> poly_from_roots(const RootSet& rs) {
  std::vector<Complex> p{Complex(1.0)};
  for (const auto& r : rs.roots) {
    for (int m = 0; m < r.multiplicity; ++m) {
      std::vector<Complex> next(p.size() + 1, 0.0);
      for (std::size_t k = 0; k < p.size(); ++k) {
        next[k + 1] += p[k];
        next[k] -= r.value * p[k];
      }
      p = std::move(next);
    }
  }
  std::vector<double> out(p.size());
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) total += out[k] = p[k].real();
  for (double& x : out) x /= total;
  return out;
}

FactoredPGF::FactoredPGF(PGFPoly f, long power) { times(std::move(f), power); }

FactoredPGF& FactoredPGF::times(PGFPoly f, long power) {
  require(power >= 1, "power: must be >= 1");
  factors_.push_back({std::move(f), power});
  return *this;
}

DiscretePMF FactoredPGF::pmf() const {
  require(!factors_.empty(), "factors: empty product");
  std::optional<DiscretePMF> acc;
  for (const auto& fac : factors_) {
    auto p = convolution_power(fac.poly.pmf(), fac.power);
    acc = acc ? convolve(*acc, p) : p;
  }
  return *acc;
}

RootSet FactoredPGF::roots(const FindRootsOptions& opt) const {
  RootSet out;
  for (const auto& fac : factors_) {
    if (fac.poly.degree() == 0) continue;
    for (auto r : find_roots(fac.poly, opt).roots) {
      r.multiplicity *= static_cast<int>(fac.power);
      out.roots.push_back(r);
    }
  }
  finish_root_set(out);
  return out;
}

Complex FactoredPGF::operator()(Complex z) const {
  Complex acc = 1.0;
  for (const auto& fac : factors_) acc *= std::pow(fac.poly(z), static_cast<double>(fac.power));
  return acc;
}

double FactoredPGF::log_potential(Complex z) const {
  double acc = 0.0;
  for (const auto& fac : factors_) acc += static_cast<double>(fac.power) * log_abs_poly(fac.poly.coeffs(), z);
  return acc;
}

long FactoredPGF::degree() const {
  long d = 0;
  for (const auto& fac : factors_) d += fac.power * fac.poly.degree();
  return d;
}

}  // namespace pgfclt
