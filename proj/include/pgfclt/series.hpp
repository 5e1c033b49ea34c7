#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pgfclt {

// Power series in w truncated after order J.
template <class T>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order) : c_(static_cast<std::size_t>(order) + 1, T(0)) {}
  TruncatedSeries(int order, std::vector<T> coeffs) : c_(std::move(coeffs)) {
    c_.resize(static_cast<std::size_t>(order) + 1, T(0));
  }

  int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
  T& operator[](int j) { return c_[static_cast<std::size_t>(j)]; }
  const T& operator[](int j) const { return c_[static_cast<std::size_t>(j)]; }
  const std::vector<T>& coeffs() const noexcept { return c_; }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    for (int j = 0; j <= order(); ++j) c_[j] += o[j];
    return *this;
  }
  TruncatedSeries& operator*=(T s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries out(a.order());
    for (int i = 0; i <= a.order(); ++i)
      for (int j = 0; i + j <= a.order(); ++j) out[i + j] += a[i] * b[j];
    return out;
  }

  // exp(w) - 1
  static TruncatedSeries expm1(int order) {
    TruncatedSeries s(order);
    T f(1);
    for (int j = 1; j <= order; ++j) {
      f /= T(j);
      s[j] = f;
    }
    return s;
  }

  // log(1 + g) for g(0) = 0, from (1 + g) h' = g'.
  static TruncatedSeries log1p(const TruncatedSeries& g) {
    if (g[0] != T(0)) throw std::invalid_argument("log1p: series must vanish at 0");
    TruncatedSeries h(g.order());
    for (int n = 1; n <= g.order(); ++n) {
      T acc = T(n) * g[n];
      for (int k = 1; k < n; ++k) acc -= T(k) * h[k] * g[n - k];
      h[n] = acc / T(n);
    }
    return h;
  }

  // exp(g) for g(0) = 0.
  static TruncatedSeries exp(const TruncatedSeries& g) {
    if (g[0] != T(0)) throw std::invalid_argument("exp: series must vanish at 0");
    TruncatedSeries e(g.order());
    e[0] = T(1);
    for (int n = 1; n <= g.order(); ++n) {
      T acc(0);
      for (int k = 1; k <= n; ++k) acc += T(k) * g[k] * e[n - k];
      e[n] = acc / T(n);
    }
    return e;
  }

  // f(g(w)) for g(0) = 0, Horner in g.
  friend TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g) {
    if (g[0] != T(0)) throw std::invalid_argument("compose: inner series must vanish at 0");
    TruncatedSeries out(f.order());
    for (int j = f.order(); j >= 0; --j) {
      out = out * g;
      out[0] += f[j];
    }
    return out;
  }

  template <class X>
  X evaluate(X w) const {
    X acc(0);
    for (int j = order(); j >= 0; --j) acc = acc * w + X(c_[j]);
    return acc;
  }

 private:
  std::vector<T> c_;
};

}  // namespace pgfclt
