#include "pgfclt/random_pgf.hpp"

#include "pgfclt/constructions.hpp"

namespace pgfclt {

PGFPoly random_coefficient_pgf(int degree, std::mt19937_64& rng) {
  require(degree >= 1, "degree: must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = unit(rng);
  c.back() += 0.01;  // keep the degree exact
  double total = 0.0;
  for (double x : c) total += x;
  for (auto& x : c) x /= total;
  return PGFPoly::normalize(std::move(c));
}

FactoredPGF random_seed_product(int factors, long k, std::mt19937_64& rng) {
  require(factors >= 1 && k >= 1, "seed product: need factors >= 1 and k >= 1");
  std::uniform_real_distribution<double> rho_dist(1.0, 3.0), theta_dist(kPi / 2, kPi);
  std::uniform_int_distribution<int> power_dist(1, 3);
  FactoredPGF out;
  int used = 0;
  while (used < factors) {
    const double rho = rho_dist(rng), theta = theta_dist(rng);
    const int power = std::min(power_dist(rng), factors - used);
    const auto c = seed_sector_pgf(rho, theta).coeffs();
    std::vector<double> sub((c.size() - 1) * static_cast<std::size_t>(k) + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) sub[i * static_cast<std::size_t>(k)] = c[i];
    out.times(PGFPoly::normalize(std::move(sub)), power);
    used += power;
  }
  return out;
}

}  // namespace pgfclt
