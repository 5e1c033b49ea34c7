#pragma once

#include <random>

#include "pgfclt/pgf_roots.hpp"

namespace pgfclt {

// Degree-`degree` PGF with i.i.d. uniform(0,1) coefficients, normalized.
PGFPoly random_coefficient_pgf(int degree, std::mt19937_64& rng);

// Product of `factors` sector seeds (rho in [1, 3], theta in [pi/2, pi]) taken in z^k,
// so every root has |arg| >= pi/(2k). Repeated seeds are merged into powers.
FactoredPGF random_seed_product(int factors, long k, std::mt19937_64& rng);

}  // namespace pgfclt
