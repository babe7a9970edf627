#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "rational_function.hpp"

namespace nevlab {

/// Bounds for random factored rational functions.
struct FactoredBounds {
  int max_zero_sites = 3;
  int max_pole_sites = 3;
  int max_multiplicity = 3;
  long coefficient_height = 10;  // max |numerator| and denominator of each rational part
  int max_zero_degree = 1 << 20;  // cap on M
  int max_pole_degree = 1 << 20;  // cap on N
};

/// splitmix64 finalizer; derives independent per-case seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class RandomSource {
public:
  explicit RandomSource(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  mpq_class rational(long height) {
    mpq_class q(integer(-height, height), integer(1, height));
    q.canonicalize();
    return q;
  }

  GaussianRational gaussian(long height) { return {rational(height), rational(height)}; }

  GaussianRational nonzero_gaussian(long height) {
    for (;;) {
      GaussianRational g = gaussian(height);
      if (!g.is_zero()) return g;
    }
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

/// Nonconstant factored rational with pairwise distinct roots. Degenerate
/// draws (coincident roots, degree caps) are retried at most max_retries times.
inline FactoredRational random_factored(RandomSource& rng, const FactoredBounds& b, int max_retries = 100) {
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    int s = static_cast<int>(rng.integer(0, b.max_zero_sites));
    int t = static_cast<int>(rng.integer(0, b.max_pole_sites));
    if (s + t == 0) continue;
    std::vector<GaussianRational> roots;
    bool clash = false;
    for (int i = 0; i < s + t && !clash; ++i) {
      GaussianRational r = rng.gaussian(b.coefficient_height);
      for (const auto& o : roots) clash = clash || o == r;
      roots.push_back(r);
    }
    if (clash) continue;
    std::vector<RootMultiplicity> zeros, poles;
    int M = 0, N = 0;
    for (int i = 0; i < s + t; ++i) {
      int mult = static_cast<int>(rng.integer(1, b.max_multiplicity));
      if (i < s) {
        zeros.push_back({roots[i], mult});
        M += mult;
      } else {
        poles.push_back({roots[i], mult});
        N += mult;
      }
    }
    if (M > b.max_zero_degree || N > b.max_pole_degree) continue;
    return FactoredRational(rng.nonzero_gaussian(b.coefficient_height), std::move(zeros), std::move(poles));
  }
  throw std::runtime_error("random_factored: retry bound exceeded; bounds admit too few instances");
}

}  // namespace nevlab
