#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "gaussian_rational.hpp"

namespace nevlab::modular {

// Arithmetic in F_p for p < 2^31, where p = 1 (mod 4) so that F_p holds a
// square root of -1. Reducing Q(i) modulo the prime ideal (p, i - iota) is a
// ring map wherever denominators are prime to p.

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return a * b % p; }

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = mul_mod(r, b, p);
    b = mul_mod(b, b, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic for n < 3.4e14
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimeIdeal {
  std::uint64_t p;
  std::uint64_t iota;  // iota^2 = -1 mod p
};

/// A handful of primes p = 1 (mod 4) just below 2^31, each with a root of -1.
inline const std::vector<PrimeIdeal>& prime_ideals() {
  static const std::vector<PrimeIdeal> ideals = [] {
    std::vector<PrimeIdeal> out;
    for (std::uint64_t p = (1ull << 31) - 1; out.size() < 6; p -= 2) {
      if (p % 4 != 1 || !is_prime(p)) continue;
      for (std::uint64_t c = 2;; ++c) {
        std::uint64_t x = pow_mod(c, (p - 1) / 4, p);
        if (mul_mod(x, x, p) == p - 1) {
          out.push_back({p, x});
          break;
        }
      }
    }
    return out;
  }();
  return ideals;
}

inline std::optional<std::uint64_t> reduce(const mpq_class& q, std::uint64_t p) {
  unsigned long den = mpz_fdiv_ui(q.get_den().get_mpz_t(), p);
  if (den == 0) return std::nullopt;
  unsigned long num = mpz_fdiv_ui(q.get_num().get_mpz_t(), p);
  return mul_mod(num, inv_mod(den, p), p);
}

inline std::optional<std::uint64_t> reduce(const GaussianRational& g, const PrimeIdeal& ideal) {
  auto re = reduce(g.re(), ideal.p);
  auto im = reduce(g.im(), ideal.p);
  if (!re || !im) return std::nullopt;
  return (*re + mul_mod(*im, ideal.iota, ideal.p)) % ideal.p;
}

/// Dense polynomial over F_p, index = power. Trailing zeros trimmed.
using PolyMod = std::vector<std::uint64_t>;

inline void trim(PolyMod& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyMod rem_mod(PolyMod a, const PolyMod& b, std::uint64_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint64_t inv_lead = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    std::uint64_t factor = mul_mod(a.back(), inv_lead, p);
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + p - mul_mod(factor, b[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

/// Degree of gcd(a, b) over F_p; both inputs nonzero.
inline std::size_t gcd_degree_mod(PolyMod a, PolyMod b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyMod r = rem_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a.size() - 1;
}

}  // namespace nevlab::modular
