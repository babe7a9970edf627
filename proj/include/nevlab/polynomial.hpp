#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gaussian_rational.hpp"
#include "modular.hpp"

namespace nevlab {

/// Polynomial degree with a distinguished minus-infinity for the zero
/// polynomial, so deg(ab) = deg a + deg b holds without exceptions.
class Degree {
public:
  constexpr explicit Degree(int d) : finite_(true), value_(d) {}
  static constexpr Degree minus_infinity() { return Degree(); }

  constexpr bool is_finite() const { return finite_; }
  int value() const {
    if (!finite_) throw std::domain_error("degree of the zero polynomial");
    return value_;
  }

  friend constexpr Degree operator+(Degree a, Degree b) {
    if (!a.finite_ || !b.finite_) return minus_infinity();
    return Degree(a.value_ + b.value_);
  }
  friend constexpr bool operator==(Degree a, Degree b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(Degree a, int b) { return a == Degree(b); }
  friend constexpr std::strong_ordering operator<=>(Degree a, int b) { return a <=> Degree(b); }

private:
  constexpr Degree() : finite_(false), value_(0) {}
  bool finite_;
  int value_;
};

/// Double-precision copy of a polynomial for fast evaluation.
class NumericPolynomial {
public:
  using complex = std::complex<double>;
  NumericPolynomial() = default;
  explicit NumericPolynomial(std::vector<complex> c) : c_(std::move(c)) {}

  const std::vector<complex>& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  complex operator()(complex z) const {
    complex acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  complex derivative_at(complex z) const {
    complex acc = 0;
    for (std::size_t i = c_.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * c_[i];
    return acc;
  }

  /// log|p(z)| without overflow for large |z|: beyond the unit circle the
  /// reversed polynomial is evaluated at 1/z.
  double log_abs(complex z) const {
    if (c_.empty()) return -std::numeric_limits<double>::infinity();
    double az = std::abs(z);
    if (az <= 1.0) return std::log(std::abs((*this)(z)));
    complex w = 1.0 / z;
    complex acc = 0;
    for (const auto& c : c_) acc = acc * w + c;
    return degree() * std::log(az) + std::log(std::abs(acc));
  }

private:
  std::vector<complex> c_;
};

/// Dense univariate polynomial over Q(i); index = power of z.
/// Canonical: the highest stored coefficient is nonzero, zero is empty.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<GaussianRational> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<GaussianRational> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(GaussianRational c) { return Polynomial(std::vector<GaussianRational>{std::move(c)}); }
  static Polynomial monomial(GaussianRational c, std::size_t power) {
    std::vector<GaussianRational> v(power + 1);
    v[power] = std::move(c);
    return Polynomial(std::move(v));
  }
  static Polynomial z() { return monomial(1, 1); }
  /// z - root
  static Polynomial linear(const GaussianRational& root) { return Polynomial({-root, GaussianRational(1)}); }

  const std::vector<GaussianRational>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  Degree degree() const { return c_.empty() ? Degree::minus_infinity() : Degree(static_cast<int>(c_.size()) - 1); }

  const GaussianRational& leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
  }
  GaussianRational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : GaussianRational(); }

  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

  Polynomial monic() const {
    if (c_.empty() || c_.back().is_one()) return *this;
    return *this * c_.back().inverse();
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const GaussianRational& s) {
    if (s.is_zero()) {
      c_.clear();
      return *this;
    }
    for (auto& c : c_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const GaussianRational& s) { return a *= s; }
  friend Polynomial operator*(const GaussianRational& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<GaussianRational> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j].is_zero()) continue;
        out[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return Polynomial(std::move(out));
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(1), base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<GaussianRational> out(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * GaussianRational(static_cast<long>(i));
    return Polynomial(std::move(out));
  }

  GaussianRational operator()(const GaussianRational& z) const {
    GaussianRational acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  NumericPolynomial to_numeric() const {
    std::vector<std::complex<double>> v;
    v.reserve(c_.size());
    for (const auto& c : c_) v.push_back(c.to_complex());
    return NumericPolynomial(std::move(v));
  }

  /// Quotient and remainder; divisor must be nonzero.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    if (c_.size() < d.c_.size()) return {Polynomial(), *this};
    std::vector<GaussianRational> rem = c_;
    std::vector<GaussianRational> quot(c_.size() - d.c_.size() + 1);
    const GaussianRational inv_lead = d.c_.back().inverse();
    const std::size_t dd = d.c_.size() - 1;
    for (std::size_t k = quot.size(); k-- > 0;) {
      GaussianRational q = rem[k + dd] * inv_lead;
      if (q.is_zero()) continue;
      for (std::size_t i = 0; i <= dd; ++i) {
        if (!d.c_[i].is_zero()) rem[k + i] -= q * d.c_[i];
      }
      quot[k] = std::move(q);
    }
    rem.resize(dd);
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  Polynomial operator%(const Polynomial& d) const { return divmod(d).second; }

  /// Division that must leave no remainder.
  Polynomial exact_div(const Polynomial& d) const {
    auto [q, r] = divmod(d);
    if (!r.is_zero()) throw std::logic_error("exact_div: nonzero remainder");
    return q;
  }

  bool divisible_by(const Polynomial& d) const { return divmod(d).second.is_zero(); }

  /// Divide by (z - root) once; returns quotient if the root is exact.
  std::pair<Polynomial, GaussianRational> deflate(const GaussianRational& root) const {
    if (c_.empty()) return {Polynomial(), GaussianRational()};
    std::vector<GaussianRational> q(c_.size() - 1);
    GaussianRational acc;
    for (std::size_t i = c_.size(); i-- > 0;) {
      acc = acc * root + c_[i];
      if (i > 0) q[i - 1] = acc;
    }
    return {Polynomial(std::move(q)), acc};
  }

  /// q(z) = p(shift + scale * z)
  Polynomial compose_affine(const GaussianRational& shift, const GaussianRational& scale) const {
    std::vector<GaussianRational> a = c_;
    // Taylor shift by repeated synthetic division
    if (!shift.is_zero()) {
      const std::size_t n = a.size();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = n - 1; j-- > i;) a[j] += shift * a[j + 1];
      }
    }
    GaussianRational s(1);
    for (auto& c : a) {
      c *= s;
      s *= scale;
    }
    return Polynomial(std::move(a));
  }

  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
    if (p.is_zero()) return os << "0";
    bool first = true;
    for (std::size_t i = p.c_.size(); i-- > 0;) {
      if (p.c_[i].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << p.c_[i].str() << ")";
      if (i > 0) os << "*z^" << i;
    }
    return os;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<GaussianRational> c_;
};

namespace detail {

inline std::optional<modular::PolyMod> reduce_poly(const Polynomial& p, const modular::PrimeIdeal& ideal) {
  modular::PolyMod out;
  out.reserve(p.coefficients().size());
  for (const auto& c : p.coefficients()) {
    auto r = modular::reduce(c, ideal);
    if (!r) return std::nullopt;
    out.push_back(*r);
  }
  if (out.empty() || out.back() == 0) return std::nullopt;  // leading coefficient vanishes mod p
  return out;
}

}  // namespace detail

/// Upper bound on deg gcd(a, b) from a single good prime. Over Q(i) the true
/// gcd degree never exceeds the modular one when neither leading coefficient
/// vanishes, so a zero here certifies coprimality.
inline std::optional<std::size_t> gcd_degree_bound(const Polynomial& a, const Polynomial& b) {
  for (const auto& ideal : modular::prime_ideals()) {
    auto am = detail::reduce_poly(a, ideal);
    if (!am) continue;
    auto bm = detail::reduce_poly(b, ideal);
    if (!bm) continue;
    return modular::gcd_degree_mod(std::move(*am), std::move(*bm), ideal.p);
  }
  return std::nullopt;
}

/// Monic gcd. The zero polynomial has no gcd with itself.
inline Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd(0, 0) is undefined");
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(1);
  if (auto bound = gcd_degree_bound(a, b); bound && *bound == 0) return Polynomial::constant(1);

  // monic remainder sequence
  Polynomial r0 = a.monic(), r1 = b.monic();
  if (r0.degree() < r1.degree()) std::swap(r0, r1);
  while (!r1.is_zero()) {
    Polynomial r = (r0 % r1).monic();
    r0 = std::move(r1);
    r1 = std::move(r);
  }
  return r0;
}

struct SquarefreePart {
  Polynomial factor;  // monic, squarefree
  int multiplicity;
};

/// p = c * prod factor^multiplicity with pairwise coprime squarefree factors.
struct SquarefreeDecomposition {
  std::vector<SquarefreePart> parts;

  int distinct_root_count() const {
    int n = 0;
    for (const auto& part : parts) n += part.factor.degree().value();
    return n;
  }
  int total_degree() const {
    int n = 0;
    for (const auto& part : parts) n += part.multiplicity * part.factor.degree().value();
    return n;
  }
  bool has_repeated_root() const {
    return std::any_of(parts.begin(), parts.end(), [](const auto& part) { return part.multiplicity > 1; });
  }
  Polynomial radical() const {
    Polynomial r = Polynomial::constant(1);
    for (const auto& part : parts) r *= part.factor;
    return r;
  }
  Polynomial expand() const {
    Polynomial r = Polynomial::constant(1);
    for (const auto& part : parts) r *= part.factor.pow(static_cast<unsigned>(part.multiplicity));
    return r;
  }
};

/// Yun's algorithm (characteristic zero).
inline SquarefreeDecomposition squarefree_decompose(const Polynomial& p) {
  if (p.is_zero()) throw std::domain_error("squarefree decomposition of the zero polynomial");
  SquarefreeDecomposition out;
  if (p.is_constant()) return out;
  Polynomial f = p.monic();
  Polynomial df = f.derivative();
  Polynomial a = gcd(f, df);
  if (a.is_constant()) {
    out.parts.push_back({std::move(f), 1});
    return out;
  }
  Polynomial b = f.exact_div(a);
  Polynomial c = df.exact_div(a);
  Polynomial d = c - b.derivative();
  for (int i = 1; !b.is_constant(); ++i) {
    a = gcd(b, d);
    b = b.exact_div(a);
    c = d.exact_div(a);
    d = c - b.derivative();
    if (!a.is_constant()) out.parts.push_back({a, i});
  }
  return out;
}

}  // namespace nevlab
