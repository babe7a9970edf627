#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace nevlab {

/// Reduced quotient of polynomials: coprime, monic denominator.
class RationalFunction {
public:
  RationalFunction() : den_(Polynomial::constant(1)) {}
  RationalFunction(Polynomial num) : num_(std::move(num)), den_(Polynomial::constant(1)) {}
  RationalFunction(const GaussianRational& c) : RationalFunction(Polynomial::constant(c)) {}

  /// Reduces by the gcd and normalizes the denominator.
  RationalFunction(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num.is_zero()) {
      den_ = Polynomial::constant(1);
      return;
    }
    Polynomial g = gcd(num, den);
    if (!g.is_constant()) {
      num = num.exact_div(g);
      den = den.exact_div(g);
    }
    set_normalized(std::move(num), std::move(den));
  }

  /// Caller guarantees num and den are coprime; only normalizes the denominator.
  static RationalFunction from_coprime(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
    RationalFunction r;
    if (num.is_zero()) return r;
    r.set_normalized(std::move(num), std::move(den));
    return r;
  }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  RationalFunction operator-() const { return from_coprime(-num_, den_); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    // cross-cancel first so the products stay small
    Polynomial g1 = a.num_.is_zero() ? Polynomial::constant(1) : gcd(a.num_, b.den_);
    Polynomial g2 = b.num_.is_zero() ? Polynomial::constant(1) : gcd(b.num_, a.den_);
    return from_coprime(a.num_.exact_div(g1) * b.num_.exact_div(g2), a.den_.exact_div(g2) * b.den_.exact_div(g1));
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("division by the zero function");
    return a * b.reciprocal();
  }

  RationalFunction reciprocal() const {
    if (is_zero()) throw std::domain_error("reciprocal of the zero function");
    return from_coprime(den_, num_);
  }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  RationalFunction pow(unsigned e) const { return from_coprime(num_.pow(e), den_.pow(e)); }

  /// Quotient rule with the repeated part of the denominator cancelled up
  /// front: for f = u/v, g = gcd(v, v'), h = v/g,
  /// f' = (u' h - u (v'/g)) / (v h), which is already reduced.
  RationalFunction derivative() const {
    if (den_.is_constant()) return RationalFunction(num_.derivative());
    Polynomial dv = den_.derivative();
    Polynomial g = gcd(den_, dv);
    Polynomial h = den_.exact_div(g);
    Polynomial num = num_.derivative() * h - num_ * dv.exact_div(g);
    return from_coprime(std::move(num), den_ * h);
  }

  RationalFunction derivative(unsigned k) const {
    RationalFunction r = *this;
    for (unsigned i = 0; i < k; ++i) r = r.derivative();
    return r;
  }

  /// f(shift + scale z); scale nonzero. Affine substitution preserves coprimality.
  RationalFunction compose_affine(const GaussianRational& shift, const GaussianRational& scale) const {
    if (scale.is_zero()) throw std::domain_error("compose_affine: zero scale");
    return from_coprime(num_.compose_affine(shift, scale), den_.compose_affine(shift, scale));
  }

  GaussianRational operator()(const GaussianRational& z) const {
    GaussianRational d = den_(z);
    if (d.is_zero()) throw std::domain_error("evaluation at a pole");
    return num_(z) / d;
  }

  std::complex<double> operator()(std::complex<double> z) const { return num_.to_numeric()(z) / den_.to_numeric()(z); }

private:
  void set_normalized(Polynomial num, Polynomial den) {
    GaussianRational lead = den.leading();
    if (!lead.is_one()) {
      GaussianRational inv = lead.inverse();
      num *= inv;
      den *= inv;
    }
    num_ = std::move(num);
    den_ = std::move(den);
  }

  Polynomial num_;
  Polynomial den_;
};

/// Order of f at z0: positive for a zero, negative for a pole, 0 otherwise.
inline int order_at(const RationalFunction& f, const GaussianRational& z0) {
  if (f.is_zero()) throw std::domain_error("order_at: identically zero function");
  auto multiplicity = [&z0](Polynomial p) {
    int count = 0;
    while (!p.is_constant()) {
      auto [q, r] = p.deflate(z0);
      if (!r.is_zero()) break;
      p = std::move(q);
      ++count;
    }
    return count;
  };
  return multiplicity(f.numerator()) - multiplicity(f.denominator());
}

struct RootMultiplicity {
  GaussianRational root;
  int multiplicity;
};

/// f(z) = A prod (z - alpha_i)^{m_i} / prod (z - beta_h)^{l_h}, all roots distinct.
class FactoredRational {
public:
  FactoredRational(GaussianRational constant, std::vector<RootMultiplicity> zeros, std::vector<RootMultiplicity> poles)
      : constant_(std::move(constant)), zeros_(std::move(zeros)), poles_(std::move(poles)) {
    if (constant_.is_zero()) throw std::invalid_argument("FactoredRational: constant must be nonzero");
    std::vector<const GaussianRational*> seen;
    for (const auto* list : {&zeros_, &poles_}) {
      for (const auto& rm : *list) {
        if (rm.multiplicity < 1) throw std::invalid_argument("FactoredRational: multiplicity must be positive");
        for (const auto* other : seen) {
          if (*other == rm.root) throw std::invalid_argument("FactoredRational: repeated root " + rm.root.str());
        }
        seen.push_back(&rm.root);
      }
    }
  }

  const GaussianRational& constant() const { return constant_; }
  const std::vector<RootMultiplicity>& zeros() const { return zeros_; }
  const std::vector<RootMultiplicity>& poles() const { return poles_; }

  int zero_degree() const { return sum(zeros_); }  // M
  int pole_degree() const { return sum(poles_); }  // N
  int zero_sites() const { return static_cast<int>(zeros_.size()); }  // s
  int pole_sites() const { return static_cast<int>(poles_.size()); }  // t
  bool is_constant() const { return zeros_.empty() && poles_.empty(); }

  static Polynomial root_product(const std::vector<RootMultiplicity>& roots, int extra = 0, int scale = 1) {
    Polynomial p = Polynomial::constant(1);
    for (const auto& rm : roots) {
      int e = scale * rm.multiplicity + extra;
      if (e > 0) p *= Polynomial::linear(rm.root).pow(static_cast<unsigned>(e));
    }
    return p;
  }

private:
  static int sum(const std::vector<RootMultiplicity>& v) {
    int s = 0;
    for (const auto& rm : v) s += rm.multiplicity;
    return s;
  }

  GaussianRational constant_;
  std::vector<RootMultiplicity> zeros_;
  std::vector<RootMultiplicity> poles_;
};

/// Expanded form; coprime by the distinct-root invariant.
inline RationalFunction expand(const FactoredRational& f) {
  return RationalFunction::from_coprime(f.constant() * FactoredRational::root_product(f.zeros()),
                                        FactoredRational::root_product(f.poles()));
}

}  // namespace nevlab
