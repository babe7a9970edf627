#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "monomial.hpp"
#include "roots.hpp"

namespace nevlab {

/// A point of a divisor: location and multiplicity.
struct DivisorPoint {
  complex z;
  int multiplicity;
};

/// Meromorphic test function f(z) = R(w) with R rational over Q(i) and
/// either w = z (rational samples) or w = e^{cz} (exponential samples).
/// All zeros, poles and a-points come from exact roots of R's numerator and
/// denominator in w, so enumerators are closed-form up to root_find error.
class Sample {
public:
  static Sample rational(RationalFunction r, std::string id = "rational") {
    return Sample(std::move(id), std::move(r), std::nullopt);
  }

  static Sample exponential(RationalFunction r, GaussianRational c, std::string id) {
    if (c.is_zero()) throw std::invalid_argument("exponential sample: c must be nonzero");
    return Sample(std::move(id), std::move(r), std::move(c));
  }

  // Catalog.
  static Sample exp(GaussianRational a = 1) {
    Sample s = exponential(RationalFunction(Polynomial::z()), a, "exp");
    s.closed_form_slope_ = std::abs(a.to_complex()) / std::numbers::pi;
    return s;
  }
  static Sample sin() {
    // (w^2 - 1)/(2i w), w = e^{iz}
    Polynomial w = Polynomial::z();
    return exponential(RationalFunction(w * w - Polynomial::constant(1), w * GaussianRational(0, 1, 2, 1)),
                       GaussianRational::i(), "sin");
  }
  static Sample cos() {
    Polynomial w = Polynomial::z();
    return exponential(RationalFunction(w * w + Polynomial::constant(1), w * GaussianRational(2)),
                       GaussianRational::i(), "cos");
  }
  static Sample tan() {
    // -i (w^2 - 1)/(w^2 + 1)
    Polynomial w = Polynomial::z();
    return exponential(RationalFunction((w * w - Polynomial::constant(1)) * -GaussianRational::i(),
                                        w * w + Polynomial::constant(1)),
                       GaussianRational::i(), "tan");
  }
  static Sample reciprocal_logistic(GaussianRational j) {
    Polynomial w = Polynomial::z();
    return exponential(RationalFunction(Polynomial::constant(1), w + Polynomial::constant(1)), std::move(j),
                       "reciprocal_logistic");
  }

  const std::string& id() const { return id_; }
  const RationalFunction& form() const { return r_; }
  const std::optional<GaussianRational>& exponent() const { return c_; }
  bool is_transcendental() const { return c_.has_value() && !r_.is_constant(); }
  bool is_constant() const { return r_.is_constant(); }

  /// T(r) in closed form when known (exp(az): |a| r / pi).
  std::optional<double> closed_form_T(double r) const {
    if (!closed_form_slope_) return std::nullopt;
    return *closed_form_slope_ * r;
  }

  complex value(complex z) const { return ratio(num_, den_, w_of(z)); }

  complex derivative(complex z) const {
    complex w = w_of(z);
    complex n = num_(w), d = den_(w);
    complex dw = (dnum_(w) * d - n * dden_(w)) / (d * d);
    return c_ ? dw * cnum_ * w : dw;
  }

  /// Value and derivative of 1/f, for use near poles.
  complex inverse_value(complex z) const { return ratio(den_, num_, w_of(z)); }
  complex inverse_derivative(complex z) const {
    complex w = w_of(z);
    complex n = num_(w), d = den_(w);
    complex dw = (dden_(w) * n - d * dnum_(w)) / (n * n);
    return c_ ? dw * cnum_ * w : dw;
  }

  /// |f'| / (1 + |f|^2) in homogeneous form |N'D - ND'| |dw/dz| / (|N|^2 + |D|^2),
  /// which is the same expression in both charts f and 1/f.
  double spherical_derivative(complex z) const {
    complex w = w_of(z);
    complex n = num_(w), d = den_(w);
    double top = std::abs(dnum_(w) * d - n * dden_(w));
    if (c_) top *= std::abs(cnum_ * w);
    return top / (std::norm(n) + std::norm(d));
  }

  /// log|f(z)| without overflow.
  double log_abs(complex z) const {
    if (!c_) return num_.log_abs(z) - den_.log_abs(z);
    complex L = cnum_ * z;  // log w
    if (std::abs(L.real()) < 600) {
      complex w = std::exp(L);
      return num_.log_abs(w) - den_.log_abs(w);
    }
    // |w| is astronomically large or small: the extreme terms dominate
    return dominant_log_abs(num_, L) - dominant_log_abs(den_, L);
  }

  Sample shift(const GaussianRational& a) const {
    Sample s(id_ + "-shift", r_ - RationalFunction(a), c_);
    return s;
  }
  Sample reciprocal() const {
    if (r_.is_zero()) throw std::domain_error("reciprocal of the zero sample");
    return Sample(id_ + "-reciprocal", r_.reciprocal(), c_);
  }

  /// (f^n)^(k), exact in w; d/dz acts as c w d/dw on exponential samples.
  Sample power_derivative(int n, int k) const {
    if (n < 1 || k < 0) throw std::invalid_argument("power_derivative: need n >= 1, k >= 0");
    RationalFunction g = r_.pow(static_cast<unsigned>(n));
    if (!c_) return Sample(id_ + "-D", g.derivative(static_cast<unsigned>(k)), std::nullopt);
    RationalFunction cw(Polynomial::monomial(*c_, 1));
    for (int j = 0; j < k; ++j) g = g.derivative() * cw;
    return Sample(id_ + "-D", std::move(g), c_);
  }

  /// F = f^m (f^n)^(k).
  Sample monomial(const MonomialSpec& spec) const {
    spec.validate();
    if (r_.is_constant()) throw std::domain_error("monomial of a constant sample");
    if (!c_) return Sample(id_ + "-F", build_F(r_, spec), std::nullopt);
    Sample d = power_derivative(spec.n, spec.k);
    return Sample(id_ + "-F", r_.pow(static_cast<unsigned>(spec.m)) * d.r_, c_);
  }

  /// a-points of f in |z| <= r, each once with multiplicity.
  std::vector<DivisorPoint> a_points_in_disk(double r, const GaussianRational& a = GaussianRational()) const {
    RationalFunction diff = r_ - RationalFunction(a);
    if (diff.is_zero()) throw std::domain_error("sample is identically equal to the target value");
    return map_roots(diff.numerator(), r);
  }
  std::vector<DivisorPoint> zeros_in_disk(double r) const { return a_points_in_disk(r); }
  std::vector<DivisorPoint> poles_in_disk(double r) const {
    if (r_.denominator().is_constant()) return {};
    std::call_once(pole_cache_->once, [&] { pole_cache_->roots = root_find(r_.denominator(), 1e-12); });
    return map_roots(pole_cache_->roots, r);
  }

  /// Distance from z to the nearest pole, capped.
  double pole_distance(complex z, double cap) const {
    double best = cap;
    for (const auto& p : poles_in_disk(std::abs(z) + cap)) best = std::min(best, std::abs(p.z - z));
    return best;
  }

private:
  Sample(std::string id, RationalFunction r, std::optional<GaussianRational> c)
      : id_(std::move(id)), r_(std::move(r)), c_(std::move(c)) {
    num_ = r_.numerator().to_numeric();
    den_ = r_.denominator().to_numeric();
    dnum_ = r_.numerator().derivative().to_numeric();
    dden_ = r_.denominator().derivative().to_numeric();
    if (c_) cnum_ = c_->to_complex();
  }

  complex w_of(complex z) const { return c_ ? std::exp(cnum_ * z) : z; }

  static complex ratio(const NumericPolynomial& n, const NumericPolynomial& d, complex w) {
    if (std::abs(w) <= 1) return n(w) / d(w);
    // divide through by w^deg so large w does not overflow
    complex u = 1.0 / w;
    complex a = 0, b = 0;
    for (const auto& c : n.coefficients()) a = a * u + c;
    for (const auto& c : d.coefficients()) b = b * u + c;
    int shift = n.degree() - d.degree();
    return a / b * std::pow(w, shift);
  }

  static double dominant_log_abs(const NumericPolynomial& p, complex log_w) {
    const auto& c = p.coefficients();
    std::size_t i = 0;
    if (log_w.real() > 0) {
      i = c.size() - 1;
    } else {
      while (i + 1 < c.size() && c[i] == complex(0)) ++i;
    }
    return std::log(std::abs(c[i])) + static_cast<double>(i) * log_w.real();
  }

  std::vector<DivisorPoint> map_roots(const Polynomial& p, double r) const {
    if (p.is_constant()) return {};
    return map_roots(root_find(p, 1e-12), r);
  }

  std::vector<DivisorPoint> map_roots(const NumericRootSet& roots, double r) const {
    std::vector<DivisorPoint> out;
    for (const auto& root : roots.roots) {
      if (!c_) {
        if (std::abs(root.location) <= r) out.push_back({root.location, root.multiplicity});
        continue;
      }
      if (root.location == complex(0)) continue;  // w = 0 is never attained
      // z = (Log zeta + 2 pi i j)/c with |z| <= r, i.e. |Log zeta + 2 pi i j| <= r|c|
      complex L = std::log(root.location);
      double reach = r * std::abs(cnum_);
      if (std::abs(L.real()) > reach) continue;
      double s = std::sqrt(reach * reach - L.real() * L.real());
      long jlo = static_cast<long>(std::floor((-L.imag() - s) / (2 * std::numbers::pi)));
      long jhi = static_cast<long>(std::ceil((-L.imag() + s) / (2 * std::numbers::pi)));
      for (long j = jlo; j <= jhi; ++j) {
        complex z = (L + complex(0, 2 * std::numbers::pi * static_cast<double>(j))) / cnum_;
        if (std::abs(z) <= r) out.push_back({z, root.multiplicity});
      }
    }
    return out;
  }

  std::string id_;
  RationalFunction r_;
  std::optional<GaussianRational> c_;
  NumericPolynomial num_, den_, dnum_, dden_;
  complex cnum_{0, 0};
  std::optional<double> closed_form_slope_;

  struct PoleCache {
    std::once_flag once;
    NumericRootSet roots;
  };
  std::shared_ptr<PoleCache> pole_cache_ = std::make_shared<PoleCache>();
};

}  // namespace nevlab
