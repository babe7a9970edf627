#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "io.hpp"
#include "monomial.hpp"
#include "sample.hpp"
#include "value_distribution.hpp"
#include "zeros.hpp"

namespace nevlab {

/// A function known through evaluation: value, derivative, an optional
/// 1/f chart for use near poles, and a local length scale (a radius on
/// which it is comfortably analytic) for numeric differentiation.
struct Evaluable {
  std::function<complex(complex)> value;
  std::function<complex(complex)> derivative;
  std::function<complex(complex)> inverse_value;       // may be empty
  std::function<complex(complex)> inverse_derivative;  // may be empty
  std::function<double(complex)> scale;

  static Evaluable from(const Sample& s) {
    double cap = 1.0;
    if (const auto& c = s.exponent()) cap = 1.0 / std::abs(c->to_complex());
    return {[s](complex z) { return s.value(z); },
            [s](complex z) { return s.derivative(z); },
            [s](complex z) { return s.inverse_value(z); },
            [s](complex z) { return s.inverse_derivative(z); },
            [s, cap](complex z) { return std::min(s.pole_distance(z, cap * (1 + std::abs(z))), cap * (1 + std::abs(z))); }};
  }
};

/// f# = |f'| / (1 + |f|^2), evaluated in the chart 1/f where |f| > 1.
inline double spherical_derivative(const Evaluable& f, complex z) {
  complex v = f.value(z);
  if (std::isfinite(std::abs(v)) && std::abs(v) <= 1) return std::abs(f.derivative(z)) / (1 + std::norm(v));
  if (f.inverse_value) {
    complex g = f.inverse_value(z);
    return std::abs(f.inverse_derivative(z)) / (1 + std::norm(g));
  }
  if (!std::isfinite(std::abs(v))) throw std::domain_error("spherical_derivative: pole without an inverse chart");
  // (1/f)' = -f'/f^2
  complex g = 1.0 / v;
  return std::abs(f.derivative(z) * g * g) / (1 + std::norm(g));
}

inline double spherical_derivative(const Sample& f, complex z) { return f.spherical_derivative(z); }

// ---------------------------------------------------------------- families

struct FamilySpec {
  std::string id;
  int j_min = 1;
  int j_max = 1;
  std::function<Evaluable(int)> member;

  static FamilySpec exp_scale(int j_max) { return {"exp_scale", 1, j_max, [](int j) { return Evaluable::from(Sample::exp(j)); }}; }

  /// f_j = j z^{k-1}; k >= 2 keeps members nonconstant.
  static FamilySpec monomial_scale(int k, int j_max) {
    if (k < 2) throw std::invalid_argument("monomial_scale: k must be at least 2");
    return {"monomial_scale", 1, j_max, [k](int j) {
              return Evaluable::from(
                  Sample::rational(RationalFunction(Polynomial::monomial(j, static_cast<std::size_t>(k - 1)))));
            }};
  }

  static FamilySpec reciprocal_logistic(int j_max) {
    return {"reciprocal_logistic", 1, j_max, [](int j) { return Evaluable::from(Sample::reciprocal_logistic(j)); }};
  }

  /// Where the parameter enters a rational template.
  enum class Slot { value, argument };

  /// f_j = j R(z) (value slot) or R(j z) (argument slot).
  static FamilySpec rational_template(std::string id, const FactoredRational& form, Slot slot, int j_max) {
    RationalFunction r = expand(form);
    if (r.is_constant()) throw std::invalid_argument("rational family: template must be nonconstant");
    return {std::move(id), 1, j_max, [r, slot](int j) {
              GaussianRational gj(j);
              RationalFunction m =
                  slot == Slot::value ? r * RationalFunction(gj) : r.compose_affine(GaussianRational(), gj);
              return Evaluable::from(Sample::rational(std::move(m)));
            }};
  }

  /// Degenerate reference family f_j = c, useful as a zero baseline.
  static FamilySpec constant(GaussianRational c, int j_max) {
    return {"constant", 1, j_max, [c](int) { return Evaluable::from(Sample::rational(RationalFunction(c))); }};
  }

  static FamilySpec by_name(const std::string& name, int j_max, int k = 2) {
    if (name == "exp-scale" || name == "exp_scale") return exp_scale(j_max);
    if (name == "monomial-scale" || name == "monomial_scale") return monomial_scale(k, j_max);
    if (name == "reciprocal-logistic" || name == "reciprocal_logistic") return reciprocal_logistic(j_max);
    if (name == "constant") return constant(GaussianRational(1), j_max);
    throw std::invalid_argument("unknown family \"" + name + "\"");
  }
};

struct MartyRow {
  int j;
  double sup;
};

struct MartyTable {
  std::string family;
  std::vector<MartyRow> rows;

  bool nondecreasing() const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].sup < rows[i - 1].sup) return false;
    }
    return true;
  }

  void write_csv(std::ostream& os) const {
    os << "j,sup_spherical_derivative\n";
    for (const auto& r : rows) os << r.j << ',' << io::fmt12(r.sup) << '\n';
  }
};

/// Sup of the spherical derivative of each member over a (grid+1)^2 lattice
/// covering rect, corners included.
inline MartyTable marty_scan(const FamilySpec& family, const Rect& rect, int grid, int j_min, int j_max) {
  if (grid < 16) throw std::invalid_argument("marty_scan: grid density must be at least 16 per side");
  if (!(rect.x1 > rect.x0 && rect.y1 > rect.y0)) throw std::invalid_argument("marty_scan: empty region");
  if (j_min < family.j_min || j_max > family.j_max || j_min > j_max) {
    throw std::invalid_argument("marty_scan: j range outside the family's range");
  }
  MartyTable t{family.id, {}};
  for (int j = j_min; j <= j_max; ++j) {
    Evaluable f = family.member(j);
    double sup = 0;
    for (int a = 0; a <= grid; ++a) {
      for (int b = 0; b <= grid; ++b) {
        complex z(rect.x0 + rect.width() * a / grid, rect.y0 + rect.height() * b / grid);
        sup = std::max(sup, spherical_derivative(f, z));
      }
    }
    t.rows.push_back({j, sup});
  }
  return t;
}

inline MartyTable marty_scan(const FamilySpec& family, const Rect& rect, int grid) {
  return marty_scan(family, rect, grid, family.j_min, family.j_max);
}

// ---------------------------------------------------------------- rescaling

struct RescaleSpec {
  complex z0{0, 0};
  double rho = 1;
  double alpha = 0;

  static RescaleSpec for_monomial(const MonomialSpec& spec, complex z0, double rho) {
    return {z0, rho, static_cast<double>(spec.k) / (spec.m + spec.n)};
  }

  void validate() const {
    if (!(rho > 0) || !std::isfinite(rho)) throw std::invalid_argument("rescale: rho must be positive and finite");
    if (!(alpha >= 0) || !std::isfinite(alpha)) throw std::invalid_argument("rescale: alpha must be nonnegative");
  }
  void validate(const MonomialSpec& spec) const {
    validate();
    if (!(alpha < spec.k)) throw std::invalid_argument("rescale: alpha must be below k");
  }
};

/// g(z) = rho^{-alpha} f(z0 + rho z).
inline Evaluable zalcman_rescale(const Evaluable& f, const RescaleSpec& rs) {
  rs.validate();
  double a = std::pow(rs.rho, -rs.alpha);
  double b = std::pow(rs.rho, 1 - rs.alpha);
  Evaluable g;
  g.value = [f, rs, a](complex z) { return a * f.value(rs.z0 + rs.rho * z); };
  g.derivative = [f, rs, b](complex z) { return b * f.derivative(rs.z0 + rs.rho * z); };
  if (f.inverse_value) {
    g.inverse_value = [f, rs, a](complex z) { return f.inverse_value(rs.z0 + rs.rho * z) / a; };
    g.inverse_derivative = [f, rs, a](complex z) { return rs.rho * f.inverse_derivative(rs.z0 + rs.rho * z) / a; };
  }
  if (f.scale) g.scale = [f, rs](complex z) { return f.scale(rs.z0 + rs.rho * z) / rs.rho; };
  return g;
}

/// Exact rational path: rho = t^{m+n}, alpha = k/(m+n), so rho^{-alpha} = t^{-k}.
inline RescaleIdentityReport zalcman_rescale_exact(const RationalFunction& f, const MonomialSpec& spec,
                                                   const GaussianRational& z0, const mpq_class& t) {
  return rescale_monomial_identity(f, spec, z0, t);
}

struct DerivativeEstimate {
  complex value;
  double error;
};

/// k-th derivative by central differences of step h, h/2, h/4, ... with
/// Richardson extrapolation in h^2; stops once roundoff makes the error
/// estimate grow (the classic Ridders tableau).
inline DerivativeEstimate richardson_derivative(const std::function<complex(complex)>& f, complex z, int k, double h) {
  if (k < 0) throw std::invalid_argument("richardson_derivative: negative order");
  if (k == 0) return {f(z), 0};
  if (!(h > 0)) throw std::invalid_argument("richardson_derivative: step must be positive");
  std::vector<double> binom(static_cast<std::size_t>(k) + 1, 1);
  for (int i = 1; i <= k; ++i) binom[static_cast<std::size_t>(i)] = binom[static_cast<std::size_t>(i) - 1] * (k - i + 1) / i;
  auto central = [&](double step) {
    complex acc = 0;
    for (int i = 0; i <= k; ++i) {
      double sign = i % 2 == 0 ? 1 : -1;
      acc += sign * binom[static_cast<std::size_t>(i)] * f(z + (0.5 * k - i) * step);
    }
    return acc / std::pow(step, k);
  };
  constexpr int levels = 10;
  std::vector<std::vector<complex>> t(levels, std::vector<complex>(levels));
  DerivativeEstimate best{0, std::numeric_limits<double>::infinity()};
  double step = h;
  t[0][0] = central(step);
  for (int i = 1; i < levels; ++i) {
    step *= 0.5;
    t[i][0] = central(step);
    double factor = 1;
    for (int j = 1; j <= i; ++j) {
      factor *= 4;
      t[i][j] = t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / (factor - 1);
      double err = std::max(std::abs(t[i][j] - t[i][j - 1]), std::abs(t[i][j] - t[i - 1][j - 1]));
      if (err <= best.error) best = {t[i][j], err};
    }
    if (std::abs(t[i][i] - t[i - 1][i - 1]) >= 2 * best.error) break;
  }
  if (!std::isfinite(std::abs(best.value))) throw std::runtime_error("derivative estimation failed (non-finite values)");
  return best;
}

struct RescaleCheckRow {
  complex z;
  complex lhs;  // g^m (g^n)^(k)(z), numerically differentiated
  complex rhs;  // F(z0 + rho z), closed form
  double deviation;
};

struct RescaleCheckReport {
  std::vector<RescaleCheckRow> rows;
  double max_deviation = 0;
  double tol = 0;
  bool pass() const { return max_deviation <= tol; }
};

/// Compares g^m (g^n)^(k) for the rescaled g against F(z0 + rho z). The left
/// side differentiates g numerically, so it is independent of the closed
/// form on the right; deviations are relative to |rhs|.
inline RescaleCheckReport monomial_rescale_numeric_check(const Sample& f, const MonomialSpec& spec,
                                                         const RescaleSpec& rs, const std::vector<complex>& points,
                                                         double tol) {
  spec.validate();
  rs.validate(spec);
  if (!(tol > 0)) throw std::invalid_argument("rescale check: tolerance must be positive");
  Sample F = f.monomial(spec);
  Evaluable g = zalcman_rescale(Evaluable::from(f), rs);
  int n = spec.n;
  auto gn = [&g, n](complex z) { return std::pow(g.value(z), n); };
  RescaleCheckReport rep;
  rep.tol = tol;
  for (complex z : points) {
    // the stencil reaches k h / 2 from z; keep it within a quarter of the analytic scale
    double h = 0.5 * g.scale(z) / spec.k;
    if (!(h > 1e-8)) throw std::runtime_error("derivative estimation failed: sample point too close to a pole");
    complex lhs = std::pow(g.value(z), spec.m) * richardson_derivative(gn, z, spec.k, h).value;
    complex rhs = F.value(rs.z0 + rs.rho * z);
    double dev = std::abs(lhs - rhs) / std::max(std::abs(rhs), std::numeric_limits<double>::min());
    rep.rows.push_back({z, lhs, rhs, dev});
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  return rep;
}

/// Exact rational path: deviation is zero exactly when the identity holds.
inline RescaleCheckReport monomial_rescale_numeric_check(const RationalFunction& f, const MonomialSpec& spec,
                                                         const GaussianRational& z0, const mpq_class& t) {
  auto r = zalcman_rescale_exact(f, spec, z0, t);
  RescaleCheckReport rep;
  rep.max_deviation = r.equal ? 0 : std::numeric_limits<double>::infinity();
  return rep;
}

// ---------------------------------------------------------------- zero scans

namespace detail {

struct TargetNumeric {
  NumericPolynomial num, den, dnum, dden;
  std::vector<DivisorPoint> poles;

  explicit TargetNumeric(const ShareTarget& h) {
    RationalFunction r = h.as_function();
    num = r.numerator().to_numeric();
    den = r.denominator().to_numeric();
    dnum = r.numerator().derivative().to_numeric();
    dden = r.denominator().derivative().to_numeric();
    if (!r.denominator().is_constant()) {
      for (const auto& root : root_find(r.denominator(), 1e-12).roots) poles.push_back({root.location, root.multiplicity});
    }
  }
  complex value(complex z) const { return num(z) / den(z); }
  complex derivative(complex z) const {
    complex d = den(z);
    return (dnum(z) * d - num(z) * dden(z)) / (d * d);
  }
};

// f - h as a zero-search target, poles of both included.
inline ZeroTarget difference_target(const Sample& f, const ShareTarget& h, const Rect& box) {
  auto hn = std::make_shared<TargetNumeric>(h);
  double reach = std::hypot(std::max(std::abs(box.x0), std::abs(box.x1)), std::max(std::abs(box.y0), std::abs(box.y1)));
  ZeroTarget t{[f, hn](complex z) { return f.value(z) - hn->value(z); },
               [f, hn](complex z) { return f.derivative(z) - hn->derivative(z); },
               f.poles_in_disk(reach)};
  for (const auto& p : hn->poles) {
    auto same = std::find_if(t.poles.begin(), t.poles.end(), [&](const DivisorPoint& q) { return std::abs(q.z - p.z) < 1e-9; });
    if (same == t.poles.end()) t.poles.push_back(p);
  }
  return t;
}

inline ZeroSearchResult zeros_in_region(const Sample& f, const ShareTarget& h, const Region& region, double tol) {
  Rect box = region.bounding_box();
  ZeroSearchResult r = find_zeros(difference_target(f, h, box), box, tol);
  std::erase_if(r.zeros, [&](const LocatedZero& z) { return !region.contains(z.z); });
  return r;
}

}  // namespace detail

struct BoundZero {
  complex z;
  int multiplicity;
  double power_derivative_abs;  // |(f^n)^(k)(z)|
};

struct Theorem4Report {
  std::string path;  // "exact" or "argument-principle"
  std::vector<BoundZero> zeros;
  double a_min = 0;  // smallest admissible A; 0 when there are no zeros
  std::vector<Rect> flagged;

  void write_csv(std::ostream& os) const {
    os << "re,im,|monomial_deriv|\n";
    for (const auto& z : zeros) {
      os << io::fmt12(z.z.real()) << ',' << io::fmt12(z.z.imag()) << ',' << io::fmt12(z.power_derivative_abs) << '\n';
    }
  }
};

/// Zeros of F - h in region with |(f^n)^(k)| at each. Rational f goes through
/// exact roots of the reduced numerator unless force_numeric is set;
/// exponential f uses argument-principle subdivision with Newton polish.
inline Theorem4Report theorem4_bound_scan(const Sample& f, const MonomialSpec& spec, const ShareTarget& h,
                                          const Region& region, double tol, bool force_numeric = false) {
  spec.validate();
  if (!(tol > 0)) throw std::invalid_argument("bound scan: tolerance must be positive");
  if (f.is_constant()) throw std::invalid_argument("bound scan: f must be nonconstant");
  bool exact = !f.exponent().has_value() && !force_numeric;
  if (region.contains(0)) {
    RationalFunction hr = h.as_function();
    bool bad = exact ? (hr.numerator()(GaussianRational()).is_zero() || hr.denominator()(GaussianRational()).is_zero())
                     : [&] {
                         double v = std::abs(detail::TargetNumeric(h).value(0));
                         return !(v >= tol && v <= 1 / tol);
                       }();
    if (bad) throw std::invalid_argument("bound scan: h must have no zero or pole at the origin");
  }
  Sample F = f.monomial(spec);
  Sample D = f.power_derivative(spec.n, spec.k);
  Theorem4Report rep;
  auto add = [&](complex z, int mult) {
    rep.zeros.push_back({z, mult, std::abs(D.value(z))});
    rep.a_min = std::max(rep.a_min, rep.zeros.back().power_derivative_abs);
  };
  if (exact) {
    rep.path = "exact";
    Polynomial num = difference_numerator(F.form(), h);
    if (!num.is_constant()) {
      for (const auto& r : root_find(num, tol).roots) {
        if (region.contains(r.location)) add(r.location, r.multiplicity);
      }
    }
  } else {
    rep.path = "argument-principle";
    auto found = detail::zeros_in_region(F, h, region, tol);
    for (const auto& z : found.zeros) add(z.z, z.multiplicity);
    rep.flagged = std::move(found.flagged);
  }
  // by real part, then imaginary part; reals within tol count as equal so
  // zeros on a common vertical line stay in order
  std::sort(rep.zeros.begin(), rep.zeros.end(), [tol](const BoundZero& a, const BoundZero& b) {
    double scale = std::max({1.0, std::abs(a.z), std::abs(b.z)});
    if (std::abs(a.z.real() - b.z.real()) > tol * scale) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  return rep;
}

struct NumericShareReport {
  bool subset = true;
  std::vector<LocatedZero> f_zeros;
  std::vector<LocatedZero> g_zeros;
  std::vector<complex> unmatched;  // zeros of f - omega with no zero of g - omega within tol
  std::vector<Rect> flagged;
  bool reliable() const { return flagged.empty(); }
};

/// Numeric counterpart of partial_share_check on a region: every zero of
/// f - omega must lie within tol of a zero of g - omega.
inline NumericShareReport numeric_partial_share_check(const Sample& f, const Sample& g, const ShareTarget& omega,
                                                      const Region& region, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("share check: tolerance must be positive");
  NumericShareReport rep;
  auto fz = detail::zeros_in_region(f, omega, region, tol);
  // g's zeros are searched on a slightly larger box so boundary matches are not lost
  Rect outer = region.bounding_box().expanded(0.01 * region.bounding_box().size());
  auto gz = find_zeros(detail::difference_target(g, omega, outer), outer, tol);
  rep.f_zeros = std::move(fz.zeros);
  rep.g_zeros = std::move(gz.zeros);
  rep.flagged = std::move(fz.flagged);
  rep.flagged.insert(rep.flagged.end(), gz.flagged.begin(), gz.flagged.end());
  for (const auto& a : rep.f_zeros) {
    bool hit = std::any_of(rep.g_zeros.begin(), rep.g_zeros.end(),
                           [&](const LocatedZero& b) { return std::abs(a.z - b.z) <= tol; });
    if (!hit) rep.unmatched.push_back(a.z);
  }
  rep.subset = rep.unmatched.empty();
  return rep;
}

}  // namespace nevlab
