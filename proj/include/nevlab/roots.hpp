#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "polynomial.hpp"

namespace nevlab {

using complex = std::complex<double>;

struct RootFindError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericRoot {
  complex location;
  int multiplicity;
  double error_bound;  // a root of the exact polynomial lies within this radius
};

struct NumericRootSet {
  std::vector<NumericRoot> roots;

  int total_multiplicity() const {
    int s = 0;
    for (const auto& r : roots) s += r.multiplicity;
    return s;
  }
};

namespace detail {

inline double inclusion_radius(const NumericPolynomial& p, complex z) {
  complex dp = p.derivative_at(z);
  double eps_floor = 8 * std::numeric_limits<double>::epsilon() * (1 + std::abs(z));
  if (dp == complex(0)) return std::numeric_limits<double>::infinity();
  return std::max(p.degree() * std::abs(p(z) / dp), eps_floor);
}

// Starting points from the upper convex hull of (i, log|c_i|): each hull
// edge contributes as many points as its width, on a circle whose radius
// matches the root moduli that edge predicts.
inline std::vector<complex> newton_polygon_start(const std::vector<complex>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<int> hull;
  auto lg = [&](int i) { return c[i] == complex(0) ? -std::numeric_limits<double>::infinity() : std::log(std::abs(c[i])); };
  for (int i = 0; i <= d; ++i) {
    if (c[i] == complex(0)) continue;
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], b = hull.back();
      // drop b if it lies on or below the segment a..i
      if ((lg(b) - lg(a)) * (i - a) <= (lg(i) - lg(a)) * (b - a)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<complex> z;
  z.reserve(d);
  z.assign(hull.front(), complex(0));  // vanishing low coefficients: exact roots at the origin
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    int a = hull[e], b = hull[e + 1];
    double radius = std::exp((lg(a) - lg(b)) / (b - a));
    for (int j = 0; j < b - a; ++j) {
      z.push_back(std::polar(radius, 2 * std::numbers::pi * j / (b - a) + 2 * std::numbers::pi * e / d + 0.4));
    }
  }
  return z;
}

/// Aberth-Ehrlich simultaneous iteration for a squarefree polynomial.
/// Roots stop moving individually once their Newton correction is at
/// rounding level.
inline std::vector<complex> aberth(const NumericPolynomial& p, int max_iterations = 2000) {
  const int d = p.degree();
  const auto& c = p.coefficients();
  if (d < 1) return {};
  if (d == 1) return {-c[0] / c[1]};

  std::vector<complex> z = newton_polygon_start(c);
  std::vector<bool> done(d, false);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (int i = 0; i < d; ++i) {
      if (done[i]) continue;
      complex pz = p(z[i]);
      if (pz == complex(0)) {
        done[i] = true;
        continue;
      }
      complex ratio = pz / p.derivative_at(z[i]);
      complex sum = 0;
      for (int j = 0; j < d; ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      complex step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[i] -= step;
      if (std::abs(step) <= 4 * eps * std::abs(z[i])) {
        done[i] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }
  return z;
}

inline complex newton_polish(const NumericPolynomial& p, complex z, int steps = 3) {
  for (int s = 0; s < steps; ++s) {
    complex dp = p.derivative_at(z);
    if (dp == complex(0)) break;
    complex next = z - p(z) / dp;
    if (std::abs(p(next)) > std::abs(p(z))) break;
    z = next;
  }
  return z;
}

// Exact p(z)/p'(z) at double points. Coefficients are cleared to Gaussian
// integers once; a double point is (a + bi)/2^e with integer a, b, so Horner
// runs in mpz only and the ratio carries no cancellation error.
class ExactNewtonRatio {
public:
  explicit ExactNewtonRatio(const Polynomial& p) {
    mpz_class lcm = 1;
    for (const auto& c : p.coefficients()) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.re().get_den_mpz_t());
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.im().get_den_mpz_t());
    }
    for (const auto& c : p.coefficients()) {
      mpq_class re = c.re() * lcm, im = c.im() * lcm;
      p_.push_back({re.get_num(), im.get_num()});
    }
    for (std::size_t i = 1; i < p_.size(); ++i) dp_.push_back({p_[i].re * i, p_[i].im * i});
  }

  complex operator()(complex z) const {
    int e = 0;
    for (double x : {z.real(), z.imag()}) {
      if (x == 0) continue;
      int ex;
      std::frexp(x, &ex);
      e = std::max(e, 53 - ex);
    }
    GaussInt w{mpz_class(std::ldexp(z.real(), e)), mpz_class(std::ldexp(z.imag(), e))};
    GaussInt a = horner(p_, w, e);
    GaussInt b = horner(dp_, w, e);
    // p/p' = (a/b) 2^{-e}
    if (b.re == 0 && b.im == 0) return {std::numeric_limits<double>::infinity(), 0};
    auto [ar, ai, sa] = to_doubles(a);
    auto [br, bi, sb] = to_doubles(b);
    complex r = complex(ar, ai) / complex(br, bi);
    long shift = sa - sb - e;
    return {std::ldexp(r.real(), static_cast<int>(shift)), std::ldexp(r.imag(), static_cast<int>(shift))};
  }

private:
  struct GaussInt {
    mpz_class re, im;
  };

  // sum c_i w^i 2^{e(n-i)} for n = deg
  static GaussInt horner(const std::vector<GaussInt>& c, const GaussInt& w, int e) {
    GaussInt acc{0, 0};
    for (std::size_t i = c.size(); i-- > 0;) {
      mpz_class re = acc.re * w.re - acc.im * w.im;
      mpz_class im = acc.re * w.im + acc.im * w.re;
      acc.re = re + (c[i].re << (e * (c.size() - 1 - i)));
      acc.im = im + (c[i].im << (e * (c.size() - 1 - i)));
    }
    return acc;
  }

  static std::tuple<double, double, long> to_doubles(const GaussInt& g) {
    long bits = static_cast<long>(std::max(mpz_sizeinbase(g.re.get_mpz_t(), 2), mpz_sizeinbase(g.im.get_mpz_t(), 2)));
    long s = std::max(0L, bits - 60);
    mpz_class re = g.re >> s, im = g.im >> s;
    return {re.get_d(), im.get_d(), s};
  }

  std::vector<GaussInt> p_, dp_;
};

struct PolishedRoot {
  complex location;
  double radius;  // a root of p lies within this distance (inclusion theorem with exact residual)
};

inline PolishedRoot exact_polish(const ExactNewtonRatio& newton, int degree, complex z, int steps = 8) {
  const double d = degree;
  complex ratio = newton(z);
  for (int s = 0; s < steps && std::abs(ratio) > 0; ++s) {
    complex next = z - ratio;
    complex next_ratio = newton(next);
    if (!(std::abs(next_ratio) < std::abs(ratio))) break;
    z = next;
    ratio = next_ratio;
  }
  return {z, d * std::abs(ratio)};
}

/// Aberth-Ehrlich continued with exact Newton ratios, for polynomials whose
/// monomial-basis evaluation in double is too noisy to finish the job.
/// Returns the polished roots; stops when every radius is below tol.
inline std::vector<PolishedRoot> exact_aberth(const ExactNewtonRatio& newton, std::vector<complex> z, double tol,
                                              int max_iterations = 500) {
  const std::size_t d = z.size();
  std::vector<PolishedRoot> out(d);
  std::vector<complex> ratio(d);
  for (std::size_t i = 0; i < d; ++i) ratio[i] = newton(z[i]);
  auto certified = [&](std::size_t i) {
    return static_cast<double>(d) * std::abs(ratio[i]) <= tol * std::max(1.0, std::abs(z[i]));
  };
  for (int it = 0; it < max_iterations; ++it) {
    bool all = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (certified(i)) continue;
      all = false;
      complex sum = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      complex step = ratio[i] / (1.0 - ratio[i] * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio[i];
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[i] -= step;
      ratio[i] = newton(z[i]);
    }
    if (all) break;
  }
  for (std::size_t i = 0; i < d; ++i) out[i] = exact_polish(newton, static_cast<int>(d), z[i]);
  return out;
}

}  // namespace detail

/// Roots of p with multiplicities recovered from the exact squarefree
/// decomposition. Throws RootFindError when a root cannot be pinned within
/// tol (relative to max(1, |root|)) or two distinct roots overlap within
/// their error bounds.
inline NumericRootSet root_find(const Polynomial& p, double tol = 1e-10) {
  if (p.degree() < 1) throw std::domain_error("root_find: polynomial must have degree >= 1");
  NumericRootSet out;
  for (const auto& part : squarefree_decompose(p).parts) {
    const Polynomial& q = part.factor;
    detail::ExactNewtonRatio newton(q);
    const int degree = q.degree().value();
    std::vector<detail::PolishedRoot> polished;
    std::vector<complex> start = detail::aberth(q.to_numeric());
    for (complex z : start) polished.push_back(detail::exact_polish(newton, degree, z));
    auto uncertified = [&](const detail::PolishedRoot& r) {
      return !(r.radius <= tol * std::max(1.0, std::abs(r.location)));
    };
    if (std::any_of(polished.begin(), polished.end(), uncertified)) {
      polished = detail::exact_aberth(newton, std::move(start), tol);
    }
    for (const auto& root : polished) {
      if (uncertified(root)) {
        throw RootFindError("root_find: root near " + std::to_string(root.location.real()) + "+" +
                            std::to_string(root.location.imag()) + "i not certified (bound " +
                            std::to_string(root.radius) + ")");
      }
      out.roots.push_back({root.location, part.multiplicity, root.radius});
    }
  }
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    for (std::size_t j = i + 1; j < out.roots.size(); ++j) {
      const auto& a = out.roots[i];
      const auto& b = out.roots[j];
      if (std::abs(a.location - b.location) <= a.error_bound + b.error_bound) {
        throw RootFindError("root_find: ambiguous cluster of distinct roots");
      }
    }
  }
  return out;
}

/// Roots of a double-precision polynomial, without multiplicity recovery;
/// nearby approximations are merged into clusters of radius cluster_tol.
/// Used as an independent cross-check of the exact path.
inline std::vector<NumericRoot> clustered_roots(const NumericPolynomial& p, double cluster_tol) {
  std::vector<NumericRoot> clusters;
  for (complex z : detail::aberth(p)) {
    bool merged = false;
    for (auto& c : clusters) {
      if (std::abs(c.location - z) <= cluster_tol * std::max(1.0, std::abs(z))) {
        c.location = (c.location * static_cast<double>(c.multiplicity) + z) / static_cast<double>(c.multiplicity + 1);
        ++c.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back({z, 1, cluster_tol});
  }
  return clusters;
}

}  // namespace nevlab
