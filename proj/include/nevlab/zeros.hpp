#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sample.hpp"

namespace nevlab {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0, x1, y0, y1;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double size() const { return std::max(width(), height()); }
  complex center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(complex z, double margin = 0) const {
    return z.real() >= x0 - margin && z.real() <= x1 + margin && z.imag() >= y0 - margin && z.imag() <= y1 + margin;
  }
  Rect expanded(double d) const { return {x0 - d, x1 + d, y0 - d, y1 + d}; }

  /// Parses "x0,x1,y0,y1".
  static Rect parse(const std::string& text) {
    std::istringstream is(text);
    std::array<double, 4> v{};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!(is >> v[i])) throw std::invalid_argument("region: expected \"x0,x1,y0,y1\", got \"" + text + "\"");
      if (i < 3) {
        char comma = 0;
        if (!(is >> comma) || comma != ',') {
          throw std::invalid_argument("region: expected \"x0,x1,y0,y1\", got \"" + text + "\"");
        }
      }
    }
    is >> std::ws;
    if (!is.eof()) throw std::invalid_argument("region: trailing characters in \"" + text + "\"");
    Rect r{v[0], v[1], v[2], v[3]};
    if (!(r.x1 > r.x0 && r.y1 > r.y0)) throw std::invalid_argument("region: empty rectangle \"" + text + "\"");
    return r;
  }
};

/// A rectangle, or the closed disk |z - center| <= radius.
struct Region {
  std::optional<Rect> rect;
  complex center{0, 0};
  double radius = 0;

  static Region box(Rect r) { return {r, {0, 0}, 0}; }
  static Region disk(double radius, complex center = 0) {
    if (!(radius > 0)) throw std::invalid_argument("region: disk radius must be positive");
    return {std::nullopt, center, radius};
  }

  Rect bounding_box() const {
    if (rect) return *rect;
    return {center.real() - radius, center.real() + radius, center.imag() - radius, center.imag() + radius};
  }
  bool contains(complex z, double margin = 0) const {
    return rect ? rect->contains(z, margin) : std::abs(z - center) <= radius + margin;
  }
};

/// Analytic-except-at-known-poles function for argument-principle search.
struct ZeroTarget {
  std::function<complex(complex)> value;
  std::function<complex(complex)> derivative;
  std::vector<DivisorPoint> poles;  // all poles in the search box, with multiplicity
};

struct LocatedZero {
  complex z;
  int multiplicity;
};

struct ZeroSearchResult {
  std::vector<LocatedZero> zeros;
  std::vector<Rect> flagged;  // cells whose boundary integral could not be trusted
};

namespace detail {

// Winding number of value along the boundary of cell, or nothing when the
// boundary passes too close to a zero or pole for the count to be reliable.
inline std::optional<int> winding(const ZeroTarget& f, const Rect& c) {
  const std::array<complex, 5> corner{complex(c.x0, c.y0), complex(c.x1, c.y0), complex(c.x1, c.y1),
                                      complex(c.x0, c.y1), complex(c.x0, c.y0)};
  double total = 0;
  bool ok = true;
  // adaptive: refine a segment until the argument change across it is small
  std::function<void(complex, complex, complex, complex, int)> walk = [&](complex a, complex fa, complex b, complex fb,
                                                                           int depth) {
    if (!ok) return;
    double d = std::arg(fb / fa);
    if (std::abs(d) < std::numbers::pi / 4) {
      total += d;
      return;
    }
    if (depth > 40) {
      ok = false;
      return;
    }
    complex m = 0.5 * (a + b);
    complex fm = f.value(m);
    if (!std::isfinite(std::abs(fm)) || fm == complex(0)) {
      ok = false;
      return;
    }
    walk(a, fa, m, fm, depth + 1);
    walk(m, fm, b, fb, depth + 1);
  };
  for (int e = 0; e < 4 && ok; ++e) {
    constexpr int n = 32;
    complex prev = corner[e];
    complex fprev = f.value(prev);
    if (!std::isfinite(std::abs(fprev)) || fprev == complex(0)) return std::nullopt;
    for (int i = 1; i <= n && ok; ++i) {
      complex next = corner[e] + (corner[e + 1] - corner[e]) * (static_cast<double>(i) / n);
      complex fnext = f.value(next);
      if (!std::isfinite(std::abs(fnext)) || fnext == complex(0)) return std::nullopt;
      walk(prev, fprev, next, fnext, 0);
      prev = next;
      fprev = fnext;
    }
  }
  if (!ok) return std::nullopt;
  double turns = total / (2 * std::numbers::pi);
  long rounded = std::lround(turns);
  if (std::abs(turns - static_cast<double>(rounded)) > 0.05) return std::nullopt;
  return static_cast<int>(rounded);
}

inline std::optional<int> zero_count(const ZeroTarget& f, const Rect& c) {
  auto w = winding(f, c);
  if (!w) return std::nullopt;
  int poles = 0;
  for (const auto& p : f.poles) {
    if (c.contains(p.z)) poles += p.multiplicity;
  }
  return *w + poles;
}

inline std::optional<complex> newton(const ZeroTarget& f, complex z, const Rect& cell, double tol) {
  for (int it = 0; it < 60; ++it) {
    complex d = f.derivative(z);
    if (d == complex(0) || !std::isfinite(std::abs(d))) return std::nullopt;
    complex step = f.value(z) / d;
    z -= step;
    if (!cell.contains(z, 0.25 * cell.size())) return std::nullopt;
    if (std::abs(step) <= 1e-3 * tol * std::max(1.0, std::abs(z))) return z;
  }
  return std::nullopt;
}

struct Cluster {
  complex center;
  double spread;  // max_j |p_j|^{1/j}, p_j the power sums about the center
};

// Contour moments on the circle |z - c| = r: the power sums of the zeros
// inside about their centroid all vanish exactly when they coincide.
// Returns nothing unless the circle encloses exactly count zeros and no poles.
inline std::optional<Cluster> cluster_moments(const ZeroTarget& f, complex c, double r, int count) {
  for (const auto& p : f.poles) {
    if (std::abs(p.z - c) <= 1.5 * r) return std::nullopt;
  }
  constexpr int n = 256;
  std::vector<complex> s(static_cast<std::size_t>(count) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    complex u = std::polar(1.0, 2 * std::numbers::pi * i / n);
    complex z = c + r * u;
    complex v = f.value(z);
    complex q = f.derivative(z) / v;
    if (!std::isfinite(std::abs(q))) return std::nullopt;
    // (1/2 pi i) dz = r u dtheta / (2 pi)
    complex w = q * r * u / static_cast<double>(n);
    complex powr = 1;
    for (auto& sj : s) {
      sj += w * powr;
      powr *= r * u;
    }
  }
  if (std::abs(s[0] - static_cast<double>(count)) > 0.01) return std::nullopt;
  complex shift = s[1] / static_cast<double>(count);
  // power sums about the centroid from those about c, via the binomial expansion
  double spread = 0;
  for (int j = 2; j <= count; ++j) {
    complex pj = 0;
    double binom = 1;
    for (int i = 0; i <= j; ++i) {
      pj += binom * s[static_cast<std::size_t>(i)] * std::pow(-shift, j - i);
      binom = binom * (j - i) / (i + 1);
    }
    spread = std::max(spread, std::pow(std::abs(pj), 1.0 / j));
  }
  return Cluster{c + shift, spread};
}

}  // namespace detail

/// Zeros of f in box by argument-principle counting on a quadtree. Cells
/// holding one zero are finished by Newton. Cells holding several zeros are
/// tested for a coincident cluster by contour moments, which locate a
/// multiple zero at its centroid well below the noise floor of direct
/// evaluation. Zeros within cluster_resolution of each other are reported
/// as one point with their total multiplicity: a c-fold zero in double
/// precision is only resolved to about (eps * cond)^{1/c}, so closer zeros
/// cannot be told apart from a multiple one. Remaining cells are split
/// down to side tol. Splits are
/// off-center and retried at other offsets when a child boundary passes
/// through a zero or pole; cells that stay ill-conditioned are flagged.
inline ZeroSearchResult find_zeros(const ZeroTarget& f, const Rect& box, double tol, double cluster_resolution = 1e-4) {
  if (!(tol > 0)) throw std::invalid_argument("find_zeros: tolerance must be positive");
  ZeroSearchResult out;
  struct Cell {
    Rect rect;
    int count;
  };
  std::vector<Cell> stack;
  auto top = detail::zero_count(f, box);
  if (!top) {
    out.flagged.push_back(box);
    return out;
  }
  if (*top > 0) stack.push_back({box, *top});
  constexpr std::array<double, 5> offsets{0.5 + 0.0137, 0.5 - 0.0291, 0.5 + 0.0413, 0.5 - 0.0557, 0.5 + 0.0719};
  while (!stack.empty()) {
    Cell cell = stack.back();
    stack.pop_back();
    if (cell.count == 1) {
      if (auto z = detail::newton(f, cell.rect.center(), cell.rect, tol); z && cell.rect.contains(*z)) {
        out.zeros.push_back({*z, 1});
        continue;
      }
    }
    if (cell.count >= 2) {
      double radius = 0.75 * std::hypot(cell.rect.width(), cell.rect.height());
      auto cl = detail::cluster_moments(f, cell.rect.center(), radius, cell.count);
      if (cl && cl->spread <= std::max(tol, cluster_resolution) && cell.rect.contains(cl->center)) {
        out.zeros.push_back({cl->center, cell.count});
        continue;
      }
    }
    if (cell.rect.size() < tol) {
      complex z = cell.rect.center();
      if (cell.count == 1) {
        if (auto polished = detail::newton(f, z, cell.rect.expanded(tol), tol)) z = *polished;
      }
      out.zeros.push_back({z, cell.count});
      continue;
    }
    bool split = false;
    for (double t : offsets) {
      const Rect& r = cell.rect;
      double xm = r.x0 + t * r.width(), ym = r.y0 + (1 - t) * r.height();
      std::array<Rect, 4> kids{Rect{r.x0, xm, r.y0, ym}, Rect{xm, r.x1, r.y0, ym}, Rect{r.x0, xm, ym, r.y1},
                               Rect{xm, r.x1, ym, r.y1}};
      std::array<int, 4> counts{};
      bool good = true;
      int sum = 0;
      for (std::size_t i = 0; i < 4 && good; ++i) {
        auto c = detail::zero_count(f, kids[i]);
        if (!c || *c < 0) {
          good = false;
        } else {
          counts[i] = *c;
          sum += *c;
        }
      }
      if (!good || sum != cell.count) continue;
      for (std::size_t i = 0; i < 4; ++i) {
        if (counts[i] > 0) stack.push_back({kids[i], counts[i]});
      }
      split = true;
      break;
    }
    if (!split) out.flagged.push_back(cell.rect);
  }
  return out;
}

}  // namespace nevlab
