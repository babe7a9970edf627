#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "io.hpp"
#include "quadrature.hpp"
#include "sample.hpp"
#include "value_distribution.hpp"

namespace nevlab {

inline constexpr double kPoleGuard = 1e-6;  // radii closer than this to a pole modulus are nudged

/// Which points a counting function sees, and how they are weighted.
struct CountingMode {
  enum Kind { with_multiplicity, distinct, distinct_at_most, distinct_at_least } kind = with_multiplicity;
  int bound = 0;

  static CountingMode multiplicity() { return {with_multiplicity, 0}; }
  static CountingMode distinct_points() { return {distinct, 0}; }
  static CountingMode at_most(int k) { return {distinct_at_most, k}; }
  static CountingMode at_least(int k) { return {distinct_at_least, k}; }

  /// Weight of a point of the given multiplicity.
  int weight(int mult) const {
    switch (kind) {
      case with_multiplicity: return mult;
      case distinct: return 1;
      case distinct_at_most: return mult <= bound ? 1 : 0;
      case distinct_at_least: return mult >= bound ? 1 : 0;
    }
    return 0;
  }
};

/// Sum over points 0 < |b| <= r of weight log(r/|b|), plus weight(origin) log r.
inline double counting_N(const std::vector<DivisorPoint>& points, double r, CountingMode mode) {
  if (!(r >= 1)) throw std::domain_error("counting_N: radius must be >= 1");
  double sum = 0;
  for (const auto& p : points) {
    double a = std::abs(p.z);
    if (a > r) continue;
    int w = mode.weight(p.multiplicity);
    if (w == 0) continue;
    sum += w * (a == 0 ? std::log(r) : std::log(r / a));
  }
  return sum;
}

/// Poles of f, or a-points of f.
struct CountingTarget {
  bool poles = true;
  GaussianRational a;

  static CountingTarget of_poles() { return {true, {}}; }
  static CountingTarget zeros_of_shift(GaussianRational a) { return {false, std::move(a)}; }
};

inline double counting_N(const Sample& f, double r, CountingMode mode, const CountingTarget& of) {
  if (!(r >= 1)) throw std::domain_error("counting_N: radius must be >= 1");
  return counting_N(of.poles ? f.poles_in_disk(r) : f.a_points_in_disk(r, of.a), r, mode);
}

/// Moves r outward by the guard until no listed point has modulus within it.
struct NudgedRadius {
  double r;
  bool nudged;
};

inline NudgedRadius nudge_radius(double r, const std::vector<DivisorPoint>& points, double delta = kPoleGuard) {
  NudgedRadius out{r, false};
  for (bool again = true; again;) {
    again = false;
    for (const auto& p : points) {
      if (std::abs(std::abs(p.z) - out.r) < delta) {
        out.r = std::abs(p.z) + delta;
        out.nudged = again = true;
      }
    }
  }
  return out;
}

/// (1/2pi) of the integral of max(0, log|f(r e^{it})|) over a full turn.
/// Angles in breakpoints (in [0, 2pi)) start on panel edges.
template <class LogAbs>
double proximity_m(LogAbs log_abs, double r, double tol, std::vector<double> breakpoints = {}) {
  if (!(r > 0)) throw std::domain_error("proximity_m: radius must be positive");
  if (!(tol > 0)) throw std::invalid_argument("proximity_m: tolerance must be positive");
  auto integrand = [&](double t) { return std::max(0.0, log_abs(std::polar(r, t))); };
  auto res = adaptive_integrate(integrand, 0.0, 2 * std::numbers::pi, tol * 2 * std::numbers::pi, 16, 200000,
                                std::move(breakpoints));
  return res.value / (2 * std::numbers::pi);
}

/// Zeros and poles near the circle make log|f| spike over an arc too narrow
/// for the initial panels to notice, so their angles seed the panel edges.
inline double proximity_m(const Sample& f, double r, double tol) {
  auto poles = f.poles_in_disk(r + 1);
  for (const auto& p : poles) {
    if (std::abs(std::abs(p.z) - r) < kPoleGuard) {
      throw std::domain_error("proximity_m: pole within " + std::to_string(kPoleGuard) + " of the circle |z| = " +
                              std::to_string(r));
    }
  }
  std::vector<double> breaks;
  auto seed = [&](const std::vector<DivisorPoint>& pts) {
    for (const auto& p : pts) {
      if (std::abs(std::abs(p.z) - r) < 0.25 * r && p.z != complex(0)) {
        double t = std::arg(p.z);
        breaks.push_back(t < 0 ? t + 2 * std::numbers::pi : t);
      }
    }
  };
  seed(poles);
  if (!f.is_constant()) seed(f.zeros_in_disk(1.25 * r));
  return proximity_m([&](complex z) { return f.log_abs(z); }, r, tol, std::move(breaks));
}

struct ProfileRow {
  double r;       // requested radius
  double r_used;  // after pole nudging
  double m, N, Nbar, T;
};

/// m, N, Nbar and T = m + N at one radius, nudging off poles first.
inline ProfileRow characteristic_row(const Sample& f, double r, double tol) {
  if (!(r >= 1)) throw std::domain_error("characteristic_T: radius must be >= 1");
  auto guard = nudge_radius(r, f.poles_in_disk(r + 1));
  ProfileRow row{r, guard.r, 0, 0, 0, 0};
  auto poles = f.poles_in_disk(guard.r);
  row.m = proximity_m(f, guard.r, tol);
  row.N = counting_N(poles, guard.r, CountingMode::multiplicity());
  row.Nbar = counting_N(poles, guard.r, CountingMode::distinct_points());
  row.T = row.m + row.N;
  return row;
}

inline double characteristic_T(const Sample& f, double r, double tol) { return characteristic_row(f, r, tol).T; }

inline void validate_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("radius grid is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 1)) throw std::invalid_argument("radius grid must satisfy r >= 1");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw std::invalid_argument("radius grid must be strictly increasing");
  }
}

/// steps radii from rmin to rmax inclusive, evenly spaced.
inline std::vector<double> linear_grid(double rmin, double rmax, int steps) {
  if (steps < 1) throw std::invalid_argument("radius grid needs at least one step");
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) out.push_back(steps == 1 ? rmin : rmin + (rmax - rmin) * i / (steps - 1));
  validate_radii(out);
  return out;
}

struct NevanlinnaProfile {
  std::vector<ProfileRow> rows;

  void write_csv(std::ostream& os) const {
    os << "# log=natural\n";
    os << "r,m,N,Nbar,T\n";
    for (const auto& row : rows) {
      os << io::fmt12(row.r_used) << ',' << io::fmt12(row.m) << ',' << io::fmt12(row.N) << ','
         << io::fmt12(row.Nbar) << ',' << io::fmt12(row.T) << '\n';
    }
  }
};

inline NevanlinnaProfile nevanlinna_profile(const Sample& f, const std::vector<double>& radii, double tol) {
  validate_radii(radii);
  NevanlinnaProfile p;
  for (double r : radii) p.rows.push_back(characteristic_row(f, r, tol));
  return p;
}

// ---------------------------------------------------------------------------
// First fundamental theorem.

struct FftRow {
  double r, T_f, T_shift_inverse, d;
};

struct FftReport {
  std::vector<FftRow> rows;
  double first_quartile_max = 0;
  double last_quartile_max = 0;
  bool bounded = false;
};

/// d(r) = |T(r, 1/(f-a)) - T(r, f)|; bounded when the last-quartile max does
/// not exceed the first-quartile max by more than growth_tol.
inline FftReport fft_check(const Sample& f, const GaussianRational& a, const std::vector<double>& radii, double tol,
                           double growth_tol = 0.05) {
  validate_radii(radii);
  Sample g = f.shift(a);
  if (g.form().is_zero()) throw std::domain_error("fft_check: f is identically a");
  Sample inv = g.reciprocal();
  FftReport rep;
  for (double r : radii) {
    double tf = characteristic_T(f, r, tol);
    double ti = characteristic_T(inv, r, tol);
    rep.rows.push_back({r, tf, ti, std::abs(ti - tf)});
  }
  std::size_t q = std::max<std::size_t>(1, rep.rows.size() / 4);
  for (std::size_t i = 0; i < q; ++i) {
    rep.first_quartile_max = std::max(rep.first_quartile_max, rep.rows[i].d);
    rep.last_quartile_max = std::max(rep.last_quartile_max, rep.rows[rep.rows.size() - 1 - i].d);
  }
  rep.bounded = rep.last_quartile_max <= rep.first_quartile_max + growth_tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Asymptotic ratio checks with the C log r / T slack surrogate.

struct SlackFit {
  double C = 0;
  bool pass = true;
};

/// Fits C on the first half of the grid as the smallest constant with
/// ratio >= target - C log r / T there, then tests the same bound on the
/// upper half.
inline SlackFit fit_slack(const std::vector<double>& r, const std::vector<double>& T, const std::vector<double>& ratio,
                          double target) {
  SlackFit fit;
  const std::size_t n = r.size(), half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double lg = std::log(r[i]);
    if (lg <= 0) continue;
    fit.C = std::max(fit.C, (target - ratio[i]) * T[i] / lg);
  }
  for (std::size_t i = half; i < n; ++i) {
    double slack = T[i] > 0 ? fit.C * std::log(r[i]) / T[i] : 0;
    if (ratio[i] < target - slack - 1e-12) fit.pass = false;
  }
  return fit;
}

struct SftRow {
  double r, T, Nbar_poles, Nbar_zeros, Nbar_omega, ratio;
};

struct SftReport {
  std::vector<SftRow> rows;
  SlackFit slack;
};

/// Tabulates [Nbar(r,F) + Nbar(r,1/F) + Nbar(r,1/(F-omega))] / T(r,F) against 1.
inline SftReport sft_three_functions_check(const Sample& F, const ShareTarget& omega, const std::vector<double>& radii,
                                           double tol) {
  validate_radii(radii);
  Sample diff = F;
  if (omega.is_constant()) {
    diff = F.shift(omega.constant());
  } else {
    if (F.exponent()) throw std::invalid_argument("sft: a rational omega needs a rational F");
    diff = Sample::rational(F.form() - omega.function(), F.id() + "-omega");
  }
  if (diff.form().is_zero()) throw std::domain_error("sft: F is identically omega");
  SftReport rep;
  std::vector<double> rs, Ts, ratios;
  for (double r : radii) {
    ProfileRow row = characteristic_row(F, r, tol);
    double R = row.r_used;
    double zeros = counting_N(F.zeros_in_disk(R), R, CountingMode::distinct_points());
    double omega_pts = counting_N(diff.zeros_in_disk(R), R, CountingMode::distinct_points());
    double ratio = row.T > 0 ? (row.Nbar + zeros + omega_pts) / row.T : 0;
    rep.rows.push_back({R, row.T, row.Nbar, zeros, omega_pts, ratio});
    rs.push_back(R);
    Ts.push_back(row.T);
    ratios.push_back(ratio);
  }
  rep.slack = fit_slack(rs, Ts, ratios, 1.0);
  return rep;
}

struct Theorem1Row {
  double r, T, Nbar, q;
};

struct Theorem1Report {
  double c_star = 0;
  std::vector<Theorem1Row> rows;
  SlackFit slack;
  std::string verdict() const { return slack.pass ? "PASS" : "ATTENTION"; }
};

/// q(r) = Nbar(r, 1/(F-omega)) / T(r, F) against c* = k / (2(2k+2)).
inline Theorem1Report theorem1_inequality_report(const Sample& f, const MonomialSpec& spec,
                                                 const GaussianRational& omega, const std::vector<double>& radii,
                                                 double tol) {
  if (!f.is_transcendental()) throw std::invalid_argument("theorem1: f must be a transcendental catalog sample");
  MonomialSpec s = spec;
  s.enforce_paper_bound = true;
  s.validate();
  if (omega.is_zero()) throw std::invalid_argument("theorem1: omega must be nonzero");
  validate_radii(radii);
  Sample F = f.monomial(s);
  Sample diff = F.shift(omega);
  if (diff.form().is_zero()) throw std::domain_error("theorem1: F is identically omega");
  Theorem1Report rep;
  rep.c_star = static_cast<double>(s.k) / (2.0 * (2 * s.k + 2));
  std::vector<double> rs, Ts, qs;
  for (double r : radii) {
    ProfileRow row = characteristic_row(F, r, tol);
    double R = row.r_used;
    double nbar = counting_N(diff.zeros_in_disk(R), R, CountingMode::distinct_points());
    double q = row.T > 0 ? nbar / row.T : 0;
    rep.rows.push_back({R, row.T, nbar, q});
    rs.push_back(R);
    Ts.push_back(row.T);
    qs.push_back(q);
  }
  rep.slack = fit_slack(rs, Ts, qs, rep.c_star);
  return rep;
}

}  // namespace nevlab
