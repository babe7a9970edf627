#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational_function.hpp"

namespace nevlab {

/// Exponents of F = f^m (f^n)^(k).
struct MonomialSpec {
  int m = 1;
  int n = 2;
  int k = 1;
  bool enforce_paper_bound = true;  // n >= k + 1

  void validate() const {
    if (m < 1 || n < 1 || k < 1) throw std::invalid_argument("monomial spec: m, n, k must be positive");
    if (enforce_paper_bound && n < k + 1) {
      throw std::invalid_argument("monomial spec: n >= k + 1 required (n=" + std::to_string(n) +
                                  ", k=" + std::to_string(k) + ")");
    }
  }
  bool satisfies_bound() const { return n >= k + 1; }
};

namespace detail {

// Pieces of (f^n)^(k) for reduced f = u/v: the result is
// numerator / (v^n r^k) with r the squarefree part of v, already coprime.
struct PowerDerivativeParts {
  Polynomial numerator;
  Polynomial v;
  Polynomial radical;
};

inline PowerDerivativeParts power_derivative_parts(const RationalFunction& f, int n, int k) {
  const Polynomial& u = f.numerator();
  const Polynomial& v = f.denominator();
  Polynomial p = u.pow(static_cast<unsigned>(n));
  if (v.is_constant()) {
    for (int j = 0; j < k; ++j) p = p.derivative();
    return {std::move(p), v, Polynomial::constant(1)};
  }
  Polynomial dv = v.derivative();
  Polynomial q = gcd(v, dv);
  Polynomial r = v.exact_div(q);
  Polynomial s = dv.exact_div(q);  // v'/v = s/r
  Polynomial dr = r.derivative();
  Polynomial ns = s * GaussianRational(n);
  // d/dz [p / (v^n r^j)] = (p' r - p (n s + j r')) / (v^n r^{j+1})
  for (int j = 0; j < k; ++j) {
    p = p.derivative() * r - p * (ns + dr * GaussianRational(j));
  }
  return {std::move(p), v, std::move(r)};
}

}  // namespace detail

/// (f^n)^(k), reduced, without any gcd beyond the squarefree part of the denominator.
inline RationalFunction power_derivative(const RationalFunction& f, int n, int k) {
  auto parts = detail::power_derivative_parts(f, n, k);
  return RationalFunction::from_coprime(std::move(parts.numerator),
                                        parts.v.pow(static_cast<unsigned>(n)) * parts.radical.pow(static_cast<unsigned>(k)));
}

/// F = f^m (f^n)^(k). Pole orders add exactly, so the product needs no reduction.
inline RationalFunction build_F(const RationalFunction& f, const MonomialSpec& spec, bool allow_constant = false) {
  spec.validate();
  if (f.is_zero()) throw std::domain_error("build_F: f is identically zero");
  if (!allow_constant && f.is_constant()) throw std::domain_error("build_F: f is constant");
  auto parts = detail::power_derivative_parts(f, spec.n, spec.k);
  if (parts.numerator.is_zero()) return RationalFunction();
  Polynomial num = f.numerator().pow(static_cast<unsigned>(spec.m)) * parts.numerator;
  Polynomial den = parts.v.pow(static_cast<unsigned>(spec.m + spec.n)) * parts.radical.pow(static_cast<unsigned>(spec.k));
  return RationalFunction::from_coprime(std::move(num), std::move(den));
}

/// Structural polynomial g_k of (f^n)^(k) = A^n prod(z-a_i)^{n m_i - k} / prod(z-b_h)^{n l_h + k} * g_k.
struct GkReport {
  Polynomial gk;
  int degree_bound;                    // k (s + t - 1)
  GaussianRational leading_prediction;  // n(M-N) (n(M-N)-1) ... (n(M-N)-k+1)
  bool bound_met;
  std::optional<bool> leading_matches;  // empty when the prediction is zero
};

inline GaussianRational falling_factorial(long x, int k) {
  GaussianRational r(1);
  for (int i = 0; i < k; ++i) r *= GaussianRational(x - i);
  return r;
}

inline GkReport extract_gk(const FactoredRational& f, int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("extract_gk: n, k must be positive");
  RationalFunction fe = expand(f);
  RationalFunction d = power_derivative(fe, n, k);

  // cofactor = d * prod (z-a_i)^{-(n m_i - k)} * prod (z-b_h)^{n l_h + k} / A^n,
  // and d's denominator is exactly prod (z-b_h)^{n l_h + k}
  Polynomial num = d.numerator();
  Polynomial divisor = Polynomial::constant(f.constant().pow(static_cast<unsigned>(n)));
  for (const auto& z : f.zeros()) {
    int e = n * z.multiplicity - k;
    if (e > 0) divisor *= Polynomial::linear(z.root).pow(static_cast<unsigned>(e));
    if (e < 0) num *= Polynomial::linear(z.root).pow(static_cast<unsigned>(-e));
  }
  if (!d.is_zero() && d.denominator() != FactoredRational::root_product(f.poles(), k, n)) {
    throw std::logic_error("extract_gk: denominator does not match the pole structure");
  }
  auto [gk, rem] = num.divmod(divisor);
  if (!rem.is_zero()) throw std::logic_error("extract_gk: cofactor is not a polynomial");

  GkReport report;
  report.degree_bound = k * (f.zero_sites() + f.pole_sites() - 1);
  report.leading_prediction =
      falling_factorial(static_cast<long>(n) * (f.zero_degree() - f.pole_degree()), k);
  report.bound_met = gk.degree() <= report.degree_bound;
  if (!report.leading_prediction.is_zero()) {
    report.leading_matches = gk.degree() == report.degree_bound && gk.leading() == report.leading_prediction;
  }
  report.gk = std::move(gk);
  return report;
}

struct OrderLawReport {
  int predicted = 0;
  int actual = 0;
  bool holds = false;
  bool in_regime = true;  // zero law: p n > k; pole law: always
};

/// Zero of f of order p becomes a zero of F of order p(m+n) - k when p n > k.
inline OrderLawReport zero_order_law(const FactoredRational& f, const MonomialSpec& spec, std::size_t which_zero) {
  if (which_zero >= f.zeros().size()) throw std::out_of_range("zero_order_law: zero index out of range");
  const auto& zero = f.zeros()[which_zero];
  RationalFunction F = build_F(expand(f), spec);
  OrderLawReport r;
  const int p = zero.multiplicity;
  r.actual = F.is_zero() ? 0 : order_at(F, zero.root);
  r.predicted = p * (spec.m + spec.n) - spec.k;
  r.in_regime = p * spec.n > spec.k;
  r.holds = r.in_regime && r.actual == r.predicted;
  return r;
}

/// Pole of f of order p becomes a pole of F of order p(m+n) + k (>= 2k+2 when n >= k+1).
inline OrderLawReport pole_order_law(const FactoredRational& f, const MonomialSpec& spec, std::size_t which_pole) {
  if (which_pole >= f.poles().size()) throw std::out_of_range("pole_order_law: pole index out of range");
  const auto& pole = f.poles()[which_pole];
  RationalFunction F = build_F(expand(f), spec);
  OrderLawReport r;
  const int p = pole.multiplicity;
  r.actual = -order_at(F, pole.root);
  r.predicted = p * (spec.m + spec.n) + spec.k;
  r.holds = r.actual == r.predicted && (!spec.satisfies_bound() || r.actual >= 2 * spec.k + 2);
  return r;
}

struct ExcessEntry {
  GaussianRational root;
  int multiplicity;  // p, as a zero of f
  int order_in_F;
  int excess;    // order_in_F - 1
  int required;  // k+2 for p <= k, k(k+1)+1 for p >= k+1
  int margin;    // excess - required
  bool holds;
};

struct ExcessReport {
  std::vector<ExcessEntry> entries;
  bool all_hold() const {
    for (const auto& e : entries) {
      if (!e.holds) return false;
    }
    return true;
  }
};

/// Per-zero form of N(r,1/F) - Nbar(r,1/F) >= (k+2) Nbar_{k)} + [k(k+1)+1] Nbar_{(k+1}.
inline ExcessReport excess_law_check(const FactoredRational& f, const MonomialSpec& spec) {
  if (!spec.satisfies_bound()) throw std::invalid_argument("excess_law_check: requires n >= k + 1");
  ExcessReport report;
  if (f.zeros().empty()) return report;
  RationalFunction F = build_F(expand(f), spec, /*allow_constant=*/true);
  for (const auto& z : f.zeros()) {
    ExcessEntry e{z.root, z.multiplicity, order_at(F, z.root), 0, 0, 0, false};
    e.excess = e.order_in_F - 1;
    e.required = z.multiplicity <= spec.k ? spec.k + 2 : spec.k * (spec.k + 1) + 1;
    e.margin = e.excess - e.required;
    e.holds = e.margin >= 0;
    report.entries.push_back(std::move(e));
  }
  return report;
}

struct RescaleIdentityReport {
  RationalFunction lhs;  // g^m (g^n)^(k) with g(z) = t^{-k} f(z0 + rho z)
  RationalFunction rhs;  // F(z0 + rho z)
  bool equal;
};

/// Exact form of the rescaling identity with rho = t^{m+n}, so rho^{-k/(m+n)} = t^{-k}.
inline RescaleIdentityReport rescale_monomial_identity(const RationalFunction& f, const MonomialSpec& spec,
                                                       const GaussianRational& z0, const mpq_class& t) {
  if (sgn(t) <= 0) throw std::domain_error("rescale: t must be a positive rational");
  spec.validate();
  GaussianRational tq(t);
  GaussianRational rho = tq.pow(static_cast<unsigned>(spec.m + spec.n));
  RationalFunction g = f.compose_affine(z0, rho) * RationalFunction(tq.pow(static_cast<unsigned>(spec.k)).inverse());
  RescaleIdentityReport r{build_F(g, spec), build_F(f, spec).compose_affine(z0, rho), false};
  r.equal = r.lhs == r.rhs;
  return r;
}

}  // namespace nevlab
