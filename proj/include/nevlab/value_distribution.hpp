#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "generators.hpp"
#include "io.hpp"
#include "monomial.hpp"
#include "roots.hpp"

namespace nevlab {

/// A constant value or a rational target function.
class ShareTarget {
public:
  ShareTarget(GaussianRational c) : v_(std::move(c)) {}
  ShareTarget(long c) : v_(GaussianRational(c)) {}
  ShareTarget(RationalFunction f) {
    if (f.is_zero()) throw std::invalid_argument("share target: function must not vanish identically");
    if (f.is_constant()) {
      v_ = f.numerator().leading();
    } else {
      v_ = std::move(f);
    }
  }

  bool is_constant() const { return std::holds_alternative<GaussianRational>(v_); }
  const GaussianRational& constant() const { return std::get<GaussianRational>(v_); }
  const RationalFunction& function() const { return std::get<RationalFunction>(v_); }
  RationalFunction as_function() const { return is_constant() ? RationalFunction(constant()) : function(); }

  std::string str() const {
    if (is_constant()) return constant().str();
    std::ostringstream os;
    os << "(" << function().numerator() << ")/(" << function().denominator() << ")";
    return os.str();
  }

private:
  std::variant<GaussianRational, RationalFunction> v_;
};

/// Reduced numerator of F - omega. Throws when F is identically omega.
inline Polynomial difference_numerator(const RationalFunction& F, const ShareTarget& omega) {
  Polynomial num;
  if (omega.is_constant()) {
    // (u - w v)/v is already reduced when u/v is
    num = F.numerator() - F.denominator() * omega.constant();
  } else {
    num = (F - omega.function()).numerator();
  }
  if (num.is_zero()) throw std::domain_error("F - omega vanishes identically");
  return num;
}

struct DistinctZeroCount {
  int count;
  SquarefreeDecomposition decomposition;
};

/// Number of distinct finite zeros of F - omega.
inline DistinctZeroCount distinct_zero_count(const RationalFunction& F, const ShareTarget& omega) {
  Polynomial num = difference_numerator(F, omega);
  if (num.is_constant()) return {0, SquarefreeDecomposition{}};
  auto dec = squarefree_decompose(num);
  return {dec.distinct_root_count(), std::move(dec)};
}

enum class Verdict { holds, violated, precondition_unmet };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::precondition_unmet: return "precondition_unmet";
  }
  return "?";
}

struct Theorem2Report {
  RationalFunction F;
  Polynomial numerator_of_difference;
  int distinct_zero_count = 0;
  Verdict verdict = Verdict::precondition_unmet;
  std::string failed_clause;
  SquarefreeDecomposition witness;
};

/// Checks that f^m (f^n)^(k) - omega has at least two distinct zeros.
inline Theorem2Report theorem2_verify(const RationalFunction& f, const MonomialSpec& spec, const ShareTarget& omega) {
  Theorem2Report rep;
  auto unmet = [&](std::string clause) {
    rep.failed_clause = std::move(clause);
    return rep;
  };
  if (spec.m < 1 || spec.n < 1 || spec.k < 1) return unmet("m, n, k must be positive");
  if (spec.n < spec.k + 1) return unmet("n >= k + 1");
  if (f.is_constant()) return unmet("f must be nonconstant");
  if (!omega.is_constant()) return unmet("omega must be a constant");
  if (omega.constant().is_zero()) return unmet("omega != 0");

  rep.F = build_F(f, spec);
  rep.numerator_of_difference = difference_numerator(rep.F, omega);
  if (!rep.numerator_of_difference.is_constant()) {
    rep.witness = squarefree_decompose(rep.numerator_of_difference);
    rep.distinct_zero_count = rep.witness.distinct_root_count();
  }
  rep.verdict = rep.distinct_zero_count >= 2 ? Verdict::holds : Verdict::violated;
  return rep;
}

/// For a nonconstant polynomial f, whether F has a zero of multiplicity >= 2.
inline bool polynomial_multiple_zero_check(const RationalFunction& f, const MonomialSpec& spec) {
  if (!f.is_polynomial()) throw std::invalid_argument("polynomial_multiple_zero_check: f must be a polynomial");
  if (f.is_constant()) throw std::invalid_argument("polynomial_multiple_zero_check: f must be nonconstant");
  spec.validate();
  RationalFunction F = build_F(f, spec);
  if (F.numerator().is_constant()) return false;
  return squarefree_decompose(F.numerator()).has_repeated_root();
}

struct PartialShareResult {
  bool subset;
  std::optional<Polynomial> witness;  // monic squarefree factor of f - omega's zeros missing from g - omega
};

/// Whether every zero of f - omega is a zero of g - omega, ignoring multiplicity.
inline PartialShareResult partial_share_check(const RationalFunction& f, const RationalFunction& g,
                                              const ShareTarget& omega) {
  Polynomial nf = difference_numerator(f, omega);
  Polynomial ng = difference_numerator(g, omega);
  if (nf.is_constant()) return {true, std::nullopt};
  if (ng.is_constant()) return {false, squarefree_decompose(nf).radical()};
  for (const auto& part : squarefree_decompose(nf).parts) {
    Polynomial missing = part.factor.exact_div(gcd(part.factor, ng));
    if (!missing.is_constant()) return {false, missing.monic()};
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Randomized search for counterexamples.

struct FuzzConfig {
  std::size_t case_count = 1000;
  std::uint64_t seed = 0;
  FactoredBounds bounds;
  int m_min = 1, m_max = 3;
  int k_min = 1, k_max = 3;
  int n_extra = 2;  // n ranges over [k+1, k+1+n_extra]
  unsigned workers = 0;  // 0: NEVLAB_WORKERS, else hardware concurrency
  double cluster_tol = 1e-4;  // relative radius for merging numeric roots

  void validate() const {
    const auto& b = bounds;
    if (b.max_zero_sites < 0 || b.max_pole_sites < 0 || b.max_zero_sites + b.max_pole_sites < 1)
      throw std::invalid_argument("fuzz config: site bounds must allow at least one root");
    if (b.max_multiplicity < 1 || b.coefficient_height < 1 || b.max_zero_degree < 1 || b.max_pole_degree < 1)
      throw std::invalid_argument("fuzz config: bounds must be positive");
    if (m_min < 1 || m_max < m_min || k_min < 1 || k_max < k_min || n_extra < 0)
      throw std::invalid_argument("fuzz config: invalid (m, n, k) ranges");
    if (!(cluster_tol > 0)) throw std::invalid_argument("fuzz config: cluster tolerance must be positive");
  }
};

struct FuzzCase {
  std::size_t index;
  FactoredRational f;
  MonomialSpec spec;
  GaussianRational omega;
};

inline FuzzCase generate_case(const FuzzConfig& cfg, std::size_t index) {
  RandomSource rng(mix_seed(cfg.seed, index));
  FactoredRational f = random_factored(rng, cfg.bounds);
  MonomialSpec spec;
  spec.m = static_cast<int>(rng.integer(cfg.m_min, cfg.m_max));
  spec.k = static_cast<int>(rng.integer(cfg.k_min, cfg.k_max));
  spec.n = static_cast<int>(rng.integer(spec.k + 1, spec.k + 1 + cfg.n_extra));
  return {index, std::move(f), spec, rng.nonzero_gaussian(cfg.bounds.coefficient_height)};
}

inline io::json witness_json(const FactoredRational& f, const MonomialSpec& spec, const GaussianRational& omega) {
  io::json j = io::to_json(f);
  j["m"] = spec.m;
  j["n"] = spec.n;
  j["k"] = spec.k;
  j["omega"] = omega.str();
  return j;
}

namespace detail {

// Strictly simpler Gaussian rationals near g; used to lower coefficient height.
inline std::vector<GaussianRational> simpler_values(const GaussianRational& g, bool allow_zero) {
  std::vector<GaussianRational> out;
  auto add = [&](const GaussianRational& c) {
    if (c == g || (!allow_zero && c.is_zero())) return;
    for (const auto& o : out)
      if (o == c) return;
    out.push_back(c);
  };
  auto trunc = [](const mpq_class& q) { return mpq_class(mpz_class(q.get_num() / q.get_den())); };
  auto halve = [](const mpq_class& q) {
    mpq_class h(mpz_class(q.get_num() / 2), q.get_den());
    h.canonicalize();
    return h;
  };
  add(GaussianRational(allow_zero ? 0 : 1));
  add(GaussianRational(g.re()));
  add(GaussianRational(trunc(g.re()), trunc(g.im())));
  add(GaussianRational(halve(g.re()), halve(g.im())));
  return out;
}

}  // namespace detail

/// Candidates one step simpler than f: lower multiplicities first, then
/// fewer sites, then smaller coefficients.
inline std::vector<FactoredRational> shrink_candidates(const FactoredRational& f) {
  std::vector<FactoredRational> out;
  auto push = [&](const GaussianRational& c, std::vector<RootMultiplicity> z, std::vector<RootMultiplicity> p) {
    if (z.empty() && p.empty()) return;
    try {
      out.emplace_back(c, std::move(z), std::move(p));
    } catch (const std::invalid_argument&) {
      // simplification made two roots coincide
    }
  };
  const auto& zeros = f.zeros();
  const auto& poles = f.poles();
  const GaussianRational& c = f.constant();

  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (zeros[i].multiplicity < 2) continue;
    auto z = zeros;
    --z[i].multiplicity;
    push(c, z, poles);
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (poles[i].multiplicity < 2) continue;
    auto p = poles;
    --p[i].multiplicity;
    push(c, zeros, p);
  }
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    auto z = zeros;
    z.erase(z.begin() + static_cast<std::ptrdiff_t>(i));
    push(c, z, poles);
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    auto p = poles;
    p.erase(p.begin() + static_cast<std::ptrdiff_t>(i));
    push(c, zeros, p);
  }
  for (const auto& s : detail::simpler_values(c, false)) push(s, zeros, poles);
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    for (const auto& s : detail::simpler_values(zeros[i].root, true)) {
      auto z = zeros;
      z[i].root = s;
      push(c, z, poles);
    }
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (const auto& s : detail::simpler_values(poles[i].root, true)) {
      auto p = poles;
      p[i].root = s;
      push(c, zeros, p);
    }
  }
  return out;
}

/// Greedy shrinking: repeatedly moves to the first simpler candidate that
/// still satisfies keep. Every move lowers multiplicity, site count or
/// coefficient size, so the loop terminates.
template <class Predicate>
FactoredRational shrink(FactoredRational f, Predicate keep) {
  for (bool moved = true; moved;) {
    moved = false;
    for (auto& cand : shrink_candidates(f)) {
      if (keep(cand)) {
        f = std::move(cand);
        moved = true;
        break;
      }
    }
  }
  return f;
}

struct FuzzViolation {
  FuzzCase original;
  FactoredRational shrunk;
  int distinct_zero_count;
  bool numerically_confirmed;
};

struct FuzzSummary {
  std::size_t cases = 0;
  std::size_t holds = 0;
  std::size_t violated = 0;
  std::size_t skipped = 0;
  std::vector<FuzzViolation> violations;
};

inline bool violates_theorem2(const FactoredRational& f, const MonomialSpec& spec, const GaussianRational& omega) {
  if (f.is_constant()) return false;
  return theorem2_verify(expand(f), spec, omega).verdict == Verdict::violated;
}

/// Independent double-precision count of distinct zeros of F - omega.
inline int numeric_distinct_zero_count(const Polynomial& numerator, double cluster_tol) {
  if (numerator.is_constant()) return 0;
  return static_cast<int>(clustered_roots(numerator.to_numeric(), cluster_tol).size());
}

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NEVLAB_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return static_cast<unsigned>(w);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline FuzzSummary fuzz_theorem2(const FuzzConfig& cfg) {
  cfg.validate();
  enum class Outcome : char { holds, violated, skipped };
  std::vector<Outcome> outcome(cfg.case_count, Outcome::skipped);
  std::vector<std::optional<FuzzViolation>> found(cfg.case_count);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(resolve_workers(cfg.workers));

  auto work = [&](std::size_t worker) {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < cfg.case_count;) {
        FuzzCase c = generate_case(cfg, i);
        auto rep = theorem2_verify(expand(c.f), c.spec, c.omega);
        if (rep.verdict == Verdict::holds) {
          outcome[i] = Outcome::holds;
        } else if (rep.verdict == Verdict::violated) {
          outcome[i] = Outcome::violated;
          auto keep = [&](const FactoredRational& g) { return violates_theorem2(g, c.spec, c.omega); };
          FactoredRational small = shrink(c.f, keep);
          bool confirmed = numeric_distinct_zero_count(rep.numerator_of_difference, cfg.cluster_tol) < 2;
          found[i] = FuzzViolation{c, std::move(small), rep.distinct_zero_count, confirmed};
        }
      }
    } catch (...) {
      errors[worker] = std::current_exception();
      next = cfg.case_count;
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < errors.size(); ++w) pool.emplace_back(work, w);
  work(0);
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  FuzzSummary s;
  s.cases = cfg.case_count;
  for (std::size_t i = 0; i < cfg.case_count; ++i) {
    switch (outcome[i]) {
      case Outcome::holds: ++s.holds; break;
      case Outcome::violated: ++s.violated; break;
      case Outcome::skipped: ++s.skipped; break;
    }
    if (found[i]) s.violations.push_back(std::move(*found[i]));
  }
  return s;
}

inline io::json to_json(const FuzzSummary& s, const FuzzConfig& cfg) {
  io::json v = io::json::array();
  for (const auto& w : s.violations) {
    v.push_back({{"case", w.original.index},
                 {"distinct_zero_count", w.distinct_zero_count},
                 {"numerically_confirmed", w.numerically_confirmed},
                 {"original", witness_json(w.original.f, w.original.spec, w.original.omega)},
                 {"witness", witness_json(w.shrunk, w.original.spec, w.original.omega)}});
  }
  return {{"schema", io::kSchema},
          {"seed", cfg.seed},
          {"cases", s.cases},
          {"holds", s.holds},
          {"violated", s.violated},
          {"skipped", s.skipped},
          {"violations", std::move(v)}};
}

}  // namespace nevlab
