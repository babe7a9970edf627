#include <gtest/gtest.h>

#include <nevlab/generators.hpp>
#include <nevlab/monomial.hpp>

using namespace nevlab;

namespace {

GaussianRational gr(const char* s) { return GaussianRational::parse(s); }
const Polynomial z = Polynomial::z();
RationalFunction rf(Polynomial n, Polynomial d = Polynomial::constant(1)) { return {std::move(n), std::move(d)}; }

MonomialSpec spec(int m, int n, int k, bool enforce = true) { return {m, n, k, enforce}; }

// Independent oracle: generic quotient-rule differentiation of f^n, k times.
RationalFunction F_oracle(const RationalFunction& f, const MonomialSpec& s) {
  RationalFunction d = f.pow(static_cast<unsigned>(s.n));
  for (int j = 0; j < s.k; ++j) d = d.derivative();
  return f.pow(static_cast<unsigned>(s.m)) * d;
}

FactoredBounds small_bounds() {
  FactoredBounds b;
  b.max_zero_sites = 2;
  b.max_pole_sites = 2;
  b.max_multiplicity = 3;
  b.coefficient_height = 5;
  return b;
}

MonomialSpec random_spec(RandomSource& rng) {
  MonomialSpec s;
  s.m = static_cast<int>(rng.integer(1, 3));
  s.k = static_cast<int>(rng.integer(1, 3));
  s.n = static_cast<int>(rng.integer(s.k + 1, s.k + 3));
  return s;
}

}  // namespace

TEST(MonomialSpec, Validation) {
  EXPECT_NO_THROW(spec(1, 2, 1).validate());
  EXPECT_THROW(spec(1, 1, 1).validate(), std::invalid_argument);
  EXPECT_NO_THROW(spec(1, 1, 1, false).validate());
  EXPECT_THROW(spec(0, 2, 1).validate(), std::invalid_argument);
}

TEST(BuildF, Examples) {
  EXPECT_EQ(build_F(z, spec(1, 2, 1)), rf(Polynomial::monomial(2, 2)));
  RationalFunction inv_z = rf(Polynomial::constant(1), z);
  EXPECT_EQ(build_F(inv_z, spec(1, 2, 1)), rf(Polynomial::constant(-2), z.pow(4)));
  EXPECT_EQ(build_F(inv_z, spec(1, 2, 1)), F_oracle(inv_z, spec(1, 2, 1)));
}

TEST(BuildF, RejectsDegenerateInput) {
  EXPECT_THROW(build_F(RationalFunction(), spec(1, 2, 1)), std::domain_error);
  EXPECT_THROW(build_F(RationalFunction(GaussianRational(3)), spec(1, 2, 1)), std::domain_error);
  EXPECT_TRUE(build_F(RationalFunction(GaussianRational(3)), spec(1, 2, 1), true).is_zero());
}

TEST(BuildF, MatchesQuotientRuleOracle) {
  RandomSource rng(11);
  for (int i = 0; i < 60; ++i) {
    FactoredRational f = random_factored(rng, small_bounds());
    MonomialSpec s = random_spec(rng);
    RationalFunction fe = expand(f);
    EXPECT_EQ(build_F(fe, s), F_oracle(fe, s)) << i;
  }
}

TEST(BuildF, PolynomialDegreeLaw) {
  RandomSource rng(12);
  for (int i = 0; i < 80; ++i) {
    int d = static_cast<int>(rng.integer(1, 4));
    std::vector<GaussianRational> c;
    for (int j = 0; j < d; ++j) c.push_back(rng.gaussian(6));
    c.push_back(rng.nonzero_gaussian(6));
    MonomialSpec s = random_spec(rng);
    RationalFunction F = build_F(Polynomial(c), s);
    ASSERT_TRUE(F.is_polynomial());
    EXPECT_EQ(F.numerator().degree(), d * (s.m + s.n) - s.k);
  }
}

TEST(ExtractGk, Examples) {
  FactoredRational z2(1, {{0, 2}}, {});
  auto a = extract_gk(z2, 2, 1);
  EXPECT_EQ(a.gk, Polynomial::constant(4));
  EXPECT_EQ(a.degree_bound, 0);
  EXPECT_EQ(a.leading_prediction, GaussianRational(4));
  EXPECT_TRUE(a.bound_met);
  EXPECT_EQ(a.leading_matches, true);

  auto b = extract_gk(FactoredRational(1, {{0, 1}}, {}), 2, 1);
  EXPECT_EQ(b.gk, Polynomial::constant(2));
  EXPECT_EQ(b.leading_matches, true);

  auto c = extract_gk(FactoredRational(1, {}, {{0, 1}}), 2, 1);
  EXPECT_EQ(c.gk, Polynomial::constant(-2));
  EXPECT_EQ(c.leading_prediction, GaussianRational(-2));
  EXPECT_EQ(c.degree_bound, 0);
  EXPECT_EQ(c.leading_matches, true);
}

TEST(ExtractGk, NegativeExponentRegime) {
  auto r = extract_gk(FactoredRational(1, {{0, 1}}, {{1, 1}}), 1, 3);
  EXPECT_TRUE(r.bound_met);
  // z/(z-1) third derivative is -6/(z-1)^4, so g = -6 z^2 after moving z^{-2} across
  EXPECT_EQ(r.gk, Polynomial::monomial(-6, 2));
}

TEST(ExtractGk, ReassemblesPowerDerivative) {
  RandomSource rng(13);
  for (int i = 0; i < 60; ++i) {
    FactoredRational f = random_factored(rng, small_bounds());
    int k = static_cast<int>(rng.integer(1, 3));
    int n = static_cast<int>(rng.integer(1, k + 2));
    auto rep = extract_gk(f, n, k);
    EXPECT_TRUE(rep.bound_met);
    RationalFunction lhs = expand(f).pow(static_cast<unsigned>(n));
    for (int j = 0; j < k; ++j) lhs = lhs.derivative();
    RationalFunction rhs = RationalFunction(rep.gk) * RationalFunction(f.constant().pow(static_cast<unsigned>(n)));
    for (const auto& a : f.zeros()) {
      RationalFunction lin(Polynomial::linear(a.root));
      int e = n * a.multiplicity - k;
      rhs = rhs * (e >= 0 ? lin.pow(static_cast<unsigned>(e)) : lin.reciprocal().pow(static_cast<unsigned>(-e)));
    }
    for (const auto& b : f.poles()) {
      rhs = rhs / RationalFunction(Polynomial::linear(b.root)).pow(static_cast<unsigned>(n * b.multiplicity + k));
    }
    EXPECT_EQ(lhs, rhs) << i;
    if (rep.leading_matches.has_value()) {
      EXPECT_TRUE(*rep.leading_matches) << i;
    }
  }
}

TEST(ZeroOrderLaw, Examples) {
  auto a = zero_order_law(FactoredRational(1, {{0, 1}}, {}), spec(1, 2, 1), 0);
  EXPECT_EQ(a.predicted, 2);
  EXPECT_EQ(a.actual, 2);
  EXPECT_TRUE(a.holds);
  auto b = zero_order_law(FactoredRational(1, {{0, 2}}, {}), spec(1, 2, 1), 0);
  EXPECT_EQ(b.predicted, 5);
  EXPECT_EQ(b.actual, 5);
  auto c = zero_order_law(FactoredRational(1, {{0, 1}}, {}), spec(1, 1, 1, false), 0);
  EXPECT_FALSE(c.in_regime);
  EXPECT_THROW(zero_order_law(FactoredRational(1, {{0, 1}}, {}), spec(1, 2, 1), 1), std::out_of_range);
}

TEST(PoleOrderLaw, Examples) {
  auto a = pole_order_law(FactoredRational(1, {}, {{0, 1}}), spec(1, 2, 1), 0);
  EXPECT_EQ(a.predicted, 4);
  EXPECT_EQ(a.actual, 4);
  EXPECT_TRUE(a.holds);
  auto b = pole_order_law(FactoredRational(1, {}, {{1, 2}}), spec(1, 2, 1), 0);
  EXPECT_EQ(b.predicted, 7);
  EXPECT_EQ(b.actual, 7);
  EXPECT_THROW(pole_order_law(FactoredRational(1, {{0, 1}}, {}), spec(1, 2, 1), 0), std::out_of_range);
}

TEST(OrderLaws, HoldOnRandomInputs) {
  RandomSource rng(14);
  for (int i = 0; i < 60; ++i) {
    FactoredRational f = random_factored(rng, small_bounds());
    MonomialSpec s = random_spec(rng);
    for (std::size_t j = 0; j < f.zeros().size(); ++j) {
      auto r = zero_order_law(f, s, j);
      EXPECT_TRUE(r.in_regime);
      EXPECT_TRUE(r.holds) << i << " zero " << j;
    }
    for (std::size_t j = 0; j < f.poles().size(); ++j) {
      auto r = pole_order_law(f, s, j);
      EXPECT_TRUE(r.holds) << i << " pole " << j;
      EXPECT_GE(r.actual, 2 * s.k + 2);
    }
  }
}

TEST(ExcessLaw, Examples) {
  FactoredRational f(1, {{0, 1}}, {});
  auto a = excess_law_check(f, spec(1, 2, 1));
  ASSERT_EQ(a.entries.size(), 1u);
  EXPECT_EQ(a.entries[0].order_in_F, 2);
  EXPECT_FALSE(a.all_hold());
  auto b = excess_law_check(f, spec(2, 2, 1));
  EXPECT_EQ(b.entries[0].order_in_F, 3);
  EXPECT_EQ(b.entries[0].margin, -1);
  auto c = excess_law_check(f, spec(2, 3, 1));
  EXPECT_EQ(c.entries[0].order_in_F, 4);
  EXPECT_TRUE(c.all_hold());
  EXPECT_TRUE(excess_law_check(FactoredRational(2, {}, {{1, 1}}), spec(1, 2, 1)).entries.empty());
  EXPECT_THROW(excess_law_check(f, spec(1, 1, 1, false)), std::invalid_argument);
}

TEST(ExcessLaw, HighMultiplicityBranch) {
  for (int k = 1; k <= 3; ++k) {
    FactoredRational f(1, {{1, k + 1}}, {{-1, 1}});
    auto r = excess_law_check(f, spec(1, k + 1, k));
    EXPECT_EQ(r.entries[0].order_in_F, (k + 1) * (k + 2) - k);
    EXPECT_EQ(r.entries[0].required, k * (k + 1) + 1);
    EXPECT_TRUE(r.all_hold());
  }
}

// Exhaustive small-parameter characterization: low-multiplicity zeros meet
// the k+2 excess exactly when p(m+n) >= 2k+3; high-multiplicity zeros always
// meet k(k+1)+1.
TEST(ExcessLaw, BruteForceCharacterization) {
  for (int k = 1; k <= 4; ++k) {
    for (int m = 1; m <= 4; ++m) {
      for (int n = k + 1; n <= k + 4; ++n) {
        for (int p = 1; p <= k + 3; ++p) {
          FactoredRational f(1, {{0, p}, {2, 1}}, {{gr("1/2+1/1i"), 1}});
          auto e = excess_law_check(f, spec(m, n, k)).entries.at(0);
          EXPECT_EQ(e.order_in_F, p * (m + n) - k);
          bool expected = p <= k ? p * (m + n) >= 2 * k + 3 : true;
          EXPECT_EQ(e.holds, expected) << "p=" << p << " m=" << m << " n=" << n << " k=" << k;
        }
      }
    }
  }
}

TEST(RescaleIdentity, Examples) {
  auto a = rescale_monomial_identity(z, spec(1, 2, 1), 0, 1);
  EXPECT_TRUE(a.equal);
  EXPECT_EQ(a.lhs, rf(Polynomial::monomial(2, 2)));
  auto b = rescale_monomial_identity(z, spec(1, 2, 1), 0, mpq_class(1, 2));
  EXPECT_TRUE(b.equal);
  // g = z/4, F_g = (z/4)(2 z/16) = z^2/32 = 2 (z/8)^2
  EXPECT_EQ(b.lhs, rf(Polynomial::monomial(gr("1/32"), 2)));
  auto c = rescale_monomial_identity(rf(Polynomial::constant(1), z), spec(1, 2, 1), 1, mpq_class(1, 3));
  EXPECT_TRUE(c.equal);
  EXPECT_THROW(rescale_monomial_identity(z, spec(1, 2, 1), 0, 0), std::domain_error);
}

TEST(RescaleIdentity, HoldsOnRandomInputs) {
  RandomSource rng(15);
  for (int i = 0; i < 40; ++i) {
    FactoredRational f = random_factored(rng, small_bounds());
    MonomialSpec s = random_spec(rng);
    mpq_class t(rng.integer(1, 5), rng.integer(1, 5));
    t.canonicalize();
    EXPECT_TRUE(rescale_monomial_identity(expand(f), s, rng.gaussian(4), t).equal) << i;
  }
}
