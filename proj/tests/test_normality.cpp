#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <nevlab/generators.hpp>
#include <nevlab/normality.hpp>

using namespace nevlab;

namespace {

const Polynomial z = Polynomial::z();
Polynomial c(long v) { return Polynomial::constant(v); }
Sample rational(Polynomial n, Polynomial d = c(1)) { return Sample::rational(RationalFunction(std::move(n), std::move(d))); }

const std::vector<complex> kPoints{{0.3, 0.2}, {-0.5, 0.1}, {0.1, -0.4}};

std::vector<Sample> catalog() {
  return {Sample::exp(), Sample::sin(), Sample::cos(), Sample::tan(), Sample::reciprocal_logistic(1),
          rational(z * z - c(1), z), rational(z, z - c(2))};
}

}  // namespace

TEST(SphericalDerivative, Examples) {
  Evaluable id = Evaluable::from(rational(z));
  EXPECT_DOUBLE_EQ(spherical_derivative(id, 0), 1);
  EXPECT_NEAR(spherical_derivative(id, 2), 0.2, 1e-15);
  for (int j = 1; j <= 5; ++j) EXPECT_NEAR(spherical_derivative(Evaluable::from(Sample::exp(j)), 0), j / 2.0, 1e-14);
}

TEST(SphericalDerivative, ChartConsistency) {
  for (const auto& s : catalog()) {
    Evaluable f = Evaluable::from(s), inv = Evaluable::from(s.reciprocal());
    for (double x = -1.3; x <= 1.3; x += 0.37) {
      for (double y = -1.1; y <= 1.1; y += 0.41) {
        complex p(x, y);
        EXPECT_NEAR(spherical_derivative(f, p), spherical_derivative(inv, p), 1e-12) << s.id() << p;
        EXPECT_NEAR(spherical_derivative(f, p), s.spherical_derivative(p), 1e-12) << s.id() << p;
      }
    }
  }
}

TEST(SphericalDerivative, FiniteAtPoles) {
  Evaluable f = Evaluable::from(rational(c(1), z));
  EXPECT_NEAR(spherical_derivative(f, 0), 1, 1e-15);
  Evaluable t = Evaluable::from(Sample::tan());
  EXPECT_NEAR(spherical_derivative(t, std::numbers::pi / 2), 1, 1e-12);
}

TEST(Marty, ExpScaleGrows) {
  auto t = marty_scan(FamilySpec::exp_scale(20), Rect{-1, 1, -1, 1}, 32);
  ASSERT_EQ(t.rows.size(), 20u);
  EXPECT_TRUE(t.nondecreasing());
  for (const auto& row : t.rows) EXPECT_GE(row.sup, row.j / 2.0 - 1e-12);
  EXPECT_GE(t.rows.back().sup / t.rows.front().sup, 10);
}

TEST(Marty, ConstantFamilyIsFlat) {
  auto t = marty_scan(FamilySpec::constant(GaussianRational(3), 5), Rect{-1, 1, -1, 1}, 16);
  for (const auto& row : t.rows) EXPECT_EQ(row.sup, 0);
}

TEST(Marty, MonomialScaleAtOrigin) {
  auto fam = FamilySpec::monomial_scale(2, 8);
  for (int j = 1; j <= 8; ++j) EXPECT_DOUBLE_EQ(spherical_derivative(fam.member(j), 0), j);
  EXPECT_THROW(FamilySpec::monomial_scale(1, 8), std::invalid_argument);
  auto t = marty_scan(fam, Rect{-1, 1, -1, 1}, 16);
  EXPECT_DOUBLE_EQ(t.rows.back().sup, 8);
}

TEST(Marty, ReciprocalLogisticAndTemplates) {
  auto t = marty_scan(FamilySpec::reciprocal_logistic(10), Rect{-1, 1, -1, 1}, 20);
  EXPECT_GE(t.rows.back().sup, 5 * t.rows.front().sup);

  FactoredRational form(1, {{GaussianRational(1), 1}}, {});  // z - 1
  auto arg = FamilySpec::rational_template("shifted", form, FamilySpec::Slot::argument, 4);
  // f_j(z) = j z - 1 has f#(1/j) = j
  for (int j = 1; j <= 4; ++j) EXPECT_NEAR(spherical_derivative(arg.member(j), 1.0 / j), j, 1e-12);
  auto val = FamilySpec::rational_template("scaled", form, FamilySpec::Slot::value, 4);
  EXPECT_NEAR(std::abs(val.member(3).value(2)), 3, 1e-15);
}

TEST(Marty, Csv) {
  auto t = marty_scan(FamilySpec::exp_scale(2), Rect{-1, 1, -1, 1}, 16);
  std::ostringstream os;
  t.write_csv(os);
  EXPECT_EQ(os.str(), "j,sup_spherical_derivative\n1,0.5\n2,1\n");
}

TEST(Marty, RejectsBadInput) {
  auto fam = FamilySpec::exp_scale(5);
  EXPECT_THROW(marty_scan(fam, Rect{-1, 1, -1, 1}, 8), std::invalid_argument);
  EXPECT_THROW(marty_scan(fam, Rect{1, -1, -1, 1}, 16), std::invalid_argument);
  EXPECT_THROW(marty_scan(fam, Rect{-1, 1, -1, 1}, 16, 1, 6), std::invalid_argument);
  EXPECT_THROW(FamilySpec::by_name("nope", 3), std::invalid_argument);
}

TEST(Region, Parse) {
  Rect r = Rect::parse("-1,2.5,0,1");
  EXPECT_EQ(r.x0, -1);
  EXPECT_EQ(r.x1, 2.5);
  EXPECT_EQ(r.y1, 1);
  for (const char* bad : {"", "1,2,3", "a,b,c,d", "0,1,0,1,", "1,0,0,1", "0,1,0,1 x"}) {
    EXPECT_THROW(Rect::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(Rescale, Examples) {
  Sample e = Sample::exp();
  Evaluable id = zalcman_rescale(Evaluable::from(e), {0, 1, 0.7});
  for (complex p : kPoints) EXPECT_NEAR(std::abs(id.value(p) - e.value(p)), 0, 1e-15);

  // e^{jz} rescaled by rho = 1/j is e^z for every j
  for (int j = 1; j <= 6; ++j) {
    Evaluable g = zalcman_rescale(Evaluable::from(Sample::exp(j)), {0, 1.0 / j, 0});
    for (complex p : kPoints) {
      EXPECT_NEAR(std::abs(g.value(p) - std::exp(p)), 0, 1e-14);
      EXPECT_NEAR(std::abs(g.derivative(p) - std::exp(p)), 0, 1e-14);
    }
  }
}

TEST(Rescale, ExactPathDelegates) {
  RandomSource rng(3);
  for (int i = 0; i < 10; ++i) {
    RationalFunction f = expand(random_factored(rng, FactoredBounds{}));
    if (f.is_constant()) continue;
    MonomialSpec spec{1, 2, 1, true};
    GaussianRational z0 = rng.gaussian(4);
    mpq_class t = mpq_class(1, 2);
    EXPECT_TRUE(zalcman_rescale_exact(f, spec, z0, t).equal);
    EXPECT_EQ(monomial_rescale_numeric_check(f, spec, z0, t).max_deviation, 0);
  }
}

TEST(Rescale, SpecValidation) {
  EXPECT_THROW(RescaleSpec({0, 0, 0}).validate(), std::invalid_argument);
  EXPECT_THROW(RescaleSpec({0, 1, -0.5}).validate(), std::invalid_argument);
  EXPECT_THROW(RescaleSpec({0, 1, 1}).validate(MonomialSpec{1, 2, 1, true}), std::invalid_argument);
  EXPECT_NO_THROW(RescaleSpec::for_monomial({1, 2, 1, true}, 0, 0.5).validate(MonomialSpec{1, 2, 1, true}));
}

TEST(RichardsonDerivative, MatchesClosedForms) {
  auto f = [](complex u) { return std::exp(2.0 * u); };
  complex p(0.3, -0.2);
  for (int k = 0; k <= 3; ++k) {
    auto d = richardson_derivative(f, p, k, 0.2);
    EXPECT_LT(std::abs(d.value - std::pow(2.0, k) * f(p)) / std::abs(f(p)), 1e-9) << k;
  }
  // higher orders lose digits to cancellation, about eps / h^k
  auto d4 = richardson_derivative(f, p, 4, 0.2);
  EXPECT_LT(std::abs(d4.value - 16.0 * f(p)) / std::abs(f(p)), 1e-6);
}

TEST(RescaleCheck, ExponentialExample) {
  MonomialSpec spec{1, 2, 1, true};
  auto rep = monomial_rescale_numeric_check(Sample::exp(), spec, RescaleSpec::for_monomial(spec, 0, 0.1), kPoints, 1e-8);
  EXPECT_TRUE(rep.pass());
  for (const auto& row : rep.rows) EXPECT_NEAR(std::abs(row.rhs - 2.0 * std::exp(3.0 * 0.1 * row.z)), 0, 1e-13);
}

// alpha = k/(m+n) passes and alpha + 0.1 fails, over the catalog and specs up to k = 3.
TEST(RescaleCheck, CatalogPositiveAndNegative) {
  for (const auto& s : catalog()) {
    for (int k = 1; k <= 3; ++k) {
      for (int n = k + 1; n <= k + 2; ++n) {
        for (int m = 1; m <= 2; ++m) {
          MonomialSpec spec{m, n, k, true};
          RescaleSpec good = RescaleSpec::for_monomial(spec, {0.5, 0.5}, 0.1);
          RescaleSpec bad = good;
          bad.alpha += 0.1;
          double tol = 1e-8;
          EXPECT_TRUE(monomial_rescale_numeric_check(s, spec, good, kPoints, tol).pass()) << s.id() << m << n << k;
          EXPECT_GE(monomial_rescale_numeric_check(s, spec, bad, kPoints, tol).max_deviation, 10 * tol)
              << s.id() << m << n << k;
        }
      }
    }
  }
}

TEST(RescaleCheck, RejectsPointsAtPoles) {
  MonomialSpec spec{1, 2, 1, true};
  EXPECT_THROW(monomial_rescale_numeric_check(rational(c(1), z), spec, RescaleSpec::for_monomial(spec, 0, 0.5), {0}, 1e-8),
               std::runtime_error);
}

TEST(ZeroFinder, LocatesSimpleAndMultipleZeros) {
  Polynomial p = (z - Polynomial::constant(GaussianRational(3, 1, 7, 2))).pow(3) * (z + c(1)) * (z * z + c(4));
  ZeroTarget t{[np = p.to_numeric()](complex u) { return np(u); },
               [dp = p.derivative().to_numeric()](complex u) { return dp(u); },
               {}};
  auto r = find_zeros(t, Rect{-6.1, 6.3, -6.2, 6.05}, 1e-10);
  EXPECT_TRUE(r.flagged.empty());
  int total = 0;
  for (const auto& zr : r.zeros) total += zr.multiplicity;
  EXPECT_EQ(total, 6);
  auto has = [&](complex w, int mult) {
    return std::any_of(r.zeros.begin(), r.zeros.end(),
                       [&](const LocatedZero& q) { return std::abs(q.z - w) < 1e-9 && q.multiplicity == mult; });
  };
  EXPECT_TRUE(has({3, 3.5}, 3));
  EXPECT_TRUE(has(-1.0, 1));
  EXPECT_TRUE(has({0, 2}, 1));
  EXPECT_TRUE(has({0, -2}, 1));
}

TEST(ZeroFinder, AccountsForPoles) {
  // (z - 1)/(z + 1)^2: one zero, a double pole inside the box
  Sample s = rational(z - c(1), (z + c(1)).pow(2));
  auto r = find_zeros({[s](complex u) { return s.value(u); }, [s](complex u) { return s.derivative(u); },
                       s.poles_in_disk(10)},
                      Rect{-3.1, 3.3, -2.9, 3.2}, 1e-10);
  ASSERT_EQ(r.zeros.size(), 1u);
  EXPECT_NEAR(std::abs(r.zeros[0].z - 1.0), 0, 1e-10);
}

TEST(ZeroFinder, FlagsZeroOnOuterBoundary) {
  Polynomial p = z - c(1);
  ZeroTarget t{[np = p.to_numeric()](complex u) { return np(u); }, [](complex) { return complex(1); }, {}};
  auto r = find_zeros(t, Rect{1, 2, -1, 1}, 1e-8);
  EXPECT_FALSE(r.flagged.empty());
}

TEST(BoundScan, Examples) {
  MonomialSpec spec{1, 2, 1, true};
  auto a = theorem4_bound_scan(rational(z), spec, ShareTarget(2), Region::disk(2), 1e-10);
  EXPECT_EQ(a.path, "exact");
  ASSERT_EQ(a.zeros.size(), 2u);
  EXPECT_NEAR(a.zeros[0].z.real(), -1, 1e-12);
  EXPECT_NEAR(a.zeros[1].z.real(), 1, 1e-12);
  EXPECT_NEAR(a.a_min, 2, 1e-12);

  // 2z^2 = 5 has no solution in |z| <= 1
  auto b = theorem4_bound_scan(rational(z), spec, ShareTarget(5), Region::disk(1), 1e-10);
  EXPECT_TRUE(b.zeros.empty());
  EXPECT_EQ(b.a_min, 0);

  auto e = theorem4_bound_scan(Sample::exp(), {2, 2, 1, true}, ShareTarget(1), Region::disk(3), 1e-10);
  EXPECT_EQ(e.path, "argument-principle");
  EXPECT_TRUE(e.flagged.empty());
  ASSERT_EQ(e.zeros.size(), 3u);
  for (const auto& zr : e.zeros) {
    EXPECT_NEAR(zr.z.real(), -std::log(2.0) / 4, 1e-10);
    EXPECT_NEAR(zr.power_derivative_abs, std::sqrt(2.0), 1e-9);
  }
  EXPECT_NEAR(e.zeros[2].z.imag() - e.zeros[1].z.imag(), std::numbers::pi / 2, 1e-10);
}

TEST(BoundScan, Csv) {
  auto a = theorem4_bound_scan(rational(z), {1, 2, 1, true}, ShareTarget(2), Region::disk(2), 1e-10);
  std::ostringstream os;
  a.write_csv(os);
  EXPECT_EQ(os.str(), "re,im,|monomial_deriv|\n-1,0,2\n1,0,2\n");
}

TEST(BoundScan, OriginPrecondition) {
  MonomialSpec spec{1, 2, 1, true};
  EXPECT_THROW(theorem4_bound_scan(rational(z), spec, ShareTarget(RationalFunction(z)), Region::disk(2), 1e-10),
               std::invalid_argument);
  EXPECT_THROW(theorem4_bound_scan(rational(z), spec, ShareTarget(RationalFunction(c(1), z)), Region::disk(2), 1e-10),
               std::invalid_argument);
  EXPECT_THROW(theorem4_bound_scan(Sample::exp(), spec, ShareTarget(0L), Region::disk(2), 1e-10), std::invalid_argument);
  // origin outside the region: allowed
  EXPECT_NO_THROW(theorem4_bound_scan(rational(z), spec, ShareTarget(RationalFunction(z)),
                                      Region::box(Rect{1.1, 3, -1, 1}), 1e-10));
}

TEST(BoundScan, ExactAndNumericAgree) {
  RandomSource rng(77);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    FactoredBounds b;
    b.max_zero_sites = 2;
    b.max_pole_sites = 2;
    b.max_multiplicity = 2;
    b.coefficient_height = 3;
    RationalFunction f = expand(random_factored(rng, b));
    if (f.is_constant()) continue;
    MonomialSpec spec{1, 2, 1, true};
    GaussianRational h = rng.nonzero_gaussian(3);
    Region region = Region::box(Rect{-4.03, 3.97, -3.91, 4.07});
    auto exact = theorem4_bound_scan(Sample::rational(f), spec, h, region, 1e-9);
    auto numeric = theorem4_bound_scan(Sample::rational(f), spec, h, region, 1e-9, true);
    if (!numeric.flagged.empty()) continue;
    ASSERT_EQ(exact.zeros.size(), numeric.zeros.size()) << i;
    for (const auto& e : exact.zeros) {
      bool hit = std::any_of(numeric.zeros.begin(), numeric.zeros.end(), [&](const BoundZero& n) {
        return std::abs(n.z - e.z) < 1e-6 && n.multiplicity == e.multiplicity;
      });
      EXPECT_TRUE(hit) << i << " " << e.z;
    }
    ++checked;
  }
  EXPECT_GT(checked, 25);
}

TEST(NumericShare, Examples) {
  Region box = Region::box(Rect{-1, 1, -7, 7});
  Sample e = Sample::exp();
  EXPECT_TRUE(numeric_partial_share_check(e, e, ShareTarget(1), box, 1e-6).subset);

  auto fine_in_coarse = numeric_partial_share_check(Sample::exp(2), e, ShareTarget(1), box, 1e-6);
  EXPECT_FALSE(fine_in_coarse.subset);
  EXPECT_EQ(fine_in_coarse.f_zeros.size(), 5u);
  EXPECT_EQ(fine_in_coarse.unmatched.size(), 2u);
  auto coarse_in_fine = numeric_partial_share_check(e, Sample::exp(2), ShareTarget(1), box, 1e-6);
  EXPECT_TRUE(coarse_in_fine.subset);
  EXPECT_TRUE(coarse_in_fine.reliable());

  auto disjoint = numeric_partial_share_check(rational(z - c(1)), rational(z + c(1)), ShareTarget(0L),
                                              Region::box(Rect{-2.1, 2.3, -1.9, 2.2}), 1e-6);
  EXPECT_FALSE(disjoint.subset);
  ASSERT_EQ(disjoint.unmatched.size(), 1u);
  EXPECT_NEAR(std::abs(disjoint.unmatched[0] - 1.0), 0, 1e-9);
}
