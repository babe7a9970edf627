#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include <nevlab/generators.hpp>
#include <nevlab/roots.hpp>

using namespace nevlab;

namespace {

const Polynomial z = Polynomial::z();
Polynomial c(long v) { return Polynomial::constant(v); }

// nearest found root to target
const NumericRoot& nearest(const NumericRootSet& s, complex target) {
  return *std::min_element(s.roots.begin(), s.roots.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.location - target) < std::abs(b.location - target);
  });
}

}  // namespace

TEST(RootFind, Examples) {
  auto a = root_find(z * z - c(1));
  ASSERT_EQ(a.roots.size(), 2u);
  EXPECT_NEAR(std::abs(nearest(a, 1.0).location - 1.0), 0, 1e-14);
  EXPECT_NEAR(std::abs(nearest(a, -1.0).location + 1.0), 0, 1e-14);
  EXPECT_EQ(a.roots[0].multiplicity, 1);

  auto b = root_find((z - c(1)).pow(2));
  ASSERT_EQ(b.roots.size(), 1u);
  EXPECT_EQ(b.roots[0].multiplicity, 2);
  EXPECT_NEAR(std::abs(b.roots[0].location - 1.0), 0, 1e-14);

  auto d = root_find(z.pow(4) + c(2));
  ASSERT_EQ(d.roots.size(), 4u);
  for (int j = 0; j < 4; ++j) {
    complex expected = std::polar(std::pow(2.0, 0.25), (std::numbers::pi + 2 * std::numbers::pi * j) / 4);
    EXPECT_LT(std::abs(nearest(d, expected).location - expected), 1e-13);
  }
}

TEST(RootFind, RejectsConstants) {
  EXPECT_THROW(root_find(c(3)), std::domain_error);
  EXPECT_THROW(root_find(Polynomial()), std::domain_error);
}

TEST(RootFind, MultiplicitiesFromDecomposition) {
  Polynomial p = (z * z + c(1)).pow(2) * (z - c(3)).pow(3) * z;
  auto s = root_find(p);
  EXPECT_EQ(s.total_multiplicity(), p.degree().value());
  EXPECT_EQ(nearest(s, complex(0, 1)).multiplicity, 2);
  EXPECT_EQ(nearest(s, complex(0, -1)).multiplicity, 2);
  EXPECT_EQ(nearest(s, 3.0).multiplicity, 3);
  EXPECT_EQ(nearest(s, 0.0).multiplicity, 1);
}

TEST(RootFind, RecoversPlantedRoots) {
  RandomSource rng(31);
  for (int i = 0; i < 60; ++i) {
    FactoredBounds b;
    b.max_pole_sites = 0;
    b.max_zero_sites = 5;
    FactoredRational f = random_factored(rng, b);
    Polynomial p = expand(f).numerator();
    auto s = root_find(p, 1e-12);
    EXPECT_EQ(s.total_multiplicity(), p.degree().value());
    ASSERT_EQ(s.roots.size(), f.zeros().size());
    for (const auto& planted : f.zeros()) {
      complex target = planted.root.to_complex();
      const auto& got = nearest(s, target);
      EXPECT_LE(std::abs(got.location - target), got.error_bound + 1e-15) << i;
      EXPECT_EQ(got.multiplicity, planted.multiplicity);
    }
    for (std::size_t a = 0; a < s.roots.size(); ++a)
      for (std::size_t c2 = a + 1; c2 < s.roots.size(); ++c2)
        EXPECT_GT(std::abs(s.roots[a].location - s.roots[c2].location),
                  s.roots[a].error_bound + s.roots[c2].error_bound);
  }
}

// Clusters of roots far from the origin make double-precision evaluation in
// the monomial basis noisy; the exact residual still certifies them.
TEST(RootFind, CertifiesOffsetClusters) {
  Polynomial center = Polynomial::linear(GaussianRational(7, 1, 7, 2));
  Polynomial p = center.pow(11) - Polynomial::constant(GaussianRational(1, 1000));
  auto s = root_find(p, 1e-12);
  ASSERT_EQ(s.roots.size(), 11u);
  for (const auto& r : s.roots) EXPECT_NEAR(std::abs(r.location - complex(7, 3.5)), std::pow(1e-3, 1.0 / 11), 1e-12);
}

TEST(ClusteredRoots, MergesMultipleRoots) {
  auto cl = clustered_roots(((z - c(2)).pow(2) * (z + c(1))).to_numeric(), 1e-4);
  ASSERT_EQ(cl.size(), 2u);
  int total = cl[0].multiplicity + cl[1].multiplicity;
  EXPECT_EQ(total, 3);
}
