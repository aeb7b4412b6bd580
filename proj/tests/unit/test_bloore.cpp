#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bsep/bloore.hpp"
#include "bsep/error.hpp"
#include "bsep/scenario.hpp"

using namespace bsep;

namespace {

BloorePoint point(double r11, double r22, double r33, std::vector<double> off) {
  BloorePoint p;
  p.rho11 = r11;
  p.rho22 = r22;
  p.rho33 = r33;
  p.offdiag = std::move(off);
  return p;
}

BloorePoint random_point(std::mt19937_64& rng, const Scenario& s, double off_range = 1.0) {
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> u(-off_range, off_range);
  double d[4], sum = 0.0;
  for (double& v : d) sum += (v = ex(rng));
  std::vector<double> off(s.offdiag_dimension());
  for (double& x : off) x = u(rng);
  return point(d[0] / sum, d[1] / sum, d[2] / sum, off);
}

const char* kAll[] = {"hs:[(2,3)]:real",          "bures:[(2,3)]:complex", "bures:[(2,3)]:quat",
                      "bures:[(2,3)]:quat-1",     "bures:[(1,2),(2,3)]:real",
                      "bures:[(1,4),(2,3)]:real", "bures:[(1,4),(2,3)]:complex",
                      "bures:[(1,4),(2,3)]:quat", "hs:[(1,4)]:complex",
                      "hs:[(1,2)]:real"};

}  // namespace

TEST(Scenario, ParseRoundTrip) {
  for (const char* text : kAll) EXPECT_EQ(to_string(parse_scenario(text)), text);
  EXPECT_EQ(to_string(parse_scenario("bures:[(2,3),(1,4)]:real")), "bures:[(1,4),(2,3)]:real");
}

TEST(Scenario, Dimensions) {
  const Scenario q = parse_scenario("bures:[(1,4),(2,3)]:quat");
  EXPECT_EQ(q.offdiag_dimension(), 8u);
  EXPECT_EQ(q.dimension(), 11u);
  EXPECT_EQ(q.beta(), 4);
  const Scenario z = parse_scenario("bures:[(2,3)]:quat-1");
  EXPECT_EQ(z.entry_coords(0), 3u);
  EXPECT_EQ(z.dimension(), 6u);
  EXPECT_TRUE(parse_scenario("hs:[(1,2),(2,3)]:real").is_chain());
}

TEST(Scenario, RejectsMalformed) {
  for (const char* bad : {"bures", "bures:[(2,3)]", "foo:[(2,3)]:real", "bures:[(2,3)]:octonion",
                          "bures:[(1,3)]:real", "bures:[(2,3),(2,3)]:real", "bures:[]:real",
                          "bures:[(2,3)]:complex-1", "bures:[(2,3)]:quat-2", "bures:(2,3):real",
                          "bures:[(2,3),]:real"}) {
    EXPECT_THROW(parse_scenario(bad), Error) << bad;
  }
}

TEST(Scenario, SelectorNotation) {
  EXPECT_EQ(to_string(parse_selector("bures:[~(2,3)]")), "bures:[(2,3)]:complex");
  EXPECT_EQ(to_string(parse_selector("[^(2,3)]-1", Metric::hs)), "hs:[(2,3)]:quat-1");
  EXPECT_EQ(to_string(parse_selector("hs:[^(1,4),^(2,3)]")), "hs:[(1,4),(2,3)]:quat");
  EXPECT_EQ(to_string(parse_selector("bures:[(2,3)]:real")), "bures:[(2,3)]:real");
  EXPECT_THROW(parse_selector("[~(1,4),(2,3)]"), Error);
  for (const char* text : kAll) {
    const Scenario s = parse_scenario(text);
    EXPECT_EQ(parse_selector(std::string(to_string(s.metric)) + ":" + shape_label(s)), s);
  }
}

TEST(Bloore, ZeroOffDiagonalGivesDiagonalMatrix) {
  const Scenario s = parse_scenario("bures:[(1,4),(2,3)]:complex");
  const BloorePoint p = point(0.1, 0.2, 0.3, {0, 0, 0, 0});
  const ComplexMatrix m = build_rho(p, s).dense();
  const ComplexMatrix expected = Eigen::Vector4cd(0.1, 0.2, 0.3, p.rho44()).asDiagonal();
  EXPECT_EQ(m, expected);
  EXPECT_NEAR(p.rho44(), 0.4, 1e-16);
}

TEST(Bloore, UnitCorrelationIsOnTheBoundary) {
  const Scenario s = parse_scenario("bures:[(2,3)]:real");
  const HermitianMatrix m = build_rho(point(0.25, 0.25, 0.25, {1.0}), s);
  EXPECT_DOUBLE_EQ(m(1, 2).real(), 0.25);
  EXPECT_NEAR(eigenvalues_hermitian(m).min(), 0.0, 1e-15);
}

TEST(Bloore, OffDiagonalEntryScaling) {
  const Scenario s = parse_scenario("hs:[(2,3)]:complex");
  const HermitianMatrix m = build_rho(point(0.1, 0.2, 0.3, {0.4, -0.5}), s);
  const double scale = std::sqrt(0.2 * 0.3);
  EXPECT_NEAR(std::abs(m(1, 2) - Complex(0.4 * scale, -0.5 * scale)), 0.0, 1e-16);
}

TEST(Bloore, TraceIsOne) {
  std::mt19937_64 rng(1);
  for (const char* text : kAll) {
    const Scenario s = parse_scenario(text);
    const double trace_scale = s.quaternionic() ? 2.0 : 1.0;
    for (int t = 0; t < 1000; ++t) {
      EXPECT_NEAR(build_rho(random_point(rng, s), s).trace(), trace_scale, 1e-15);
    }
  }
}

TEST(Bloore, RejectsInvalidDiagonalAndCoordinateCount) {
  const Scenario s = parse_scenario("bures:[(2,3)]:real");
  EXPECT_THROW(build_rho(point(0.5, 0.3, 0.3, {0.0}), s), Error);
  EXPECT_THROW(build_rho(point(0.0, 0.3, 0.3, {0.0}), s), Error);
  EXPECT_THROW(build_rho(point(0.2, 0.3, 0.3, {0.0, 0.1}), s), Error);
}

TEST(Mu, Values) {
  EXPECT_DOUBLE_EQ(mu_of(point(0.25, 0.25, 0.25, {})).mu, 1.0);
  const MuValue m = mu_of(point(0.4, 0.2, 0.2, {}));
  EXPECT_NEAR(m.mu, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(m.nu, 2.0, 1e-14);
}

TEST(Mu, SwapInvertsMu) {
  std::mt19937_64 rng(2);
  const Scenario s = parse_scenario("bures:[(1,4),(2,3)]:real");
  for (int t = 0; t < 100; ++t) {
    const BloorePoint p = random_point(rng, s);
    EXPECT_NEAR(mu_of(p).mu * mu_of(swap_cross_pair(p, s)).mu, 1.0, 1e-12);
  }
}

TEST(Mu, Rho33InvertsMu) {
  for (double mu : {0.1, 0.7, 1.0, 1.9}) {
    const double r33 = rho33_for_mu(0.2, 0.3, mu);
    EXPECT_NEAR(mu_of(point(0.2, 0.3, r33, {})).mu, mu, 1e-13);
    const double h = 1e-6;
    const double fd = (rho33_for_mu(0.2, 0.3, mu + h) - rho33_for_mu(0.2, 0.3, mu - h)) / (2 * h);
    EXPECT_NEAR(drho33_dmu(0.2, 0.3, mu), fd, 1e-8);
    EXPECT_LT(drho33_dmu(0.2, 0.3, mu), 0.0);
  }
  EXPECT_NEAR(mu_of(symmetric_point_for_mu(0.6, {})).mu, 0.6, 1e-14);
}

TEST(Indicator, SingleEntryExamples) {
  const Scenario real = parse_scenario("bures:[(2,3)]:real");
  EXPECT_TRUE(positivity_indicator(point(0.25, 0.25, 0.25, {0.999}), real));
  const Scenario cplx = parse_scenario("bures:[(2,3)]:complex");
  EXPECT_FALSE(positivity_indicator(point(0.25, 0.25, 0.25, {0.8, 0.7}), cplx));
  EXPECT_FALSE(positivity_indicator(point(0.25, 0.25, 0.25, {0.8, 0.7}), cplx, IndicatorRoute::eigen));

  // mu = 0.5: PPT iff x² <= mu².
  EXPECT_TRUE(ppt_indicator(point_from_mu(0.2, 0.3, 0.5, {0.4}), real));
  EXPECT_FALSE(ppt_indicator(point_from_mu(0.2, 0.3, 0.5, {0.6}), real));
  EXPECT_TRUE(ppt_indicator(point_from_mu(0.2, 0.3, 0.5, {0.4}), real, IndicatorRoute::eigen));
  EXPECT_FALSE(ppt_indicator(point_from_mu(0.2, 0.3, 0.5, {0.6}), real, IndicatorRoute::eigen));
}

TEST(Indicator, QuaternionAtMuOneEqualsPositivity) {
  std::mt19937_64 rng(4);
  const Scenario s = parse_scenario("bures:[(2,3)]:quat");
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int inside = 0;
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> off(4);
    for (double& x : off) x = u(rng);
    const BloorePoint p = symmetric_point_for_mu(1.0, off);
    if (positivity_margin(p, s) <= 1e-9) continue;
    ++inside;
    EXPECT_TRUE(ppt_indicator(p, s));
    EXPECT_TRUE(ppt_indicator(p, s, IndicatorRoute::eigen));
  }
  EXPECT_GT(inside, 100);
}

TEST(Indicator, ClosedFormMatchesSpectralRoute) {
  std::mt19937_64 rng(5);
  for (const char* text : kAll) {
    const Scenario s = parse_scenario(text);
    int disagreements = 0;
    for (int t = 0; t < 10000; ++t) {
      const BloorePoint p = random_point(rng, s);
      const double pm = positivity_margin(p, s);
      if (std::abs(pm) > 1e-9 &&
          positivity_indicator(p, s) != positivity_indicator(p, s, IndicatorRoute::eigen)) {
        ++disagreements;
      }
      if (std::abs(pm) > 1e-9 && std::abs(ppt_margin(p, s)) > 1e-9 &&
          ppt_indicator(p, s) != ppt_indicator(p, s, IndicatorRoute::eigen)) {
        ++disagreements;
      }
    }
    EXPECT_EQ(disagreements, 0) << text;
  }
}

TEST(Indicator, CrossPairClosedRegion) {
  std::mt19937_64 rng(6);
  const Scenario s = parse_scenario("bures:[(1,4),(2,3)]:real");
  for (int t = 0; t < 10000; ++t) {
    const BloorePoint p = random_point(rng, s);
    const double nu = mu_of(p).nu;
    const double x14 = p.offdiag[0] * p.offdiag[0];
    const double x23 = p.offdiag[1] * p.offdiag[1];
    const double margin = std::min({std::min(1.0, nu) - x23, std::min(1.0, 1.0 / nu) - x14});
    if (std::abs(margin) < 1e-9) continue;
    EXPECT_EQ(ppt_indicator(p, s, IndicatorRoute::eigen), margin > 0.0);
  }
}

TEST(Indicator, SingleEntryPptDependsOnDiagonalOnlyThroughMu) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.4);
  for (const char* text : {"bures:[(2,3)]:real", "bures:[(2,3)]:complex", "bures:[(2,3)]:quat"}) {
    const Scenario s = parse_scenario(text);
    const std::vector<double> off(s.offdiag_dimension(), 0.7 / std::sqrt(s.offdiag_dimension()));
    for (double mu : {0.5, 0.69, 0.71, 1.3}) {
      const bool expected = ppt_indicator(symmetric_point_for_mu(mu, off), s, IndicatorRoute::eigen);
      for (int t = 0; t < 1000; ++t) {
        const double r11 = u(rng), r22 = u(rng);
        const double r33 = rho33_for_mu(r11, r22, mu);
        if (!(r33 > 0.0) || r11 + r22 + r33 >= 1.0) continue;
        EXPECT_EQ(ppt_indicator(point(r11, r22, r33, off), s, IndicatorRoute::eigen), expected);
      }
    }
  }
}

TEST(Indicator, CrossPairSymmetryUnderSwap) {
  std::mt19937_64 rng(8);
  for (const char* text : {"bures:[(1,4),(2,3)]:real", "bures:[(1,4),(2,3)]:complex",
                           "bures:[(1,4),(2,3)]:quat"}) {
    const Scenario s = parse_scenario(text);
    for (int t = 0; t < 2000; ++t) {
      const BloorePoint p = random_point(rng, s);
      if (std::abs(ppt_margin(p, s)) < 1e-9) continue;
      EXPECT_EQ(ppt_indicator(p, s, IndicatorRoute::eigen),
                ppt_indicator(swap_cross_pair(p, s), s, IndicatorRoute::eigen));
    }
  }
}

TEST(Polar, RoundTripAndJacobian) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (std::size_t k : {2u, 3u, 4u}) {
    for (int t = 0; t < 200; ++t) {
      std::vector<double> c(k);
      for (double& x : c) x = u(rng);
      const auto polar = entry_to_polar(c);
      EXPECT_GE(polar[0], 0.0);
      const auto back = entry_from_polar(polar);
      for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(back[i], c[i], 1e-13);

      // Jacobian against central differences, and its determinant.
      const auto jac = polar_jacobian(polar);
      Eigen::MatrixXd j(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
      for (std::size_t col = 0; col < k; ++col) {
        auto plus = polar, minus = polar;
        plus[col] += 1e-6;
        minus[col] -= 1e-6;
        const auto cp = entry_from_polar(plus), cm = entry_from_polar(minus);
        for (std::size_t row = 0; row < k; ++row) {
          const double fd = (cp[row] - cm[row]) / 2e-6;
          EXPECT_NEAR(jac[row * k + col], fd, 1e-8);
          j(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = jac[row * k + col];
        }
      }
      EXPECT_NEAR(std::abs(j.determinant()), polar_volume_factor(polar), 1e-12);
    }
  }
}
