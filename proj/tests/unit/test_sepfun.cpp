#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bsep/error.hpp"
#include "bsep/sepfun.hpp"

using namespace bsep;

namespace {

constexpr double kPi = std::numbers::pi;

double ball_volume(int k, double r) {
  return std::pow(kPi, k / 2.0) / std::tgamma(k / 2.0 + 1.0) * std::pow(r, k);
}

}  // namespace

TEST(Catalog, Contents) {
  EXPECT_EQ(catalog().size(), 14u);
  int with_function = 0;
  for (const auto& e : catalog()) with_function += e.has_separability_function;
  EXPECT_EQ(with_function, 13);
  EXPECT_FALSE(catalog_entry(parse_scenario("bures:[(1,2),(2,3)]:real")).has_separability_function);
  EXPECT_THROW(catalog_entry(parse_scenario("bures:[(1,2)]:real")), Error);
}

TEST(Closed, PublishedValues) {
  EXPECT_NEAR(sep_function_closed(parse_scenario("hs:[(2,3)]:real"), 0.5), 1.0, 1e-15);
  EXPECT_NEAR(sep_function_closed(parse_scenario("bures:[(2,3)]:real"), 1.0), kPi, 1e-15);
  EXPECT_NEAR(sep_function_closed(parse_scenario("bures:[(2,3)]:complex"), 0.6), 0.4 * kPi, 1e-14);
  EXPECT_NEAR(sep_function_closed(parse_scenario("bures:[(1,4),(2,3)]:real"), 2.0), kPi * kPi / 3, 1e-14);
  EXPECT_NEAR(sep_function_closed(parse_scenario("bures:[(2,3)]:quat"), 0.7),
              2 * kPi * kPi / 3 * (2 - 2.49 * std::sqrt(0.51)), 1e-13);
  EXPECT_NEAR(sep_function_closed(parse_scenario("hs:[(2,3)]:quat"), 0.5), 0.308425137534042, 1e-12);
}

TEST(Closed, HilbertSchmidtIsABallVolume) {
  // At fixed diagonal the HS off-diagonal density is flat, so S is the volume
  // of the PPT ball of radius min(mu, 1).
  for (double mu : {0.2, 0.5, 0.9, 1.0, 1.7}) {
    const double m = std::min(mu, 1.0);
    EXPECT_NEAR(sep_function_closed(parse_scenario("hs:[(2,3)]:real"), mu), ball_volume(1, m), 1e-14);
    EXPECT_NEAR(sep_function_closed(parse_scenario("hs:[(2,3)]:complex"), mu), ball_volume(2, m), 1e-14);
    EXPECT_NEAR(sep_function_closed(parse_scenario("hs:[(2,3)]:quat"), mu), ball_volume(4, m), 1e-14);
    EXPECT_NEAR(sep_function_closed(parse_scenario("hs:[(2,3)]:quat-1"), mu), ball_volume(3, m), 1e-14);
    const double c = std::min(mu, 1.0 / mu);
    EXPECT_NEAR(sep_function_closed(parse_scenario("hs:[(1,4),(2,3)]:complex"), mu),
                ball_volume(2, c) * ball_volume(2, 1.0), 1e-13);
  }
}

TEST(Closed, ContinuousAtOne) {
  for (const auto& e : catalog()) {
    if (!e.has_separability_function) continue;
    const double at = sep_function_closed(e.scenario, 1.0);
    EXPECT_NEAR(sep_function_closed(e.scenario, 1.0 - 1e-9), at, 1e-3 * at) << to_string(e.scenario);
    EXPECT_NEAR(sep_function_closed(e.scenario, 1.0 + 1e-9), at, 1e-3 * at) << to_string(e.scenario);
  }
  EXPECT_NEAR(sep_function_closed(parse_scenario("bures:[(2,3)]:quat"), 1.0), 4 * kPi * kPi / 3, 1e-13);
}

TEST(Closed, MonotoneOnTheLowerBranch) {
  for (const auto& e : catalog()) {
    if (!e.has_separability_function) continue;
    double prev = 0.0;
    for (int i = 1; i < 1000; ++i) {
      const double v = sep_function_closed(e.scenario, i / 1000.0);
      EXPECT_GT(v, prev) << to_string(e.scenario) << " at " << i / 1000.0;
      prev = v;
    }
  }
}

TEST(Closed, SymmetriesInMu) {
  for (const auto& e : catalog()) {
    if (!e.has_separability_function) continue;
    const Scenario& s = e.scenario;
    for (double mu : {0.1, 0.4, 0.75, 0.99}) {
      if (s.is_cross_pair()) {
        EXPECT_NEAR(sep_function_closed(s, mu), sep_function_closed(s, 1 / mu), 1e-12 * sep_function_closed(s, mu))
            << to_string(s);
      } else {
        EXPECT_EQ(sep_function_closed(s, 1 / mu), sep_function_closed(s, 1.0)) << to_string(s);
      }
    }
  }
}

TEST(Closed, RejectsNonPositiveMu) {
  const Scenario s = parse_scenario("bures:[(2,3)]:real");
  EXPECT_THROW(sep_function_closed(s, 0.0), Error);
  EXPECT_THROW(sep_function_closed(s, -1.0), Error);
  EXPECT_THROW(sep_function_closed(s, std::nan("")), Error);
  EXPECT_THROW(sep_function_closed(parse_scenario("bures:[(1,2),(2,3)]:real"), 0.5), Error);
}

TEST(Normalize, UnitAtOneAndIdempotent) {
  const SeparabilityFunction f = separability_function(parse_scenario("bures:[(2,3)]:complex"));
  EXPECT_NEAR(f.normalization_value, 2 * kPi, 1e-15);
  EXPECT_FALSE(f.pieces.empty());
  const SeparabilityFunction n = normalize(f);
  EXPECT_DOUBLE_EQ(n(1.0), 1.0);
  EXPECT_DOUBLE_EQ(normalize(n)(0.3), n(0.3));
  EXPECT_NEAR(n(0.6), 0.2, 1e-15);
}

TEST(Normalize, TwoEntryMatchesSingleEntryBelowOne) {
  for (const char* alg : {"real", "complex", "quat"}) {
    const auto one = normalize(separability_function(parse_scenario(std::string("bures:[(2,3)]:") + alg)));
    const auto two = normalize(separability_function(parse_scenario(std::string("bures:[(1,4),(2,3)]:") + alg)));
    for (double mu : {0.1, 0.5, 0.9}) EXPECT_NEAR(one(mu), two(mu), 1e-13) << alg;
  }
}

TEST(Literal, ZeroedComponentVariant) {
  // The literal form is negative below one; the reconstruction is positive
  // and continuous.
  EXPECT_LT(zeroed_quaternion_bures_literal(0.5), 0.0);
  const Scenario s = parse_scenario("bures:[(2,3)]:quat-1");
  EXPECT_GT(sep_function_closed(s, 0.5), 0.0);
  EXPECT_NEAR(zeroed_quaternion_constant(), 4 - std::sqrt(2.0) * std::log(3 + 2 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(conjectured_S_real(1.0), 1.0, 1e-15);
  EXPECT_NEAR(conjectured_S_real(0.5), 0.6875, 1e-15);
}

TEST(Numeric, AgreesWithClosedForms) {
  for (const auto& e : catalog()) {
    if (!e.has_separability_function) continue;
    for (double mu : {0.35, 1.0, 1.6}) {
      const IntegrationResult r = sep_function_numeric(e.scenario, mu);
      const double c = sep_function_closed(e.scenario, mu);
      EXPECT_TRUE(r.converged);
      EXPECT_LE(std::abs(r.estimate - c), std::max(1e-6 * c, 3 * r.error_estimate))
          << to_string(e.scenario) << " mu=" << mu;
    }
  }
}

TEST(Numeric, ClosedAndPullbackWeightsAgree) {
  const Scenario s = parse_scenario("bures:[(1,4),(2,3)]:complex");
  SepNumericOptions closed;
  closed.weights = WeightSource::closed;
  const IntegrationResult a = sep_function_numeric(s, 0.6);
  const IntegrationResult b = sep_function_numeric(s, 0.6, closed);
  EXPECT_NEAR(a.estimate, b.estimate, 1e-7 * a.estimate);
}

TEST(Numeric, QmcEngine) {
  SepNumericOptions opt;
  opt.engine = Engine::qmc;
  const Scenario s = parse_scenario("bures:[(2,3)]:complex");
  const IntegrationResult r = sep_function_numeric(s, 0.8, opt);
  EXPECT_EQ(r.engine, Engine::qmc);
  EXPECT_NEAR(r.estimate, sep_function_closed(s, 0.8), std::max(4 * r.error_estimate, 1e-4));
}

TEST(Grid, IncludesOneAndEndpoints) {
  const auto g = mu_grid(25, 2.0);
  ASSERT_EQ(g.size(), 25u);
  EXPECT_DOUBLE_EQ(g.back(), 2.0);
  EXPECT_GT(g.front(), 0.0);
  EXPECT_NE(std::find(g.begin(), g.end(), 1.0), g.end());
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_EQ(mu_grid(201).size(), 201u);
  EXPECT_THROW(mu_grid(0), Error);
}

TEST(Dyson, HilbertSchmidtPowersCoincide) {
  const DysonReport one = dyson_report(Metric::hs, Family::single_entry, mu_grid(201));
  EXPECT_LE(one.max_dev_rc, 1e-12);
  EXPECT_LE(one.max_dev_rq, 1e-12);
  EXPECT_LE(one.max_dev_cq, 1e-12);
  // No quaternionic two-entry HS function is cataloged.
  const DysonReport two = dyson_report(Metric::hs, Family::two_entry, mu_grid(201));
  EXPECT_FALSE(two.has_quat());
  EXPECT_LE(two.max_dev_rc, 1e-12);
}

TEST(Dyson, BuresOrderingAndCsv) {
  const DysonReport r = dyson_report(Metric::bures, Family::single_entry, mu_grid(201));
  EXPECT_TRUE(r.has_quat());
  for (std::size_t i = 0; i < r.mu.size(); ++i) {
    if (r.mu[i] >= 1.0) continue;
    EXPECT_GE(r.quat[i], r.complex_pow2[i]) << r.mu[i];
    EXPECT_GE(r.complex_pow2[i], r.real_pow4[i]) << r.mu[i];
  }
  EXPECT_GT(r.max_dev_rc, 0.0);
  const std::string csv = r.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "mu,s_real_norm_pow4,s_complex_norm_pow2,s_quat_norm,dev_rc,dev_rq,dev_cq");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 202);
  EXPECT_EQ(parse_family("two"), Family::two_entry);
}
