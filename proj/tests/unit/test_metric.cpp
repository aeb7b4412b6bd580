#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "bsep/bloore.hpp"
#include "bsep/error.hpp"
#include "bsep/metric.hpp"
#include "bsep/scenario.hpp"

using namespace bsep;

namespace {

// Interior point: Dirichlet diagonal bounded away from the faces and
// off-diagonal coordinates shrunk until ρ is comfortably positive.
BloorePoint random_interior(std::mt19937_64& rng, const Scenario& s) {
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (;;) {
    double d[4], sum = 0.0;
    for (double& v : d) sum += (v = ex(rng));
    BloorePoint p;
    p.rho11 = 0.04 + 0.84 * d[0] / sum;
    p.rho22 = 0.04 + 0.84 * d[1] / sum;
    p.rho33 = 0.04 + 0.84 * d[2] / sum;
    p.offdiag.resize(s.offdiag_dimension());
    for (double& x : p.offdiag) x = u(rng);
    if (positivity_margin(p, s) > 0.05 && eigenvalues_hermitian(build_rho(p, s)).min() > 1e-3) return p;
  }
}

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const Eigen::VectorXd l = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().adjoint();
}

// sqrt of the Uhlmann fidelity, Tr sqrt(sqrt(ρ) σ sqrt(ρ)).
double root_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  const Eigen::MatrixXcd r = psd_sqrt(rho);
  Eigen::MatrixXcd m = r * sigma * r;
  m = (m + m.adjoint()).eval() / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

// Quadratic form of the Bures metric from the Bures distance
// d² = 2(tr ρ - Tr sqrt(sqrt(ρ)σ sqrt(ρ))), symmetrised in h and Richardson
// extrapolated. Trace-2 quaternionic embeddings use the same distance with tr ρ = 2.
double bures_quadratic_form(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& v, double h) {
  const double tr = rho.trace().real();
  auto d2 = [&](double t) {
    const Eigen::MatrixXcd sigma = rho + t * v;
    return 2.0 * (tr - root_fidelity(rho, sigma));
  };
  auto q = [&](double t) { return (d2(t) + d2(-t)) / (2.0 * t * t); };
  return (4.0 * q(h / 2) - q(h)) / 3.0;
}

const char* kScenarios[] = {"bures:[(2,3)]:real",       "bures:[(2,3)]:complex",
                            "bures:[(2,3)]:quat",       "bures:[(1,2),(2,3)]:real",
                            "bures:[(1,4),(2,3)]:real", "bures:[(1,4),(2,3)]:complex",
                            "bures:[(1,4),(2,3)]:quat", "bures:[(2,3)]:quat-1",
                            "bures:[(1,2)]:complex"};

}  // namespace

TEST(Tangent, MatchesFiniteDifferencesOfRho) {
  std::mt19937_64 rng(1);
  for (const char* text : kScenarios) {
    const Scenario s = parse_scenario(text);
    const BloorePoint p = random_interior(rng, s);
    const auto basis = tangent_basis(p, s);
    ASSERT_EQ(basis.size(), s.dimension());
    const double h = 1e-6;
    for (std::size_t i = 0; i < s.dimension(); ++i) {
      BloorePoint a = p, b = p;
      double* ca = i == 0 ? &a.rho11 : i == 1 ? &a.rho22 : i == 2 ? &a.rho33 : &a.offdiag[i - 3];
      double* cb = i == 0 ? &b.rho11 : i == 1 ? &b.rho22 : i == 2 ? &b.rho33 : &b.offdiag[i - 3];
      *ca += h;
      *cb -= h;
      const ComplexMatrix fd = (build_rho(a, s).dense() - build_rho(b, s).dense()) / (2 * h);
      EXPECT_LT((fd - basis[i].dense()).cwiseAbs().maxCoeff(), 1e-9) << text << " coord " << i;
    }
  }
}

TEST(Bures, MatchesFidelityOracle) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (const char* text : kScenarios) {
    const Scenario s = parse_scenario(text);
    for (int t = 0; t < 5; ++t) {
      const BloorePoint p = random_interior(rng, s);
      const ComplexMatrix rho = build_rho(p, s).dense();
      const auto basis = tangent_basis(p, s);
      const MetricTensor m = bures_metric(p, s);
      Eigen::VectorXd c(static_cast<Eigen::Index>(s.dimension()));
      ComplexMatrix v = ComplexMatrix::Zero(rho.rows(), rho.cols());
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        c(i) = g(rng);
        v += c(i) * basis[static_cast<std::size_t>(i)].dense();
      }
      double oracle = bures_quadratic_form(rho, v, 2e-4);
      if (s.quaternionic()) oracle *= 0.5;
      const double value = c.dot(m.g * c);
      EXPECT_NEAR(value, oracle, 1e-5 * std::abs(oracle)) << text;
    }
  }
}

TEST(Bures, EqualsHilbertSchmidtAtMaximallyMixed) {
  for (const char* text : {"bures:[(2,3)]:real", "bures:[(1,4),(2,3)]:complex", "bures:[(1,2),(2,3)]:real"}) {
    const Scenario s = parse_scenario(text);
    BloorePoint p;
    p.offdiag.assign(s.offdiag_dimension(), 0.0);
    const MetricTensor b = bures_metric(p, s);
    const MetricTensor h = hs_metric(p, s);
    EXPECT_LT((b.g - h.g).cwiseAbs().maxCoeff(), 1e-14) << text;
  }
}

TEST(HilbertSchmidt, OffDiagonalComponent) {
  const Scenario s = parse_scenario("hs:[(2,3)]:real");
  BloorePoint p;
  p.rho11 = 0.1;
  p.rho22 = 0.2;
  p.rho33 = 0.3;
  p.offdiag = {0.4};
  const MetricTensor m = hs_metric(p, s);
  EXPECT_NEAR(m.g(3, 3), 2 * 0.2 * 0.3, 1e-15);
  // Diagonal block: tr(dρ dρ) with ρ44 = 1 - ρ11 - ρ22 - ρ33.
  EXPECT_NEAR(m.g(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(m.g(0, 1), 1.0, 1e-15);
}

TEST(Metric, SymmetricPositiveDefinite) {
  std::mt19937_64 rng(3);
  for (const char* text : kScenarios) {
    for (Metric metric : {Metric::bures, Metric::hs}) {
      Scenario s = parse_scenario(text);
      s.metric = metric;
      for (Chart chart : {Chart::cartesian, Chart::polar}) {
        const BloorePoint p = random_interior(rng, s);
        const MetricTensor m = metric_tensor(p, s, chart);
        EXPECT_TRUE(m.is_symmetric(1e-13));
        EXPECT_EQ(m.labels.size(), s.dimension());
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.g).eigenvalues().minCoeff(), 0.0) << text;
        EXPECT_GT(m.determinant(), 0.0);
      }
    }
  }
}

TEST(Density, ClosedFormMatchesPullback) {
  std::mt19937_64 rng(4);
  for (const char* text : kScenarios) {
    for (Metric metric : {Metric::bures, Metric::hs}) {
      Scenario s = parse_scenario(text);
      s.metric = metric;
      if (!has_closed_form(s)) continue;
      for (int t = 0; t < 50; ++t) {
        const BloorePoint p = random_interior(rng, s);
        const double n = volume_density_numeric(p, s).value;
        const double c = volume_density_closed(p, s).value;
        EXPECT_NEAR(c, n, 1e-9 * n) << to_string(s);
      }
    }
  }
}

TEST(Density, PolarChartCarriesTheRadialFactor) {
  std::mt19937_64 rng(5);
  for (const char* text : {"bures:[(2,3)]:complex", "bures:[(1,4),(2,3)]:quat", "hs:[(2,3)]:quat"}) {
    const Scenario s = parse_scenario(text);
    const BloorePoint p = random_interior(rng, s);
    double factor = 1.0;
    for (std::size_t e = 0; e < s.entries.size(); ++e) {
      factor *= polar_volume_factor(entry_to_polar(entry_coords(p, s, e)));
    }
    EXPECT_NEAR(volume_density_numeric(p, s, Chart::polar).value,
                volume_density_numeric(p, s).value * factor, 1e-10 * factor);
  }
}

TEST(Density, PublishedElementUsesMuCoordinate) {
  std::mt19937_64 rng(6);
  for (const char* text : {"bures:[(2,3)]:real", "bures:[(2,3)]:complex", "bures:[(2,3)]:quat",
                           "bures:[(1,2),(2,3)]:real"}) {
    const Scenario s = parse_scenario(text);
    for (int t = 0; t < 20; ++t) {
      const BloorePoint p = random_interior(rng, s);
      const double mu = mu_of(p).mu;
      const double expected = volume_density_numeric(p, s).value * std::abs(drho33_dmu(p.rho11, p.rho22, mu));
      EXPECT_NEAR(reference_volume_element(p, s), expected, 1e-9 * expected) << text;
    }
  }
}

TEST(Density, CrossPairSwapSymmetry) {
  // Swapping ρ11 <-> ρ22 and ρ33 <-> ρ44 maps mu to 1/mu and preserves the density.
  std::mt19937_64 rng(7);
  for (const char* text : {"bures:[(1,4),(2,3)]:real", "bures:[(1,4),(2,3)]:complex"}) {
    const Scenario s = parse_scenario(text);
    for (int t = 0; t < 20; ++t) {
      BloorePoint p = random_interior(rng, s);
      BloorePoint q = p;
      q.rho11 = p.rho22;
      q.rho22 = p.rho11;
      q.rho33 = p.rho44();
      EXPECT_NEAR(mu_of(q).mu * mu_of(p).mu, 1.0, 1e-12);
      const double a = volume_density_numeric(p, s).value;
      EXPECT_NEAR(volume_density_numeric(q, s).value, a, 1e-9 * a) << text;
    }
  }
}

TEST(Bures, RejectsNearSingularStates) {
  const Scenario s = parse_scenario("bures:[(2,3)]:real");
  BloorePoint p;
  p.offdiag = {1.0 - 1e-12};
  try {
    bures_metric(p, s);
    FAIL() << "expected near_singular";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::near_singular);
  }
  EXPECT_NO_THROW(hs_metric(p, s));
}
