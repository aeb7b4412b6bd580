#pragma once

#include <string>
#include <vector>

#include "bsep/quadrature.hpp"
#include "bsep/scenario.hpp"

namespace bsep {

struct CatalogEntry {
  Scenario scenario;
  /// False for shapes whose volume element does not factor (S is undefined).
  bool has_separability_function = true;
  /// Cataloged S = factor · (raw off-diagonal integral of the unit-normalised weight).
  double convention_factor = 1.0;
};

/// Every cataloged scenario, HS rows first, in a fixed order.
const std::vector<CatalogEntry>& catalog();

/// Throws `unsupported` for scenarios outside the catalog.
const CatalogEntry& catalog_entry(const Scenario& s);

struct SepPiece {
  std::string domain;      ///< e.g. "0<mu<1"
  std::string expression;  ///< human-readable formula
};

struct SeparabilityFunction {
  Scenario scenario;
  std::vector<SepPiece> pieces;
  double normalization_value = 1.0;  ///< value at mu = 1 before any scaling
  double divisor = 1.0;              ///< evaluation returns closed(mu) / divisor

  double operator()(double mu) const;
};

/// Exact piecewise formula for the scenario.
double sep_function_closed(const Scenario& s, double mu);

SeparabilityFunction separability_function(const Scenario& s);

/// Pointwise division by f(1); idempotent.
SeparabilityFunction normalize(const SeparabilityFunction& f);

enum class WeightSource { closed, pullback };

struct SepNumericOptions {
  Engine engine = Engine::adaptive;
  /// Where the off-diagonal weight comes from. `closed` falls back to the
  /// pullback for scenarios without a closed-form element.
  WeightSource weights = WeightSource::pullback;
  AdaptiveOptions adaptive{1e-8, 0.0, 2'000'000, 1e-13};
  QmcOptions qmc{1u << 20, 1, 8, 1};
};

/// Off-diagonal weight integrated over the positive, PPT part of the
/// off-diagonal coordinates at the given mu, times the catalog convention
/// factor. The adaptive engine works in one radial coordinate per entry
/// (angles done exactly); the qmc engine samples the Cartesian cube [-1,1]^K.
IntegrationResult sep_function_numeric(const Scenario& s, double mu,
                                       const SepNumericOptions& opt = {});

/// The raw integral without the convention factor.
IntegrationResult sep_function_raw(const Scenario& s, double mu, const SepNumericOptions& opt = {});

/// Conjectured real separability function, unnormalised: (3 - mu²) mu / 2.
double conjectured_S_real(double mu);

/// Literal transcription of the zeroed-component Bures function, sign and
/// grouping kept (negative on 0 < mu < 1). Only for comparison with the
/// reconstruction used by `sep_function_closed`.
double zeroed_quaternion_bures_literal(double mu);

/// (4 - sqrt2 log(3 + 2 sqrt2)), the constant in the zeroed-component Bures function.
double zeroed_quaternion_constant();

enum class Family { single_entry, two_entry };

std::string_view to_string(Family f);
Family parse_family(std::string_view text);

/// n points mu_max·i/n (i = 1..n); the point nearest 1 is replaced by 1 when
/// 1 lies inside (0, mu_max].
std::vector<double> mu_grid(std::size_t n = 201, double mu_max = 2.0);

struct DysonReport {
  Metric metric = Metric::bures;
  Family family = Family::single_entry;
  std::vector<double> mu;
  std::vector<double> real_pow4;     ///< (S_real / S_real(1))^4
  std::vector<double> complex_pow2;  ///< (S_complex / S_complex(1))^2
  std::vector<double> quat;          ///< S_quat / S_quat(1); NaN when not cataloged
  std::vector<double> dev_rc;
  std::vector<double> dev_rq;
  std::vector<double> dev_cq;
  double max_dev_rc = 0.0;
  double max_dev_rq = 0.0;
  double max_dev_cq = 0.0;

  bool has_quat() const;
  std::string to_csv() const;
};

DysonReport dyson_report(Metric metric, Family family, const std::vector<double>& grid);

}  // namespace bsep
