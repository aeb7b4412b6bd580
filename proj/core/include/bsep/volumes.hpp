#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bsep/quadrature.hpp"
#include "bsep/scenario.hpp"

namespace bsep {

/// factorized: ∫ S(mu) J(mu) dmu over mu in (0,1] and nu = 1/mu in (0,1]; for
/// totals S is the constant S(1) and ∫ J dmu is taken over the diagonal simplex.
/// direct: the density integrated over diagonal and radial coordinates at once.
enum class VolumeRoute { factorized, direct };

std::string_view to_string(VolumeRoute r);

struct VolumeOptions {
  double rel_tol = 1e-6;         ///< outer mu integral (factorized) or whole integral (direct)
  double inner_rel_tol = 1e-8;   ///< each J(mu)
  std::uint64_t max_evals = 20'000'000;  ///< per inner J, and for the direct route
  std::uint64_t outer_max_evals = 5'000;  ///< J evaluations per branch
  double direct_rel_tol = 1e-4;  ///< direct totals; a cross-check route
  QmcOptions qmc{1u << 20, 1, 8, 1};  ///< direct separable volumes
};

/// Diagonal factor of the Cartesian volume element at the diagonal (d1, d2, d3, d4):
/// the density at zero off-diagonal coordinates.
double diagonal_factor(const Scenario& s, const std::array<double, 4>& d);

/// J(mu): the diagonal factor integrated over all diagonals with the given mu.
/// Volumes are ∫ S J dmu with the published S, so they carry the catalog
/// convention factor; the direct route multiplies it in as well.
IntegrationResult marginal_jacobian(const Scenario& s, double mu, const VolumeOptions& opt = {});

/// J(1/nu) / nu², the integrand of the nu branch.
IntegrationResult marginal_jacobian_nu(const Scenario& s, double nu, const VolumeOptions& opt = {});

IntegrationResult total_volume(const Scenario& s, VolumeRoute route = VolumeRoute::factorized,
                               const VolumeOptions& opt = {});

/// Direct route runs qmc with the PPT indicator.
IntegrationResult separable_volume(const Scenario& s, VolumeRoute route = VolumeRoute::factorized,
                                   const VolumeOptions& opt = {});

struct Probability {
  double value = 0.0;
  double error = 0.0;
};

/// Ratio with relative errors added in quadrature.
Probability separability_probability(const IntegrationResult& separable,
                                     const IntegrationResult& total);

enum class Quantity { total, separable, probability };

std::string_view to_string(Quantity q);

struct ReferenceRow {
  Scenario scenario;
  Quantity quantity = Quantity::total;
  double value = 0.0;
  std::string expression;
};

/// Every published total, separable volume and probability, in catalog order.
const std::vector<ReferenceRow>& reference_table();

std::optional<ReferenceRow> find_reference(const Scenario& s, Quantity q);

inline constexpr double kCatalan = 0.915965594177219015054603514932;

struct VolumeReport {
  Scenario scenario;
  IntegrationResult total;
  IntegrationResult separable;
  Probability probability;
  VolumeRoute total_route = VolumeRoute::factorized;
  VolumeRoute separable_route = VolumeRoute::factorized;
  std::optional<ReferenceRow> reference;  ///< probability row, when published
  double rel_dev_from_reference = 0.0;
};

/// Whether `total_volume` / `separable_volume` accept the scenario.
bool volumes_supported(const Scenario& s);

VolumeReport volume_report(const Scenario& s, const VolumeOptions& opt = {},
                           VolumeRoute route = VolumeRoute::factorized);

}  // namespace bsep
