#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bsep/bloore.hpp"
#include "bsep/linalg.hpp"
#include "bsep/scenario.hpp"

namespace bsep {

/// Coordinate chart for the off-diagonal part of a point. The diagonal part
/// is always (ρ11, ρ22, ρ33).
enum class Chart { cartesian, polar };

struct MetricTensor {
  Eigen::MatrixXd g;
  std::vector<std::string> labels;

  std::size_t dimension() const { return static_cast<std::size_t>(g.rows()); }
  double determinant() const;
  bool is_symmetric(double tol) const;
};

/// sqrt(det g) with respect to dρ11 dρ22 dρ33 and the off-diagonal coordinates
/// of the chart it was computed in.
struct VolumeElementDensity {
  double value = 0.0;
};

/// Hübner: ds² = scale · Σ_ij |<i|dρ|j>|² / (λ_i + λ_j). The scale was pinned
/// against the closed-form real single-entry element at ρ = I/4.
inline constexpr double kBuresScale = 0.5;

/// The 8×8 embedding counts every quaternionic term twice, so quaternionic
/// pullbacks carry this extra factor on the metric.
inline constexpr double kQuaternionicMetricFactor = 0.5;

/// Smallest eigenvalue of ρ accepted by the Bures pullback.
inline constexpr double kMinEigenvalue = 1e-8;

std::vector<std::string> coordinate_labels(const Scenario& s, Chart chart = Chart::cartesian);

/// Exact ∂ρ/∂coordinate (4×4, or the 8×8 embedding for quaternionic scenarios).
/// Rejects points outside the open positivity region.
std::vector<HermitianMatrix> tangent_basis(const BloorePoint& p, const Scenario& s,
                                           Chart chart = Chart::cartesian);

MetricTensor bures_metric(const BloorePoint& p, const Scenario& s, Chart chart = Chart::cartesian);
MetricTensor hs_metric(const BloorePoint& p, const Scenario& s, Chart chart = Chart::cartesian);

/// Pullback of the scenario's own metric.
MetricTensor metric_tensor(const BloorePoint& p, const Scenario& s, Chart chart = Chart::cartesian);

VolumeElementDensity volume_density_numeric(const BloorePoint& p, const Scenario& s,
                                            Chart chart = Chart::cartesian);

bool has_closed_form(const Scenario& s);

/// Published volume element in its own coordinates: (ρ11, ρ22, mu) for the
/// single-entry and [(1,2),(2,3)] shapes, (ρ11, ρ22, ρ33) for [(1,4),(2,3)];
/// off-diagonal coordinates Cartesian except for the complex and quaternionic
/// cross pair, which use polar/hyperspherical ones. With
/// `include_chart_factor == false` the polar volume factor carried by the
/// cross-pair expressions (r14 r23, r³ sin²θ1 sinθ2 per entry) is left out.
double reference_volume_element(const BloorePoint& p, const Scenario& s,
                            bool include_chart_factor = true);

/// Closed-form density in the same coordinates as `volume_density_numeric`.
/// Hilbert-Schmidt elements come from the triangular Bloore jacobian:
/// 2 · 2^{K/2} · Π_entries (ρ_ii ρ_jj)^{k/2}.
VolumeElementDensity volume_density_closed(const BloorePoint& p, const Scenario& s,
                                           Chart chart = Chart::cartesian);

}  // namespace bsep
