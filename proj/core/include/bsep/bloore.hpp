#pragma once

#include <array>
#include <span>
#include <vector>

#include "bsep/linalg.hpp"
#include "bsep/scenario.hpp"

namespace bsep {

/// One density matrix of a scenario in Bloore coordinates: three free diagonal
/// entries (ρ44 is implied by unit trace) and, per free entry, the Cartesian
/// coordinates (x, y, u, v) of ρ_ij / sqrt(ρ_ii ρ_jj), as many as the algebra allows.
struct BloorePoint {
  double rho11 = 0.25;
  double rho22 = 0.25;
  double rho33 = 0.25;
  std::vector<double> offdiag;

  double rho44() const { return 1.0 - rho11 - rho22 - rho33; }
  std::array<double, 4> diagonal() const { return {rho11, rho22, rho33, rho44()}; }
};

struct MuValue {
  double mu = 1.0;
  double nu = 1.0;  ///< mu²
};

/// mu = sqrt(ρ11 ρ44 / (ρ22 ρ33)).
MuValue mu_of(const BloorePoint& p);

/// ρ33 that realises `mu` for the given ρ11 and ρ22.
double rho33_for_mu(double rho11, double rho22, double mu);

/// d ρ33 / d mu at fixed ρ11, ρ22 (always negative).
double drho33_dmu(double rho11, double rho22, double mu);

/// Point with ρ33 eliminated in favour of mu.
BloorePoint point_from_mu(double rho11, double rho22, double mu, std::vector<double> offdiag);

/// The point ρ11 = ρ44, ρ22 = ρ33 with the given mu.
BloorePoint symmetric_point_for_mu(double mu, std::vector<double> offdiag);

/// Throws unless the diagonal is strictly positive and the coordinate count
/// matches the scenario.
void validate(const BloorePoint& p, const Scenario& s);

/// Coordinates of free entry `e` inside `p.offdiag`.
std::span<const double> entry_coords(const BloorePoint& p, const Scenario& s, std::size_t e);

/// Quaternion value of the Bloore coordinates of entry `e` (y, u, v are zero
/// where the algebra or zeroed components remove them).
Quaternion entry_value(const BloorePoint& p, const Scenario& s, std::size_t e);

/// ρ itself: 4×4 for real/complex scenarios, the 8×8 embedding for quaternionic ones.
HermitianMatrix build_rho(const BloorePoint& p, const Scenario& s);

/// The quaternionic 4×4 form (works for every algebra).
QuaternionMatrix4 build_rho_quaternionic(const BloorePoint& p, const Scenario& s);

/// Closed forms are fast paths; `eigen` always decides from spectra.
enum class IndicatorRoute { closed_form, eigen };

bool positivity_indicator(const BloorePoint& p, const Scenario& s,
                          IndicatorRoute route = IndicatorRoute::closed_form);

/// Positive partial transpose AND positivity of ρ.
bool ppt_indicator(const BloorePoint& p, const Scenario& s,
                   IndicatorRoute route = IndicatorRoute::closed_form);

/// Signed margins of the closed-form constraints (negative means violated).
/// Used to keep property tests clear of the boundary layer.
double positivity_margin(const BloorePoint& p, const Scenario& s);
double ppt_margin(const BloorePoint& p, const Scenario& s);

/// Cartesian <-> polar/spherical/hyperspherical coordinates of one entry.
/// k = 2: (r, θ); k = 3: (r, θ1, θ2); k = 4: (r, θ1, θ2, θ3) with
/// c = r (cos θ1, sin θ1 cos θ2, sin θ1 sin θ2 cos θ3, sin θ1 sin θ2 sin θ3).
/// A single real coordinate is its own chart.
std::vector<double> entry_to_polar(std::span<const double> cart);
std::vector<double> entry_from_polar(std::span<const double> polar);

/// d(cartesian)/d(polar) for one entry, row-major k×k.
std::vector<double> polar_jacobian(std::span<const double> polar);

/// |det| of `polar_jacobian`: r for k = 2, r² sin θ1 for k = 3, r³ sin² θ1 sin θ2 for k = 4.
double polar_volume_factor(std::span<const double> polar);

/// Swaps (ρ11, ρ44) with (ρ22, ρ33) and the (1,4) and (2,3) coordinates, which
/// sends mu to 1/mu. Only meaningful for the cross-pair shape.
BloorePoint swap_cross_pair(const BloorePoint& p, const Scenario& s);

}  // namespace bsep
