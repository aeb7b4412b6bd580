#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bsep {

enum class Substitution { identity, arcsine };

using Density = std::function<double(std::span<const double>)>;
using Indicator = std::function<bool(std::span<const double>)>;

/// Integrand over a box, optionally restricted to {indicator == true}.
/// The density is only evaluated where the indicator holds.
struct IntegrandSpec {
  std::size_t dimension = 0;
  std::vector<double> lo;
  std::vector<double> hi;
  Density density;
  Indicator indicator;  ///< empty means the whole box
  std::vector<Substitution> substitutions;

  static IntegrandSpec box(std::vector<double> lo, std::vector<double> hi, Density density,
                           Indicator indicator = {});
};

enum class Engine { adaptive, qmc };

struct IntegrationResult {
  double estimate = 0.0;
  double error_estimate = 0.0;
  std::uint64_t evaluations = 0;
  Engine engine = Engine::adaptive;
  std::uint64_t seed = 0;  ///< qmc only
  bool converged = true;
};

std::string_view to_string(Engine e);

struct AdaptiveOptions {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  std::uint64_t max_evals = 50'000'000;
  /// Mixed cells stop splitting below this fraction of the box width per axis.
  double size_floor = 1e-6;
};

/// Tensor Gauss-Legendre (4-point, error from the embedded 3-point rule) with
/// global heap-driven bisection. Cells whose indicator samples disagree are
/// split across the axis where their vertices disagree.
IntegrationResult integrate_adaptive(const IntegrandSpec& spec, const AdaptiveOptions& opt = {});

struct QmcOptions {
  std::uint64_t n_points = 1u << 22;  ///< total, split across replicates
  std::uint64_t seed = 1;
  unsigned replicates = 8;
  unsigned threads = 1;
};

/// Sobol points with an independent random linear scramble and digital shift
/// per replicate. The estimate is the replicate mean, the error its standard
/// error. Results do not depend on `threads`.
IntegrationResult integrate_qmc(const IntegrandSpec& spec, const QmcOptions& opt = {});

/// x = c + h sin t on axis `axis`, t in [-pi/2, pi/2]; density picks up h cos t.
/// Removes inverse-square-root singularities at either end of the axis.
IntegrandSpec apply_substitution(const IntegrandSpec& spec, std::size_t axis, Substitution kind);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

/// Sum with a fixed pairwise tree, independent of how values were produced.
double pairwise_sum(std::span<const double> v);

}  // namespace bsep
