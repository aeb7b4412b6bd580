#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bsep/quadrature.hpp"
#include "bsep/scenario.hpp"
#include "bsep/volumes.hpp"

namespace bsep {

enum class VerifyLevel { quick, full };

std::string_view to_string(VerifyLevel level);
VerifyLevel parse_verify_level(std::string_view text);

/// One measured quantity against its bound.
struct Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  bool skipped = false;

  bool pass() const;
  /// Largest deviation / tolerance over the checks.
  double worst_ratio() const;
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::full;
  std::uint64_t seed = 1;
};

/// Sup-deviations of the normalised Bures curves on the 201-point grid over (0, 2],
/// pinned from the first run: (real-complex, real-quat, complex-quat).
struct DysonPin {
  double rc;
  double rq;
  double cq;
};
inline constexpr DysonPin kBuresDysonSingle{0.067917425665447118, 0.1415740560175679,
                                            0.074049014283148418};
inline constexpr DysonPin kBuresDysonTwo{0.067917425665447118, 0.14167428449549507,
                                         0.074049014283148418};
/// Upper bound asked of the Bures sup-deviations.
inline constexpr double kBuresDysonBound = 0.05;

inline constexpr int kCriteria = 8;

/// Runs the numbered acceptance criteria. Volumes computed for one criterion
/// are reused by later ones within the same verifier.
class Verifier {
 public:
  explicit Verifier(VerifyOptions opt = {});

  CriterionResult run(int id);
  std::vector<CriterionResult> run_all();

  const VerifyOptions& options() const { return opt_; }
  static std::string_view title(int id);

 private:
  const IntegrationResult& total(const Scenario& s);
  const IntegrationResult& separable(const Scenario& s);

  CriterionResult density_elements();
  CriterionResult separability_functions();
  CriterionResult total_volumes();
  CriterionResult separable_volumes();
  CriterionResult hs_probabilities();
  CriterionResult dyson();
  CriterionResult symmetries();
  CriterionResult properties();

  VerifyOptions opt_;
  VolumeOptions volume_opt_;
  std::map<std::string, IntegrationResult> totals_;
  std::map<std::string, IntegrationResult> separables_;
};

}  // namespace bsep
