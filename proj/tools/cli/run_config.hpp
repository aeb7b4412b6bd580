#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bsep/scenario.hpp"
#include "bsep/sepfun.hpp"
#include "bsep/verify.hpp"
#include "bsep/volumes.hpp"

namespace bsep::cli {

enum class Format { table, csv, json };

std::string_view to_string(Format f);
Format parse_format(std::string_view text);

/// Everything a command needs; zero/empty fields mean "command default".
struct RunConfig {
  std::string command;
  std::vector<std::string> scenarios;
  std::optional<Metric> metric;
  Family family = Family::single_entry;
  std::size_t grid = 0;
  double mu_max = 2.0;
  double rel_tol = 0.0;
  std::uint64_t max_evals = 0;
  std::uint64_t qmc_n = 0;
  std::uint64_t seed = 1;
  Engine engine = Engine::adaptive;
  VolumeRoute route = VolumeRoute::factorized;
  VerifyLevel level = VerifyLevel::quick;
  bool all = false;
  Format format = Format::table;
  std::string out;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

/// Engine settings after the command-line overrides are applied.
SepNumericOptions sepfun_options(const RunConfig& c);
VolumeOptions volume_options(const RunConfig& c);

nlohmann::json to_json(const AdaptiveOptions& o);
nlohmann::json to_json(const QmcOptions& o);
nlohmann::json to_json(const SepNumericOptions& o);
nlohmann::json to_json(const VolumeOptions& o);

}  // namespace bsep::cli
