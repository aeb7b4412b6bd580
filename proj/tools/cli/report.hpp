#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "run_config.hpp"

namespace bsep::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitVerifyFailed = 2,
  kExitUnsupported = 3,
  kExitNotConverged = 4,
};

/// Rows are JSON objects; `columns` picks and orders the keys shown in table
/// and CSV output. JSON output keeps every key.
struct Report {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<nlohmann::json> rows;
  nlohmann::json summary = nlohmann::json::object();
  int status = kExitOk;
};

std::string render(const Report& r, Format f);

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace bsep::cli
