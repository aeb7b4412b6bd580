#pragma once

#include "report.hpp"
#include "run_config.hpp"

namespace bsep::cli {

Report cmd_list(const RunConfig& c);
Report cmd_sepfun(const RunConfig& c);
Report cmd_volumes(const RunConfig& c);
Report cmd_figures(const RunConfig& c);
Report cmd_verify(const RunConfig& c);

/// Dispatches on `c.command`.
Report run_command(const RunConfig& c);

}  // namespace bsep::cli
