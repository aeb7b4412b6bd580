#include "run_config.hpp"

#include "bsep/error.hpp"

namespace bsep::cli {

using nlohmann::json;

std::string_view to_string(Format f) {
  switch (f) {
    case Format::table:
      return "table";
    case Format::csv:
      return "csv";
    case Format::json:
      return "json";
  }
  return "?";
}

Format parse_format(std::string_view text) {
  if (text == "table") return Format::table;
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  fail(ErrorKind::invalid_argument, "unknown format '" + std::string(text) + "' (table|csv|json)");
}

namespace {

Engine parse_engine(std::string_view text) {
  if (text == "adaptive") return Engine::adaptive;
  if (text == "qmc") return Engine::qmc;
  fail(ErrorKind::invalid_argument, "unknown engine '" + std::string(text) + "' (adaptive|qmc)");
}

VolumeRoute parse_route(std::string_view text) {
  if (text == "S*J" || text == "sj") return VolumeRoute::factorized;
  if (text == "direct") return VolumeRoute::direct;
  fail(ErrorKind::invalid_argument, "unknown route '" + std::string(text) + "' (sj|direct)");
}

}  // namespace

void to_json(json& j, const RunConfig& c) {
  j = json{{"command", c.command},
           {"scenarios", c.scenarios},
           {"metric", c.metric ? json(std::string(to_string(*c.metric))) : json(nullptr)},
           {"family", std::string(to_string(c.family))},
           {"grid", c.grid},
           {"mu_max", c.mu_max},
           {"rel_tol", c.rel_tol},
           {"max_evals", c.max_evals},
           {"qmc_n", c.qmc_n},
           {"seed", c.seed},
           {"engine", std::string(to_string(c.engine))},
           {"route", std::string(to_string(c.route))},
           {"level", std::string(to_string(c.level))},
           {"all", c.all},
           {"format", std::string(to_string(c.format))},
           {"out", c.out}};
}

void from_json(const json& j, RunConfig& c) {
  RunConfig d;
  d.command = j.value("command", d.command);
  d.scenarios = j.value("scenarios", d.scenarios);
  if (j.contains("metric") && !j["metric"].is_null()) d.metric = parse_metric(j["metric"].get<std::string>());
  if (j.contains("family")) d.family = parse_family(j["family"].get<std::string>());
  d.grid = j.value("grid", d.grid);
  d.mu_max = j.value("mu_max", d.mu_max);
  d.rel_tol = j.value("rel_tol", d.rel_tol);
  d.max_evals = j.value("max_evals", d.max_evals);
  d.qmc_n = j.value("qmc_n", d.qmc_n);
  d.seed = j.value("seed", d.seed);
  if (j.contains("engine")) d.engine = parse_engine(j["engine"].get<std::string>());
  if (j.contains("route")) d.route = parse_route(j["route"].get<std::string>());
  if (j.contains("level")) d.level = parse_verify_level(j["level"].get<std::string>());
  d.all = j.value("all", d.all);
  if (j.contains("format")) d.format = parse_format(j["format"].get<std::string>());
  d.out = j.value("out", d.out);
  c = std::move(d);
}

SepNumericOptions sepfun_options(const RunConfig& c) {
  SepNumericOptions o;
  o.engine = c.engine;
  if (c.rel_tol > 0.0) o.adaptive.rel_tol = c.rel_tol;
  if (c.max_evals > 0) o.adaptive.max_evals = c.max_evals;
  if (c.qmc_n > 0) o.qmc.n_points = c.qmc_n;
  o.qmc.seed = c.seed;
  return o;
}

VolumeOptions volume_options(const RunConfig& c) {
  VolumeOptions o;
  if (c.rel_tol > 0.0) {
    o.rel_tol = c.rel_tol;
    o.inner_rel_tol = std::min(o.inner_rel_tol, c.rel_tol / 100.0);
    o.direct_rel_tol = c.rel_tol;
  }
  if (c.max_evals > 0) o.max_evals = c.max_evals;
  if (c.qmc_n > 0) o.qmc.n_points = c.qmc_n;
  o.qmc.seed = c.seed;
  return o;
}

json to_json(const AdaptiveOptions& o) {
  return {{"engine", "adaptive"},
          {"rel_tol", o.rel_tol},
          {"abs_tol", o.abs_tol},
          {"max_evals", o.max_evals},
          {"size_floor", o.size_floor}};
}

json to_json(const QmcOptions& o) {
  return {{"engine", "qmc"}, {"n_points", o.n_points}, {"seed", o.seed}, {"replicates", o.replicates}};
}

json to_json(const SepNumericOptions& o) {
  return {{"engine", std::string(to_string(o.engine))},
          {"weights", o.weights == WeightSource::pullback ? "pullback" : "closed"},
          {"adaptive", to_json(o.adaptive)},
          {"qmc", to_json(o.qmc)}};
}

json to_json(const VolumeOptions& o) {
  return {{"rel_tol", o.rel_tol},
          {"inner_rel_tol", o.inner_rel_tol},
          {"max_evals", o.max_evals},
          {"outer_max_evals", o.outer_max_evals},
          {"direct_rel_tol", o.direct_rel_tol},
          {"qmc", to_json(o.qmc)}};
}

}  // namespace bsep::cli
