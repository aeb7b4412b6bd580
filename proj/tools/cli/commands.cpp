#include "commands.hpp"

#include <cmath>

#include "bsep/error.hpp"
#include "bsep/metric.hpp"

namespace bsep::cli {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json base_config(const RunConfig& c) {
  json j;
  to_json(j, c);
  return j;
}

bool metric_matches(const RunConfig& c, const Scenario& s) { return !c.metric || *c.metric == s.metric; }

// Explicit --scenario selectors, or every catalog entry accepted by `keep`
// under --all.
template <class Keep>
std::vector<Scenario> select(const RunConfig& c, Keep keep) {
  std::vector<Scenario> out;
  if (c.all) {
    for (const auto& e : catalog()) {
      if (metric_matches(c, e.scenario) && keep(e)) out.push_back(e.scenario);
    }
    return out;
  }
  if (c.scenarios.empty()) fail(ErrorKind::invalid_argument, "give --scenario or --all");
  for (const auto& text : c.scenarios) out.push_back(parse_selector(text, c.metric.value_or(Metric::bures)));
  return out;
}

}  // namespace

Report cmd_list(const RunConfig& c) {
  Report r;
  r.command = "list";
  r.config = base_config(c);
  r.columns = {"scenario",   "label",         "metric",     "algebra",
               "beta",       "offdiag_dim",   "dimension",  "closed_form_element",
               "sep_function", "convention_factor"};
  for (const auto& e : catalog()) {
    const Scenario& s = e.scenario;
    if (!metric_matches(c, s)) continue;
    r.rows.push_back({{"scenario", to_string(s)},
                      {"label", shape_label(s)},
                      {"metric", std::string(to_string(s.metric))},
                      {"algebra", std::string(to_string(s.algebra))},
                      {"beta", s.beta()},
                      {"offdiag_dim", s.offdiag_dimension()},
                      {"dimension", s.dimension()},
                      {"closed_form_element", has_closed_form(s)},
                      {"sep_function", e.has_separability_function},
                      {"convention_factor", e.convention_factor}});
  }
  r.summary["rows"] = r.rows.size();
  return r;
}

Report cmd_sepfun(const RunConfig& c) {
  Report r;
  r.command = "sepfun";
  const SepNumericOptions opt = sepfun_options(c);
  r.config = base_config(c);
  r.config["engine_config"] = to_json(opt);
  r.columns = {"scenario", "mu", "s_closed", "s_numeric", "error", "deviation", "converged"};
  const auto grid = mu_grid(c.grid ? c.grid : 25, c.mu_max);
  double worst = 0.0;
  bool converged = true;
  for (const auto& s : select(c, [](const CatalogEntry& e) { return e.has_separability_function; })) {
    if (!catalog_entry(s).has_separability_function) {
      fail(ErrorKind::unsupported, "no separability function for " + to_string(s));
    }
    for (double mu : grid) {
      const double closed = sep_function_closed(s, mu);
      const IntegrationResult n = sep_function_numeric(s, mu, opt);
      const double dev = std::abs(n.estimate - closed) / std::abs(closed);
      worst = std::max(worst, dev);
      converged = converged && n.converged;
      r.rows.push_back({{"scenario", to_string(s)},
                        {"mu", mu},
                        {"s_closed", closed},
                        {"s_numeric", n.estimate},
                        {"error", n.error_estimate},
                        {"deviation", dev},
                        {"converged", n.converged},
                        {"evaluations", n.evaluations}});
    }
  }
  r.summary["max_deviation"] = worst;
  if (!converged) r.status = kExitNotConverged;
  return r;
}

Report cmd_volumes(const RunConfig& c) {
  Report r;
  r.command = "volumes";
  const VolumeOptions opt = volume_options(c);
  r.config = base_config(c);
  r.config["engine_config"] = to_json(opt);
  r.columns = {"scenario",    "route",       "total",     "total_err",
               "separable",   "separable_err", "probability", "probability_err",
               "reference",   "rel_dev_from_reference"};
  // --all covers the scenarios with published values.
  auto published = [](const CatalogEntry& e) {
    return find_reference(e.scenario, Quantity::probability).has_value() ||
           find_reference(e.scenario, Quantity::total).has_value();
  };
  double max_dev = 0.0;
  bool any_reference = false;
  bool converged = true;
  for (const auto& s : select(c, published)) {
    if (!volumes_supported(s)) fail(ErrorKind::unsupported, "volumes are not available for " + to_string(s));
    const VolumeReport v = volume_report(s, opt, c.route);
    converged = converged && v.total.converged && v.separable.converged;
    json row{{"scenario", to_string(s)},
             {"metric", std::string(to_string(s.metric))},
             {"route", std::string(to_string(c.route))},
             {"total", v.total.estimate},
             {"total_err", v.total.error_estimate},
             {"separable", v.separable.estimate},
             {"separable_err", v.separable.error_estimate},
             {"probability", v.probability.value},
             {"probability_err", v.probability.error},
             {"reference", v.reference ? json(v.reference->value) : json(nullptr)},
             {"rel_dev_from_reference", v.reference ? json(v.rel_dev_from_reference) : json(nullptr)},
             {"engine_config", r.config["engine_config"]},
             {"seed", c.seed}};
    const std::pair<Quantity, double> measured[] = {{Quantity::total, v.total.estimate},
                                                    {Quantity::separable, v.separable.estimate},
                                                    {Quantity::probability, v.probability.value}};
    for (const auto& [q, value] : measured) {
      if (const auto ref = find_reference(s, q)) {
        const double dev = std::abs(value - ref->value) / std::abs(ref->value);
        row["rel_dev_" + std::string(to_string(q))] = dev;
        max_dev = std::max(max_dev, dev);
        any_reference = true;
      }
    }
    r.rows.push_back(std::move(row));
  }
  if (any_reference) r.summary["max_rel_dev_from_reference"] = max_dev;
  if (!converged) r.status = kExitNotConverged;
  return r;
}

Report cmd_figures(const RunConfig& c) {
  Report r;
  r.command = "figures";
  r.config = base_config(c);
  const Metric metric = c.metric.value_or(Metric::bures);
  const DysonReport d = dyson_report(metric, c.family, mu_grid(c.grid ? c.grid : 201, c.mu_max));
  r.columns = {"mu", "s_real_norm_pow4", "s_complex_norm_pow2", "s_quat_norm", "dev_rc", "dev_rq", "dev_cq"};
  for (std::size_t i = 0; i < d.mu.size(); ++i) {
    r.rows.push_back({{"mu", d.mu[i]},
                      {"s_real_norm_pow4", d.real_pow4[i]},
                      {"s_complex_norm_pow2", d.complex_pow2[i]},
                      {"s_quat_norm", finite_or_null(d.quat[i])},
                      {"dev_rc", d.dev_rc[i]},
                      {"dev_rq", finite_or_null(d.dev_rq[i])},
                      {"dev_cq", finite_or_null(d.dev_cq[i])}});
  }
  r.summary["max_dev_rc"] = d.max_dev_rc;
  r.summary["max_dev_rq"] = finite_or_null(d.max_dev_rq);
  r.summary["max_dev_cq"] = finite_or_null(d.max_dev_cq);
  return r;
}

Report cmd_verify(const RunConfig& c) {
  Report r;
  r.command = "verify";
  r.config = base_config(c);
  r.columns = {"criterion", "title", "status", "checks", "worst_ratio"};
  Verifier v({c.level, c.seed});
  int failed = 0;
  for (const auto& res : v.run_all()) {
    const std::string status = res.skipped ? "SKIP" : res.pass() ? "PASS" : "FAIL";
    if (status == "FAIL") ++failed;
    json checks = json::array();
    for (const auto& k : res.checks) {
      checks.push_back({{"name", k.name},
                        {"value", finite_or_null(k.value)},
                        {"expected", finite_or_null(k.expected)},
                        {"deviation", finite_or_null(k.deviation)},
                        {"tolerance", k.tolerance},
                        {"pass", k.pass}});
      if (!k.pass) r.summary["failed: " + k.name] = finite_or_null(k.deviation);
    }
    r.rows.push_back({{"criterion", res.id},
                      {"title", res.title},
                      {"status", status},
                      {"checks", res.checks.size()},
                      {"worst_ratio", finite_or_null(res.worst_ratio())},
                      {"details", checks}});
  }
  r.summary["failed_criteria"] = failed;
  if (failed > 0) r.status = kExitVerifyFailed;
  return r;
}

Report run_command(const RunConfig& c) {
  if (c.command == "list") return cmd_list(c);
  if (c.command == "sepfun") return cmd_sepfun(c);
  if (c.command == "volumes") return cmd_volumes(c);
  if (c.command == "figures") return cmd_figures(c);
  if (c.command == "verify") return cmd_verify(c);
  fail(ErrorKind::invalid_argument, "unknown command '" + c.command + "'");
}

}  // namespace bsep::cli
