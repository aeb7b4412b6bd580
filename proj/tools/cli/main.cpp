#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bsep/error.hpp"
#include "bsep/version.hpp"
#include "commands.hpp"

using namespace bsep;
using namespace bsep::cli;

namespace {

struct Flags {
  std::vector<std::string> scenarios;
  std::string metric;
  std::string family = "single";
  std::string format;
  std::string engine = "adaptive";
  std::string route = "sj";
  std::string level = "quick";
};

void add_common(CLI::App* sub, RunConfig& c, Flags& f) {
  sub->add_option("--format", f.format, "table | csv | json");
  sub->add_option("--out", c.out, "write to this path instead of stdout");
  sub->add_option("--metric", f.metric, "hs | bures");
}

void add_engine(CLI::App* sub, RunConfig& c) {
  sub->add_option("--rel-tol", c.rel_tol, "relative tolerance override");
  sub->add_option("--max-evals", c.max_evals, "evaluation budget override");
  sub->add_option("--qmc-n", c.qmc_n, "qmc points (all replicates)");
  sub->add_option("--seed", c.seed, "qmc scramble seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separability functions, volumes and probabilities of two-qubit states"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig c;
  Flags f;

  auto* list = app.add_subcommand("list", "scenario catalog");
  add_common(list, c, f);

  auto* sepfun = app.add_subcommand("sepfun", "closed vs numeric separability functions on a mu grid");
  add_common(sepfun, c, f);
  add_engine(sepfun, c);
  sepfun->add_option("--scenario", f.scenarios, "e.g. bures:[(2,3)]:real or bures:[~(2,3)]");
  sepfun->add_option("--grid", c.grid, "number of mu points (default 25)");
  sepfun->add_option("--mu-max", c.mu_max, "grid upper end");
  sepfun->add_option("--engine", f.engine, "adaptive | qmc");
  sepfun->add_flag("--all", c.all, "every cataloged separability function");

  auto* volumes = app.add_subcommand("volumes", "total and separable volumes, probabilities");
  add_common(volumes, c, f);
  add_engine(volumes, c);
  volumes->add_option("--scenario", f.scenarios, "scenario selector (repeatable)");
  volumes->add_option("--route", f.route, "sj | direct");
  volumes->add_flag("--all", c.all, "every scenario with published values");

  auto* figures = app.add_subcommand("figures", "normalised curve data for the Dyson comparison");
  add_common(figures, c, f);
  figures->add_option("--family", f.family, "single | two");
  figures->add_option("--grid", c.grid, "number of mu points (default 201)");
  figures->add_option("--mu-max", c.mu_max, "grid upper end");

  auto* verify = app.add_subcommand("verify", "acceptance checks");
  add_common(verify, c, f);
  verify->add_option("--level", f.level, "quick | full");
  verify->add_option("--seed", c.seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    c.command = app.get_subcommands().front()->get_name();
    nlohmann::json j;
    to_json(j, c);
    j["scenarios"] = f.scenarios;
    j["metric"] = f.metric.empty() ? nlohmann::json(nullptr) : nlohmann::json(f.metric);
    j["family"] = f.family;
    j["engine"] = f.engine;
    j["route"] = f.route;
    j["level"] = f.level;
    // Plot data defaults to CSV.
    j["format"] = !f.format.empty() ? f.format : c.command == "figures" ? "csv" : "table";
    from_json(j, c);

    const Report report = run_command(c);
    const std::string text = render(report, c.format);
    if (c.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream os(c.out);
      if (!(os << text)) {
        std::cerr << "bsep: cannot write " << c.out << '\n';
        return kExitUsage;
      }
    }
    if (report.status == kExitNotConverged) std::cerr << "bsep: some integrals did not converge\n";
    return report.status;
  } catch (const Error& e) {
    std::cerr << "bsep: " << e.what() << '\n';
    return e.kind() == ErrorKind::unsupported ? kExitUnsupported : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "bsep: " << e.what() << '\n';
    return kExitUsage;
  }
}
