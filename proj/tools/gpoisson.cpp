// gpoisson: command-line front end over the C API.

#include <cstdio>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gp/gp.h"

namespace {

struct ConfigDeleter {
  void operator()(gp_config* c) const { gp_config_free(c); }
};
using ConfigHandle = std::unique_ptr<gp_config, ConfigDeleter>;

int report_failure(gp_status s) {
  std::fprintf(stderr, "gpoisson: %s\n", gp_last_error());
  return gp_exit_code(s);
}

int print_command(gp_status (*cmd)(const gp_config*, int*, char**, char**), const gp_config* c) {
  int code = GP_EXIT_OK;
  char* summary = nullptr;
  const gp_status s = cmd(c, &code, nullptr, &summary);
  if (s != GP_OK) return report_failure(s);
  std::fputs(summary, stdout);
  gp_string_free(summary);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson structures on cotangent bundles of Lie groups: brackets, reductions, Wong dynamics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string algebra;
  app.add_option("--config", config_path, "run configuration (JSON)");
  app.add_option("--seed", seed, "RNG seed for property checks");
  app.add_option("--out", out_dir, "directory for reports and trajectories");
  app.add_option("--algebra", algebra, "override the configured algebra (u1, so3, su2, su3 or JSON)");

  auto* verify = app.add_subcommand("verify", "run the invariant and property suites");
  auto* bracket = app.add_subcommand("bracket", "evaluate a Poisson bracket {f, g} at a point");
  std::string engine = "lie_poisson", f_expr, g_expr, point = "{}";
  bracket->add_option("--engine", engine, "lie_poisson | orbit | tstar | gauged | cartan | cartan_gauged");
  bracket->add_option("-f,--f", f_expr, "first function")->required();
  bracket->add_option("-g,--g", g_expr, "second function")->required();
  bracket->add_option("--point", point, "point as JSON, e.g. {\"x\": [0, 0, 1]}");
  auto* reduce = app.add_subcommand("reduce", "rank and kernel of omega_f for the configured momentum map");
  auto* simulate = app.add_subcommand("simulate", "integrate Wong's equations and monitor invariants");
  auto* rootsys = app.add_subcommand("rootsys", "Cartan subalgebra and positive roots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return GP_EXIT_CONFIG;
  }

  gp_config* raw = nullptr;
  gp_status s = config_path.empty() ? gp_config_default(&raw) : gp_config_load(config_path.c_str(), &raw);
  if (s != GP_OK) return report_failure(s);
  ConfigHandle config(raw);
  if (seed && (s = gp_config_set_seed(config.get(), *seed)) != GP_OK) return report_failure(s);
  if (!out_dir.empty() && (s = gp_config_set_output_dir(config.get(), out_dir.c_str())) != GP_OK)
    return report_failure(s);
  if (!algebra.empty() && (s = gp_config_set_algebra(config.get(), algebra.c_str())) != GP_OK)
    return report_failure(s);

  if (*verify) return print_command(&gp_verify, config.get());
  if (*reduce) return print_command(&gp_reduce, config.get());
  if (*simulate) return print_command(&gp_simulate, config.get());
  if (*rootsys) return print_command(&gp_root_system, config.get());
  if (*bracket) {
    double value = 0.0;
    s = gp_bracket(config.get(), engine.c_str(), f_expr.c_str(), g_expr.c_str(), point.c_str(), &value);
    if (s != GP_OK) return report_failure(s);
    std::printf("%.17g\n", value);
    return GP_EXIT_OK;
  }
  return GP_EXIT_CONFIG;
}
