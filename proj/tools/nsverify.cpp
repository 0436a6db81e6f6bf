#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsv/cli/commands.hpp"
#include "nsv/fields/errors.hpp"

namespace {

std::filesystem::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NSVERIFY_OUT"); env && *env) return env;
  return "nsverify_out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification harness for incompressible Navier-Stokes identities", "nsverify"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  int jobs = 1;
  std::string out;
  std::vector<std::string> fields;

  const auto common = [&](CLI::App* sub, bool many_configs) {
    auto* opt = sub->add_option("--config", configs, "configuration file (section.key = value)");
    if (many_configs) {
      opt->expected(1, -1);
    } else {
      opt->expected(1);
    }
    sub->add_option("--jobs", jobs, "scenarios verified in parallel")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory (default $NSVERIFY_OUT, else ./nsverify_out)");
  };
  auto* run = app.add_subcommand("run", "integrate the full equations and export the trajectory");
  common(run, false);
  auto* verify = app.add_subcommand("verify", "evaluate every applicable identity on a run");
  common(verify, true);
  auto* uniq = app.add_subcommand("uniqueness", "compare the reduced and full solvers");
  common(uniq, false);
  auto* ids = app.add_subcommand("identities", "evaluate identities on stored NSF1 snapshots");
  common(ids, false);
  ids->add_option("files", fields, "field, or reduced field and difference")
      ->required()
      ->expected(1, 2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return nsv::kExitConfig;
  }

  try {
    const std::filesystem::path dir = output_dir(out);
    if (ids->parsed()) {
      const std::optional<std::filesystem::path> second =
          fields.size() == 2 ? std::optional<std::filesystem::path>(fields[1]) : std::nullopt;
      return nsv::cmd_identities(fields[0], second, dir);
    }
    if (configs.empty()) {
      std::cerr << "nsverify: --config is required\n";
      return nsv::kExitConfig;
    }
    std::vector<nsv::RunPlan> plans;
    for (const auto& c : configs) plans.push_back(nsv::parse_config(c));
    if (run->parsed()) return nsv::cmd_run(plans[0], dir);
    if (uniq->parsed()) return nsv::cmd_uniqueness(plans[0], dir);
    return nsv::cmd_verify(plans, dir, jobs);
  } catch (const nsv::ConfigError& e) {
    std::cerr << "nsverify: config error: " << e.what() << "\n";
  } catch (const nsv::FormatError& e) {
    std::cerr << "nsverify: format error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "nsverify: error: " << e.what() << "\n";
  }
  return nsv::kExitConfig;
}
