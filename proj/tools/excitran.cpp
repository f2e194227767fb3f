// excitran command-line driver. Each subcommand reads one JSON config and
// writes CSV output plus the resolved config; failures go to stderr as JSON.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "excitran/commands.hpp"
#include "excitran/error.hpp"

namespace {

int report(const std::string& kind, const std::string& message, const std::string& field = {}) {
  nlohmann::json err = {{"kind", kind}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  std::cerr << nlohmann::json{{"error", err}}.dump() << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excitonic transport under Haken-Strobl dephasing"};
  app.set_version_flag("--version", std::string(EXCITRAN_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::uint64_t seed = 0;

  const std::vector<std::pair<std::string, std::string>> help = {
      {"spectrum", "Eigenvalues of the assembled Hamiltonian"},
      {"propagate", "Trajectory observables at the configured sample times"},
      {"efficiency", "Efficiency and transfer time at the configured dephasing rate"},
      {"sweep", "Efficiency and transfer time over the dephasing grid"},
      {"disorder", "Static-disorder mean and spread over the dephasing grid"},
      {"fit", "Double-exponential fit of a trajectory column"},
  };
  for (const auto& [name, description] : help) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "Worker threads (default: EXCITRAN_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "RNG seed (overrides the config seed)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage_error", e.what());
  }

  const auto* sub = app.get_subcommands().front();
  excitran::CommandOptions opts;
  opts.threads = threads;
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--out")) opts.out = out_dir;

  try {
    const auto config = excitran::load_config(config_path);
    const auto result = excitran::run_command(sub->get_name(), config, opts);
    std::cout << result.summary << std::endl;
    return 0;
  } catch (const excitran::ParseError& e) {
    return report(e.kind(), e.what(), e.field());
  } catch (const excitran::ValidationError& e) {
    return report(e.kind(), e.what(), e.field());
  } catch (const excitran::Error& e) {
    return report(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report("internal_error", e.what());
  }
}
