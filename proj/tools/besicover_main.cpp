#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

#include "besicover/cli.hpp"
#include "besicover/geometry.hpp"

int main(int argc, char** argv) {
  CLI::App app{"besicover: covering, concentration, and ratio-average experiments on Z^d"};
  app.require_subcommand(1);

  if (const char* cap = std::getenv("BESICOVER_CAP")) {
    try {
      besicover::set_point_cap(std::stoll(cap));
    } catch (const std::exception&) {
      std::cerr << "invalid BESICOVER_CAP value '" << cap << "'\n";
      return besicover::kExitUsage;
    }
  }

  std::string config_path, out_path;
  std::optional<uint64_t> seed;
  int threads = 1;
  std::string chosen;
  for (const char* name : {"cover", "concentration", "ratio", "maximal"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_path, "output path (CSV or JSON)")->required();
    sub->add_option("--seed", seed, "master seed (overrides config)");
    sub->add_option("--threads", threads, "worker threads for independent trials");
    sub->callback([&chosen, name]() { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : besicover::kExitUsage;
  }

  return besicover::run_subcommand(chosen, config_path, out_path, seed, threads);
}
