#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "dkg/experiment.hpp"
#include "dkg/kernels.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

// Machine-readable failure record, on stderr and next to the results.
int fail(const Options& opt, const std::string& kind, const std::vector<std::string>& messages, int code) {
  const nlohmann::json record{{"error", kind}, {"messages", messages}};
  std::cerr << record.dump() << '\n';
  std::error_code ec;
  std::filesystem::create_directories(opt.out, ec);
  if (!ec) std::ofstream(std::filesystem::path(opt.out) / "error.json") << record.dump(2) << '\n';
  return code;
}

int execute(const std::string& subcommand, const Options& opt) {
  std::ifstream in(opt.config);
  if (!in) return fail(opt, "io", {"cannot read config " + opt.config}, 3);
  std::stringstream text;
  text << in.rdbuf();

  try {
    auto config = dkg::parse_config(text.str());
    if (dkg::subcommand_of(config) != subcommand)
      return fail(opt, "config", {"config describes '" + dkg::subcommand_of(config) + "', not '" + subcommand + "'"}, 2);
    if (opt.seed) dkg::override_seed(config, *opt.seed);
    if (opt.threads > 0) dkg::kernels::set_threads(opt.threads);
    const auto result = dkg::run(config, opt.out);
    std::cout << result.csv.string() << '\n' << result.manifest.string() << '\n';
    return 0;
  } catch (const dkg::ConfigError& e) {
    return fail(opt, "config", e.problems(), 2);
  } catch (const std::exception& e) {
    return fail(opt, "runtime", {e.what()}, 3);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac-Klein-Gordon experiments"};
  app.require_subcommand(1);
  Options opt;
  std::string chosen;

  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "evolve the system and record charges and norms"},
      {"ledger", "modified-charge ledger over a sweep of cutoffs"},
      {"probe", "wave-packet null-form probe or comparison-bound sampling"},
      {"region", "tabulate the admissible (s, r) region boundaries"},
      {"schedule", "slab induction and cutoff search"}};
  for (const auto& [name, about] : commands) {
    auto* sub = app.add_subcommand(name, about);
    sub->add_option("--config", opt.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", opt.seed, "override every seed in the config");
    sub->add_option("--threads", opt.threads, "OpenMP threads")->check(CLI::NonNegativeNumber);
    sub->callback([&chosen, name] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return execute(chosen, opt);
}
