#pragma once

// Batch experiments behind the command-line front end: JSON configuration,
// dispatch, and CSV / manifest output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dkg {

struct DataSpec {
  enum class Kind { gaussian, rough };
  Kind kind = Kind::gaussian;
  double amplitude = 1.0;
  // rough only
  double s = -0.1;
  double r = 0.28;
  std::uint64_t seed = 0;

  bool operator==(const DataSpec&) const = default;
};

struct SimulateConfig {
  std::size_t n = 256;
  double L = 100.0;
  double M = 1.0;
  double m = 1.0;
  double h = 1e-3;
  double T = 1.0;
  DataSpec data;
  std::size_t stride = 10;
  // Norm exponents and cutoff reported in the output columns.
  double s = -0.1;
  double r = 0.28;
  double N = 16.0;

  bool operator==(const SimulateConfig&) const = default;
};

struct LedgerConfig {
  SimulateConfig run;
  std::vector<double> cutoffs{4, 8, 16, 32};
  double s = -0.1;
  double r = 0.28;
  double eps = 0.005;

  bool operator==(const LedgerConfig&) const = default;
};

struct ProbeConfig {
  enum class Kind { null_form, comparison };
  Kind kind = Kind::null_form;
  std::vector<std::size_t> scales{8, 16, 32, 64};
  std::vector<double> exponents{0.25, -0.25, -0.25};
  double b = 0.51;
  std::uint64_t seed = 0;
  std::size_t samples = 1000000;

  bool operator==(const ProbeConfig&) const = default;
};

struct RegionConfig {
  double s_lo = -0.25;
  double s_hi = 0.0;
  std::size_t resolution = 100;

  bool operator==(const RegionConfig&) const = default;
};

struct ScheduleConfig {
  double s = -0.1;
  double r = 0.28;
  double eps = 0.005;
  double C = 1.0;
  double A = 1.0;
  double B = 1.0;
  double T = 10.0;
  std::optional<double> N;  // fixed cutoff; absent means search
  double search_start = 2.0;
  int search_max_log2 = 60;

  bool operator==(const ScheduleConfig&) const = default;
};

using ExperimentConfig = std::variant<SimulateConfig, LedgerConfig, ProbeConfig, RegionConfig, ScheduleConfig>;

/// Every problem found in a configuration, each prefixed with the
/// dotted path of the offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Throws ConfigError (malformed JSON included) listing all violations.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Full echo with every field explicit; config_from_json(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& config);

/// "simulate", "ledger", "probe", "region" or "schedule".
std::string subcommand_of(const ExperimentConfig& config);

/// Replaces every seed in the configuration.
void override_seed(ExperimentConfig& config, std::uint64_t seed);
std::uint64_t seed_of(const ExperimentConfig& config);

struct RunResult {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  nlohmann::json summary;
};

/// Runs the experiment, writing `<subcommand>.csv` and `manifest.json`
/// into out_dir (created if missing).
RunResult run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// The CSV body the run would write, without touching the filesystem.
std::string run_to_csv(const ExperimentConfig& config, nlohmann::json* summary = nullptr);

/// Library version string recorded in manifests.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace dkg
