#pragma once

// Scenario runner behind the `ergolab` command: resolves operators and
// schemes, runs one experiment, and packages values plus pass/fail checks
// into a deterministic report.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergolab/ergodic.hpp"
#include "ergolab/linop.hpp"
#include "ergolab/means.hpp"
#include "ergolab/rng.hpp"

namespace ergolab::cli {

struct ScenarioConfig {
  std::string scenario;
  std::optional<std::string> op;      // "builtin:..." or a JSON file path
  std::optional<std::string> scheme;  // see parse_scheme
  std::optional<long long> nmax;
  std::optional<int> r;
  std::optional<int> p;
  std::optional<int> kmax;
  std::optional<int> angles;
  std::optional<long long> m;
  std::optional<long long> window_lo;
  std::optional<long long> window_hi;
  std::optional<long long> degree;
  std::optional<long long> quad_nodes;
  std::optional<std::string> norm;   // spectral | colsum | rowsum
  std::optional<std::string> check;  // h1: all | 3iso | gap | pairing | meannorm
  double tail_eps = kDefaultTailEps;
  double window_fraction = 0.5;
  std::uint64_t seed = kDefaultSeed;
  std::map<std::string, double> thresholds;
};

struct Check {
  std::string name;
  double value;
  std::string comparison;  // "<=", ">=", "<", ">"
  double threshold;
  bool pass;
};

struct Sequence {
  std::string name;
  GrowthReport data;
};

struct Report {
  std::string scenario;
  nlohmann::json config;   // resolved configuration echo
  nlohmann::json results;  // scenario-specific values
  std::vector<Check> checks;
  std::vector<Sequence> sequences;  // the first one is the CSV payload

  bool pass() const;
  nlohmann::json to_json() const;
};

struct BuiltinInfo {
  std::string pattern;
  std::string description;
};

const std::vector<std::string>& scenario_names();
std::vector<BuiltinInfo> list_builtins();

// "builtin:<spec>" or a path to an operator JSON file.
OperatorModel resolve_operator(const std::string& spec, std::uint64_t seed = kDefaultSeed);
NormKind parse_norm(const std::string& name);

// Overlays keys of a JSON object onto the config. Unknown keys are rejected.
ScenarioConfig apply_json_config(ScenarioConfig config, const nlohmann::json& j);
ScenarioConfig load_json_config(ScenarioConfig config, const std::filesystem::path& path);

Report run(const ScenarioConfig& config);

// JSON unless the path ends in ".csv", in which case the first sequence is
// written as "n,value" rows followed by fit footer rows.
void write_report(const Report& report, const std::filesystem::path& path);
std::string sequence_csv(const GrowthReport& seq);

// "n,j,t" rows for n in [n_lo, n_hi].
std::string rows_csv(const MeanScheme& s, long long n_lo, long long n_hi, double tail_eps);

std::string format_double(double v);

}  // namespace ergolab::cli
