#pragma once

// Experiment sweeps: vary one generator parameter, generate `replications`
// scenarios per value, run every requested deployer on each, and tabulate.
//
// Replication r uses seed base_seed + r for both the scenario and the
// deployers, so every sweep value sees paired scenarios that differ only in
// the swept parameter.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgeplace/annealing.hpp"
#include "edgeplace/generator.hpp"
#include "edgeplace/latency.hpp"

namespace edgeplace {

enum class Algorithm { camd, greedy_spread, ceil_sized, random };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);
const std::vector<Algorithm>& all_algorithms();

enum class SweepVariable { requests, servers, chain_length };

const char* to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(const std::string& name);

/// Runs one deployer. Deterministic given (scenario, params).
DeploymentScheme run_algorithm(Algorithm a, const Scenario& s, const SaParams& params);

struct ExperimentConfig {
  std::string name = "sweep";
  SweepVariable variable = SweepVariable::requests;
  std::vector<double> values;
  int replications = 10;
  std::uint64_t base_seed = 1;
  GeneratorConfig generator;
  SaParams sa;
  std::vector<Algorithm> algorithms = all_algorithms();
  std::filesystem::path output_dir = "results";
  int threads = 0;  // 0 picks the hardware concurrency

  std::vector<std::string> problems() const;
};

/// Evaluation setups: "fig2" (requests 2000..3000), "fig3" (3/5/7 servers),
/// "fig4" (chain length 3/5/7).
ExperimentConfig experiment_preset(const std::string& name);
std::vector<std::string> preset_names();

/// Reads a config file: optional "preset" to start from, then overrides.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& e);

/// Generator config for one (sweep value, replication) cell.
GeneratorConfig cell_generator(const ExperimentConfig& e, double value, int replication);

struct ResultRow {
  double sweep_value = 0.0;
  int replication = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::camd;
  LatencyReport report;
  int total_instances = 0;
  double runtime_s = 0.0;
};

struct SummaryRow {
  double sweep_value = 0.0;
  Algorithm algorithm = Algorithm::camd;
  int runs = 0;
  double mean_objective = 0.0;
  double mean_runtime_s = 0.0;
  int feasible_runs = 0;
  // Relative reduction (baseline - this) / baseline of mean objective, per
  // algorithm in all_algorithms() order; empty when that algorithm did not run.
  std::vector<std::optional<double>> reduction_vs;
};

struct ExperimentResults {
  std::vector<ResultRow> rows;  // sorted by (sweep value, replication, algorithm)
  std::vector<SummaryRow> summary;
};

ExperimentResults run_experiment(const ExperimentConfig& e);

std::string results_csv(const ExperimentConfig& e, const ExperimentResults& r);
std::string summary_csv(const ExperimentConfig& e, const ExperimentResults& r);
/// One row per sweep value, one mean-objective column per algorithm.
std::string plot_csv(const ExperimentConfig& e, const ExperimentResults& r);

/// Writes results.csv, summary.csv and plot_<name>.csv under e.output_dir and
/// returns the paths written.
std::vector<std::filesystem::path> write_experiment(const ExperimentConfig& e,
                                                    const ExperimentResults& r);

}  // namespace edgeplace
