#pragma once

// Random scenario generation. Defaults reproduce the evaluation setup: server
// CPU 5-20 GHz and memory 80-640 GB, links 1 +/- 0.2 Gbps, per-instance CPU
// 0.1-0.5 GHz, 2.4-12 M cycles per request, 0.5-4 GB memory, 1-100 KB between
// stages.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgeplace/model.hpp"

namespace edgeplace {

struct Range {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const Range&) const = default;
};

struct IntRange {
  int min = 0;
  int max = 0;

  bool operator==(const IntRange&) const = default;
};

enum class PriorityMode { uniform_normalized, explicit_list };

struct GeneratorConfig {
  int server_count = 3;
  int app_count = 3;
  IntRange chain_length_range{2, 4};
  Range request_total_range{2000, 3000};    // requests per slot, per application
  Range cpu_capacity_range{5e9, 20e9};      // Hz
  Range mem_capacity_range{80e9, 640e9};    // bytes
  double bandwidth_mean = 1e9;              // bits/s
  double bandwidth_jitter = 0.2e9;          // bits/s, uniform +/- around the mean
  Range ms_cpu_range{0.1e9, 0.5e9};         // Hz
  Range ms_cycles_range{2.4e6, 12e6};       // cycles
  Range ms_mem_range{0.5e9, 4e9};           // bytes
  Range edge_data_range{1e3, 100e3};        // bytes, also used for request data
  PriorityMode priority_mode = PriorityMode::uniform_normalized;
  std::vector<double> priorities;           // explicit_list only; normalized on use
  std::uint64_t seed = 1;

  /// Empty when the configuration is usable.
  std::vector<std::string> problems() const;

  bool operator==(const GeneratorConfig&) const = default;
};

/// CPU and memory are drawn as whole Hz and bytes so capacity arithmetic is
/// exact. Arrivals are split over servers by assigning each request to a
/// uniformly chosen ingress server. Throws std::invalid_argument on a bad
/// config.
Scenario generate_scenario(const GeneratorConfig& cfg);

nlohmann::json generator_config_to_json(const GeneratorConfig& cfg);
/// Fields absent from `j` keep the values already in `base`.
GeneratorConfig generator_config_from_json(const nlohmann::json& j, GeneratorConfig base = {});

}  // namespace edgeplace
