#include "edgeplace/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "edgeplace/scenario_io.hpp"

namespace edgeplace {

using nlohmann::json;

std::vector<std::string> GeneratorConfig::problems() const {
  std::vector<std::string> out;
  auto range = [&out](const Range& r, const char* name, bool positive) {
    if (!(r.min <= r.max)) out.push_back(std::string(name) + ": min > max");
    if (positive && !(r.min > 0.0)) out.push_back(std::string(name) + ": must be positive");
  };
  if (server_count < 1) out.emplace_back("server_count must be >= 1");
  if (app_count < 1) out.emplace_back("app_count must be >= 1");
  if (chain_length_range.min < 1 || chain_length_range.min > chain_length_range.max) {
    out.emplace_back("chain_length_range must satisfy 1 <= min <= max");
  }
  range(request_total_range, "request_total_range", true);
  if (std::floor(request_total_range.max) < std::ceil(request_total_range.min)) {
    out.emplace_back("request_total_range contains no integer");
  }
  range(cpu_capacity_range, "cpu_capacity_range", true);
  range(mem_capacity_range, "mem_capacity_range", true);
  if (!(bandwidth_jitter >= 0.0 && bandwidth_mean - bandwidth_jitter > 0.0)) {
    out.emplace_back("bandwidth_mean - bandwidth_jitter must be positive");
  }
  range(ms_cpu_range, "ms_cpu_range", true);
  range(ms_cycles_range, "ms_cycles_range", true);
  range(ms_mem_range, "ms_mem_range", true);
  range(edge_data_range, "edge_data_range", true);
  if (priority_mode == PriorityMode::explicit_list) {
    if (priorities.size() != static_cast<std::size_t>(app_count)) {
      out.emplace_back("priorities must list one value per application");
    }
    for (double p : priorities) {
      if (!(p > 0.0)) out.emplace_back("priorities must be positive");
    }
  }
  return out;
}

namespace {

double draw(std::mt19937_64& rng, const Range& r) {
  if (r.min == r.max) return r.min;
  return std::uniform_real_distribution<double>(r.min, r.max)(rng);
}

// Whole units (Hz, bytes) inside the range.
double draw_whole(std::mt19937_64& rng, const Range& r) {
  const double x = std::round(draw(rng, r));
  return std::clamp(x, std::ceil(r.min), std::floor(r.max));
}

}  // namespace

Scenario generate_scenario(const GeneratorConfig& cfg) {
  if (auto bad = cfg.problems(); !bad.empty()) {
    std::string msg = "invalid generator config:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw std::invalid_argument(msg);
  }
  std::mt19937_64 rng(cfg.seed);
  const auto n_servers = static_cast<std::size_t>(cfg.server_count);
  const auto n_apps = static_cast<std::size_t>(cfg.app_count);

  Scenario s;
  for (std::size_t i = 0; i < n_servers; ++i) {
    ServerSpec srv;
    srv.id = i;
    srv.cpu_capacity = draw_whole(rng, cfg.cpu_capacity_range);
    srv.mem_capacity = draw_whole(rng, cfg.mem_capacity_range);
    s.servers.push_back(srv);
  }

  s.bandwidth = BandwidthMatrix(n_servers);
  const Range bw{cfg.bandwidth_mean - cfg.bandwidth_jitter, cfg.bandwidth_mean + cfg.bandwidth_jitter};
  for (std::size_t i = 0; i < n_servers; ++i) {
    for (std::size_t j = i + 1; j < n_servers; ++j) s.bandwidth.set_symmetric(i, j, draw(rng, bw));
  }

  std::vector<double> weights(n_apps, 1.0);
  if (cfg.priority_mode == PriorityMode::explicit_list) {
    weights = cfg.priorities;
  } else {
    // (0, 1]: a zero weight would make an application's priority invalid.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& w : weights) w = 1.0 - unit(rng);
  }
  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);

  std::uniform_int_distribution<int> chain_len(cfg.chain_length_range.min, cfg.chain_length_range.max);
  for (std::size_t k = 0; k < n_apps; ++k) {
    ApplicationSpec app;
    app.id = k;
    app.priority = weights[k] / weight_sum;
    app.request_data_size = draw_whole(rng, cfg.edge_data_range);
    const int len = chain_len(rng);
    for (int v = 0; v < len; ++v) {
      MicroserviceSpec ms;
      ms.cpu_demand = draw_whole(rng, cfg.ms_cpu_range);
      ms.mem_demand = draw_whole(rng, cfg.ms_mem_range);
      ms.cycles_per_request = draw_whole(rng, cfg.ms_cycles_range);
      if (v + 1 < len) ms.out_edge_data = draw_whole(rng, cfg.edge_data_range);
      app.chain.push_back(ms);
    }
    s.applications.push_back(std::move(app));
  }

  s.requests = RequestDistribution(n_apps, n_servers);
  std::uniform_int_distribution<long long> total(
      static_cast<long long>(std::ceil(cfg.request_total_range.min)),
      static_cast<long long>(std::floor(cfg.request_total_range.max)));
  std::uniform_int_distribution<std::size_t> ingress(0, n_servers - 1);
  for (std::size_t k = 0; k < n_apps; ++k) {
    const long long r = total(rng);
    std::vector<long long> split(n_servers, 0);
    for (long long q = 0; q < r; ++q) ++split[ingress(rng)];
    for (std::size_t i = 0; i < n_servers; ++i) s.requests.set(k, i, static_cast<double>(split[i]));
  }
  return s;
}

namespace {

json range_json(const Range& r, std::optional<Dimension> dim) {
  if (!dim) return json::array({r.min, r.max});
  return json::array({quantity_to_json(r.min, *dim), quantity_to_json(r.max, *dim)});
}

Range range_from(const json& j, std::optional<Dimension> dim, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ParseError(field + ": expected [min, max]");
  auto one = [&](const json& x, const char* which) {
    const std::string f = field + "." + which;
    if (dim) return quantity_from_json(x, *dim, f);
    if (!x.is_number()) throw ParseError(f + ": expected a number");
    return x.get<double>();
  };
  return {one(j[0], "min"), one(j[1], "max")};
}

int int_from(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ParseError(field + ": expected an integer");
  return j.get<int>();
}

}  // namespace

json generator_config_to_json(const GeneratorConfig& cfg) {
  json j;
  j["server_count"] = cfg.server_count;
  j["app_count"] = cfg.app_count;
  j["chain_length_range"] = json::array({cfg.chain_length_range.min, cfg.chain_length_range.max});
  j["request_total_range"] = range_json(cfg.request_total_range, std::nullopt);
  j["cpu_capacity_range"] = range_json(cfg.cpu_capacity_range, Dimension::frequency);
  j["mem_capacity_range"] = range_json(cfg.mem_capacity_range, Dimension::bytes);
  j["bandwidth_mean"] = quantity_to_json(cfg.bandwidth_mean, Dimension::bandwidth);
  j["bandwidth_jitter"] = quantity_to_json(cfg.bandwidth_jitter, Dimension::bandwidth);
  j["ms_cpu_range"] = range_json(cfg.ms_cpu_range, Dimension::frequency);
  j["ms_cycles_range"] = range_json(cfg.ms_cycles_range, Dimension::cycles);
  j["ms_mem_range"] = range_json(cfg.ms_mem_range, Dimension::bytes);
  j["edge_data_range"] = range_json(cfg.edge_data_range, Dimension::bytes);
  if (cfg.priority_mode == PriorityMode::explicit_list) {
    j["priority_mode"] = "explicit";
    j["priorities"] = cfg.priorities;
  } else {
    j["priority_mode"] = "uniform";
  }
  j["seed"] = cfg.seed;
  return j;
}

GeneratorConfig generator_config_from_json(const json& j, GeneratorConfig cfg) {
  if (!j.is_object()) throw ParseError("generator: expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string f = "generator." + key;
    if (key == "server_count") {
      cfg.server_count = int_from(value, f);
    } else if (key == "app_count") {
      cfg.app_count = int_from(value, f);
    } else if (key == "chain_length_range") {
      if (!value.is_array() || value.size() != 2) throw ParseError(f + ": expected [min, max]");
      cfg.chain_length_range = {int_from(value[0], f + ".min"), int_from(value[1], f + ".max")};
    } else if (key == "request_total_range") {
      cfg.request_total_range = range_from(value, std::nullopt, f);
    } else if (key == "cpu_capacity_range") {
      cfg.cpu_capacity_range = range_from(value, Dimension::frequency, f);
    } else if (key == "mem_capacity_range") {
      cfg.mem_capacity_range = range_from(value, Dimension::bytes, f);
    } else if (key == "bandwidth_mean") {
      cfg.bandwidth_mean = quantity_from_json(value, Dimension::bandwidth, f);
    } else if (key == "bandwidth_jitter") {
      cfg.bandwidth_jitter = quantity_from_json(value, Dimension::bandwidth, f);
    } else if (key == "ms_cpu_range") {
      cfg.ms_cpu_range = range_from(value, Dimension::frequency, f);
    } else if (key == "ms_cycles_range") {
      cfg.ms_cycles_range = range_from(value, Dimension::cycles, f);
    } else if (key == "ms_mem_range") {
      cfg.ms_mem_range = range_from(value, Dimension::bytes, f);
    } else if (key == "edge_data_range") {
      cfg.edge_data_range = range_from(value, Dimension::bytes, f);
    } else if (key == "priority_mode") {
      if (!value.is_string()) throw ParseError(f + ": expected \"uniform\" or \"explicit\"");
      const auto mode = value.get<std::string>();
      if (mode == "uniform") {
        cfg.priority_mode = PriorityMode::uniform_normalized;
      } else if (mode == "explicit") {
        cfg.priority_mode = PriorityMode::explicit_list;
      } else {
        throw ParseError(f + ": expected \"uniform\" or \"explicit\"");
      }
    } else if (key == "priorities") {
      if (!value.is_array()) throw ParseError(f + ": expected an array");
      cfg.priorities.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number()) throw ParseError(f + "[" + std::to_string(i) + "]: expected a number");
        cfg.priorities.push_back(value[i].get<double>());
      }
      cfg.priority_mode = PriorityMode::explicit_list;
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ParseError(f + ": expected a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else {
      throw ParseError(f + ": unknown field");
    }
  }
  return cfg;
}

}  // namespace edgeplace
