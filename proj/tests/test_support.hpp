#pragma once

// Builders for small hand-made scenarios used across the unit tests.

#include <cstdint>
#include <random>
#include <vector>

#include "edgeplace/generator.hpp"
#include "edgeplace/model.hpp"

namespace edgeplace::testing {

inline constexpr double GHz = 1e9;
inline constexpr double GB = 1e9;
inline constexpr double KB = 1e3;
inline constexpr double Gbps = 1e9;

inline MicroserviceSpec ms(double cpu_hz, double cycles, double mem_bytes = 1 * GB,
                           std::optional<double> out = std::nullopt) {
  MicroserviceSpec m;
  m.cpu_demand = cpu_hz;
  m.cycles_per_request = cycles;
  m.mem_demand = mem_bytes;
  m.out_edge_data = out;
  return m;
}

/// `servers` identical servers fully meshed at `bw` bits/s.
inline Scenario cluster(std::size_t servers, double cpu = 10 * GHz, double mem = 100 * GB,
                        double bw = 1 * Gbps) {
  Scenario s;
  for (std::size_t i = 0; i < servers; ++i) s.servers.push_back({i, cpu, mem});
  s.bandwidth = BandwidthMatrix(servers);
  for (std::size_t i = 0; i < servers; ++i) {
    for (std::size_t j = i + 1; j < servers; ++j) s.bandwidth.set_symmetric(i, j, bw);
  }
  return s;
}

/// Appends an application; arrivals are given per server.
inline void add_app(Scenario& s, double priority, double request_bytes,
                    std::vector<MicroserviceSpec> chain, const std::vector<double>& arrivals) {
  ApplicationSpec a;
  a.id = s.applications.size();
  a.priority = priority;
  a.request_data_size = request_bytes;
  a.chain = std::move(chain);
  // Fill in missing edge sizes so hand-written chains validate.
  for (std::size_t v = 0; v + 1 < a.chain.size(); ++v) {
    if (!a.chain[v].out_edge_data) a.chain[v].out_edge_data = 10 * KB;
  }
  if (!a.chain.empty()) a.chain.back().out_edge_data.reset();
  s.applications.push_back(std::move(a));

  RequestDistribution r(s.applications.size(), s.servers.size());
  for (std::size_t k = 0; k + 1 < s.applications.size(); ++k) {
    for (std::size_t i = 0; i < s.servers.size(); ++i) r.set(k, i, s.requests.at(k, i));
  }
  for (std::size_t i = 0; i < s.servers.size(); ++i) r.set(s.applications.size() - 1, i, arrivals.at(i));
  s.requests = r;
}

/// Small random scenario: 1..3 servers, 1..2 apps, chains of 1..3.
inline Scenario small_random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GeneratorConfig g;
  g.server_count = std::uniform_int_distribution<int>(1, 3)(rng);
  g.app_count = std::uniform_int_distribution<int>(1, 2)(rng);
  g.chain_length_range = {1, 3};
  g.request_total_range = {50, 500};
  g.seed = seed;
  return generate_scenario(g);
}

/// Random counts in [0, max_per_server] per server, with every microservice
/// keeping at least one instance.
inline DeploymentScheme random_servable_scheme(const Scenario& s, std::mt19937_64& rng,
                                               int max_per_server = 3) {
  DeploymentScheme d(s);
  std::uniform_int_distribution<int> count(0, max_per_server);
  std::uniform_int_distribution<std::size_t> server(0, s.server_count() - 1);
  for (const BlockId b : d.blocks()) {
    auto& c = d.counts(b);
    for (auto& n : c) n = count(rng);
    if (total_instances(d, b) == 0) c[server(rng)] = 1;
  }
  return d;
}

}  // namespace edgeplace::testing
