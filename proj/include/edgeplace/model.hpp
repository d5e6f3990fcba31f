#pragma once

// Problem model: edge servers joined by a bandwidth matrix, applications made
// of linear microservice chains, per-server request arrivals, and the
// per-server instance counts that form a deployment scheme.
//
// Canonical units everywhere inside the library:
//   CPU           Hz (cycles per second)
//   memory, data  bytes
//   bandwidth     bits per second
//   time          seconds
//   requests      count per time slot

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgeplace {

struct ServerSpec {
  std::size_t id = 0;
  double cpu_capacity = 0.0;  // Hz
  double mem_capacity = 0.0;  // bytes

  bool operator==(const ServerSpec&) const = default;
};

/// Dense symmetric |S|x|S| matrix of link rates in bits/s. The diagonal is
/// never read: co-located hops cost nothing.
class BandwidthMatrix {
 public:
  BandwidthMatrix() = default;
  explicit BandwidthMatrix(std::size_t servers, double fill = 0.0)
      : n_(servers), rates_(servers * servers, fill) {}

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return rates_.at(i * n_ + j); }
  void set(std::size_t i, std::size_t j, double bits_per_second) {
    rates_.at(i * n_ + j) = bits_per_second;
  }
  void set_symmetric(std::size_t i, std::size_t j, double bits_per_second) {
    set(i, j, bits_per_second);
    set(j, i, bits_per_second);
  }

  bool operator==(const BandwidthMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> rates_;
};

struct MicroserviceSpec {
  double cpu_demand = 0.0;          // Hz per instance
  double mem_demand = 0.0;          // bytes per instance
  double cycles_per_request = 0.0;  // cycles
  std::optional<double> out_edge_data;  // bytes sent to the successor; empty for the chain tail

  /// Requests per second a single instance sustains.
  double processing_rate() const { return cpu_demand / cycles_per_request; }

  bool operator==(const MicroserviceSpec&) const = default;
};

struct ApplicationSpec {
  std::size_t id = 0;
  double priority = 0.0;           // gamma, weights sum to 1 across a scenario
  double request_data_size = 0.0;  // bytes shipped from the ingress server to the first stage
  std::vector<MicroserviceSpec> chain;

  bool operator==(const ApplicationSpec&) const = default;
};

/// Requests per slot for each (application, ingress server).
class RequestDistribution {
 public:
  RequestDistribution() = default;
  RequestDistribution(std::size_t apps, std::size_t servers)
      : apps_(apps), servers_(servers), arrivals_(apps * servers, 0.0) {}

  std::size_t apps() const { return apps_; }
  std::size_t servers() const { return servers_; }
  double at(std::size_t app, std::size_t server) const {
    return arrivals_.at(app * servers_ + server);
  }
  void set(std::size_t app, std::size_t server, double requests) {
    arrivals_.at(app * servers_ + server) = requests;
  }
  /// R for one application.
  double total(std::size_t app) const;
  /// Multiplies every arrival by `factor`.
  RequestDistribution scaled(double factor) const;

  bool operator==(const RequestDistribution&) const = default;

 private:
  std::size_t apps_ = 0;
  std::size_t servers_ = 0;
  std::vector<double> arrivals_;
};

struct Scenario {
  std::vector<ServerSpec> servers;
  BandwidthMatrix bandwidth;
  std::vector<ApplicationSpec> applications;
  RequestDistribution requests;

  std::size_t server_count() const { return servers.size(); }
  std::size_t app_count() const { return applications.size(); }
  const MicroserviceSpec& microservice(std::size_t app, std::size_t pos) const {
    return applications.at(app).chain.at(pos);
  }
  /// Total number of microservices over all applications.
  std::size_t microservice_count() const;

  bool operator==(const Scenario&) const = default;
};

/// Identifies one microservice: a position in one application's chain.
struct BlockId {
  std::size_t app = 0;
  std::size_t position = 0;

  auto operator<=>(const BlockId&) const = default;
};

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Instance counts per (microservice, server); the decision variable.
class DeploymentScheme {
 public:
  DeploymentScheme() = default;
  /// All-zero scheme shaped after `scenario`.
  explicit DeploymentScheme(const Scenario& scenario);

  std::size_t server_count() const { return servers_; }
  std::size_t app_count() const { return counts_.size(); }
  std::size_t chain_length(std::size_t app) const { return counts_.at(app).size(); }

  const std::vector<int>& counts(BlockId block) const;
  std::vector<int>& counts(BlockId block);
  int at(BlockId block, std::size_t server) const { return counts(block).at(server); }
  void set(BlockId block, std::size_t server, int n) { counts(block).at(server) = n; }
  void set_counts(BlockId block, std::vector<int> per_server);

  /// Every block in (app, position) order.
  std::vector<BlockId> blocks() const;

  bool operator==(const DeploymentScheme&) const = default;

 private:
  std::size_t servers_ = 0;
  std::vector<std::vector<std::vector<int>>> counts_;
};

/// N for one microservice: its instances summed over servers.
int total_instances(const DeploymentScheme& scheme, std::size_t app, std::size_t pos);
inline int total_instances(const DeploymentScheme& scheme, BlockId block) {
  return total_instances(scheme, block.app, block.position);
}

struct Violation {
  std::string field;    // e.g. "applications[1].chain[0].cpu_demand"
  std::string message;  // e.g. "non-positive CPU demand"

  bool operator==(const Violation&) const = default;
};

/// Empty result means the scenario is valid.
std::vector<Violation> validate_scenario(const Scenario& scenario);

/// Checks that `scheme` has one count vector per microservice of `scenario`
/// and that every count is a non-negative integer.
std::vector<Violation> validate_scheme(const Scenario& scenario, const DeploymentScheme& scheme);

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Throws ValidationError when validate_scenario reports anything.
void require_valid(const Scenario& scenario);

/// CPU and memory in exact integer units (Hz, bytes). Capacity checks are done
/// in these units so that feasibility decisions never depend on rounding.
struct ResourceUnits {
  std::int64_t cpu = 0;
  std::int64_t mem = 0;

  bool operator==(const ResourceUnits&) const = default;
};

std::int64_t to_units(double value);
ResourceUnits capacity_of(const ServerSpec& server);
ResourceUnits demand_of(const MicroserviceSpec& ms);

/// Per-server CPU and memory consumed by `scheme`.
std::vector<ResourceUnits> resource_usage(const Scenario& scenario, const DeploymentScheme& scheme);

}  // namespace edgeplace
