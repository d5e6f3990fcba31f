#pragma once

// Expected response latency of a request under round-robin routing.
//
// A request for application k enters at an ingress server drawn from the
// arrival distribution, then visits one server per chain stage, each drawn
// independently in proportion to that stage's per-server instance counts. Its
// latency is the sum of transfer delays across every hop that changes server,
// plus the computing delay of each stage.
//
// Computing delay is the fluid-load expression R / (N * o) per stage: the whole
// slot's requests split evenly over N instances, each serving o requests/s.
// There is no queueing model behind it.

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "edgeplace/model.hpp"

namespace edgeplace {

/// Raised when a microservice has no instances, so no request can reach it.
class UnservableError : public std::runtime_error {
 public:
  explicit UnservableError(BlockId block);
  BlockId block() const { return block_; }

 private:
  BlockId block_;
};

class EnumerationInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objective value given to schemes where some microservice has no instance.
/// Any servable scheme compares strictly lower.
inline constexpr double kUnservableObjective = std::numeric_limits<double>::max();

/// Probability that a request for `block` lands on each server: n_i / N.
std::vector<double> routing_distribution(const Scenario& s, const DeploymentScheme& d,
                                         BlockId block);

/// Probability that a request for `app` enters at each server: r_i / R.
std::vector<double> ingress_distribution(const Scenario& s, std::size_t app);

/// Sum over the chain of R / (N_v * o_v). Independent of which servers host the
/// instances.
double computing_delay(const Scenario& s, const DeploymentScheme& d, std::size_t app);

/// Expected transfer delay summed over every hop (ingress -> stage 1, then
/// stage v -> stage v+1). Hop choices are independent, so the expectation
/// factorizes per hop: sum_{i != j} p_i q_j * bits / bw(i, j).
double expected_transmission_delay(const Scenario& s, const DeploymentScheme& d, std::size_t app);

/// Factorized expected latency of one application (transmission + computing).
double app_latency(const Scenario& s, const DeploymentScheme& d, std::size_t app);

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// Reference evaluation: walks every processing path with non-zero
/// probability and sums probability * path latency. Exponential in chain
/// length, so only usable on small instances.
double enumerate_paths_latency(const Scenario& s, const DeploymentScheme& d, std::size_t app,
                               std::size_t path_cap = kDefaultPathCap);

/// One processing path and its probability, as produced by enumerate_paths.
struct WeightedPath {
  std::vector<std::size_t> servers;  // ingress first, then one per stage
  double probability = 0.0;
  double latency = 0.0;
};

std::vector<WeightedPath> enumerate_paths(const Scenario& s, const DeploymentScheme& d,
                                          std::size_t app,
                                          std::size_t path_cap = kDefaultPathCap);

struct LatencyReport {
  std::vector<std::optional<double>> per_app_latency;  // seconds; empty if the app is unservable
  double objective = kUnservableObjective;             // sum of gamma * latency, seconds
  std::vector<double> cpu_violation;                   // Hz over capacity, per server
  std::vector<double> mem_violation;                   // bytes over capacity, per server
  std::vector<std::vector<bool>> min_instance_ok;      // [app][position]

  bool servable() const;
  bool capacity_ok() const;
  bool feasible() const { return servable() && capacity_ok(); }
};

/// Full evaluation of a scheme. Never throws on infeasible schemes: capacity
/// overruns and unservable microservices are reported in the result.
LatencyReport objective(const Scenario& s, const DeploymentScheme& d);

/// Weighted latency alone; kUnservableObjective if any microservice has no
/// instance.
double weighted_latency(const Scenario& s, const DeploymentScheme& d);

/// Sum over servers of relative CPU and memory overrun (overrun / capacity).
double relative_overload(const Scenario& s, const DeploymentScheme& d);

}  // namespace edgeplace
