#pragma once

// Instance-count sizing and random initial placement.
//
// Applications get a share of the cluster proportional to R * gamma, and
// within an application each stage gets instances in inverse proportion to its
// processing rate. Once both ratios are fixed, the continuous instance count of
// every microservice is lambda * w_app * u_stage for a single scalar lambda.
// The CPU budget equation
//
//   sum_k sum_v lambda * w_k * u_kv * cpu_kv = sum_i CPU_i
//
// pins lambda_cpu, and the memory equation pins lambda_mem. Both count sets
// share the same ratios, so the element-wise smaller set is the one with the
// smaller lambda. That resource is reported as binding.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "edgeplace/model.hpp"

namespace edgeplace {

enum class BindingResource { cpu, memory };

const char* to_string(BindingResource r);

struct SizingPlan {
  std::vector<double> chain_count;                    // per application, lambda * w_k
  std::vector<std::vector<int>> instance_counts;      // [app][position], each >= 1
  std::vector<std::vector<double>> continuous_counts;  // [app][position], before flooring
  double lambda_cpu = 0.0;
  double lambda_mem = 0.0;
  BindingResource binding_resource = BindingResource::cpu;
};

class UndersizedCluster : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// R_k * gamma_k normalized to sum 1.
std::vector<double> chain_ratios(const Scenario& s);

/// 1 / o_v normalized to sum 1 over the chain.
std::vector<double> intra_app_ratios(const ApplicationSpec& app);

/// Throws UndersizedCluster when the cluster's total CPU or memory cannot hold
/// one instance of every microservice.
SizingPlan solve_scale(const Scenario& s);

/// Places plan.instance_counts[k][v] instances of each microservice, each on a
/// server drawn uniformly at random. Capacities are not consulted.
DeploymentScheme random_initial_placement(const Scenario& s, const SizingPlan& plan,
                                          std::mt19937_64& rng);
DeploymentScheme random_initial_placement(const Scenario& s, const SizingPlan& plan,
                                          std::uint64_t seed);

}  // namespace edgeplace
