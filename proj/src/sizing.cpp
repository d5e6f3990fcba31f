#include "edgeplace/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edgeplace {

const char* to_string(BindingResource r) {
  return r == BindingResource::cpu ? "cpu" : "memory";
}

namespace {

std::vector<double> normalized(std::vector<double> w) {
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return w;
}

}  // namespace

std::vector<double> chain_ratios(const Scenario& s) {
  std::vector<double> w(s.app_count());
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = s.requests.total(k) * s.applications[k].priority;
  }
  return normalized(std::move(w));
}

std::vector<double> intra_app_ratios(const ApplicationSpec& app) {
  std::vector<double> u(app.chain.size());
  for (std::size_t v = 0; v < u.size(); ++v) u[v] = 1.0 / app.chain[v].processing_rate();
  return normalized(std::move(u));
}

SizingPlan solve_scale(const Scenario& s) {
  double total_cpu = 0.0;
  double total_mem = 0.0;
  for (const auto& srv : s.servers) {
    total_cpu += srv.cpu_capacity;
    total_mem += srv.mem_capacity;
  }

  double min_cpu = 0.0;
  double min_mem = 0.0;
  for (const auto& app : s.applications) {
    for (const auto& ms : app.chain) {
      min_cpu += ms.cpu_demand;
      min_mem += ms.mem_demand;
    }
  }
  if (min_cpu > total_cpu || min_mem > total_mem) {
    throw UndersizedCluster("undersized cluster: one instance of every microservice needs " +
                            std::to_string(min_cpu) + " Hz / " + std::to_string(min_mem) +
                            " bytes, cluster offers " + std::to_string(total_cpu) + " Hz / " +
                            std::to_string(total_mem) + " bytes");
  }

  // base[k][v] = w_k * u_kv; every count is lambda * base.
  const auto w = chain_ratios(s);
  std::vector<std::vector<double>> base(s.app_count());
  double cpu_per_lambda = 0.0;
  double mem_per_lambda = 0.0;
  for (std::size_t k = 0; k < s.app_count(); ++k) {
    const auto u = intra_app_ratios(s.applications[k]);
    base[k].resize(u.size());
    for (std::size_t v = 0; v < u.size(); ++v) {
      base[k][v] = w[k] * u[v];
      cpu_per_lambda += base[k][v] * s.applications[k].chain[v].cpu_demand;
      mem_per_lambda += base[k][v] * s.applications[k].chain[v].mem_demand;
    }
  }

  SizingPlan plan;
  plan.lambda_cpu = total_cpu / cpu_per_lambda;
  plan.lambda_mem = total_mem / mem_per_lambda;
  plan.binding_resource =
      plan.lambda_mem < plan.lambda_cpu ? BindingResource::memory : BindingResource::cpu;
  const double lambda = std::min(plan.lambda_cpu, plan.lambda_mem);

  plan.chain_count.resize(s.app_count());
  plan.instance_counts.resize(s.app_count());
  plan.continuous_counts.resize(s.app_count());
  for (std::size_t k = 0; k < s.app_count(); ++k) {
    plan.chain_count[k] = lambda * w[k];
    for (double b : base[k]) {
      const double x = lambda * b;
      // Counts that are integral up to round-off (e.g. 19.999999999) floor to
      // the integer they represent.
      const double floored = std::floor(x + 1e-9 * std::max(1.0, x));
      plan.continuous_counts[k].push_back(x);
      plan.instance_counts[k].push_back(std::max(1, static_cast<int>(floored)));
    }
  }
  return plan;
}

DeploymentScheme random_initial_placement(const Scenario& s, const SizingPlan& plan,
                                          std::mt19937_64& rng) {
  DeploymentScheme d(s);
  std::uniform_int_distribution<std::size_t> pick(0, s.server_count() - 1);
  for (std::size_t k = 0; k < s.app_count(); ++k) {
    for (std::size_t v = 0; v < s.applications[k].chain.size(); ++v) {
      auto& c = d.counts({k, v});
      for (int n = 0; n < plan.instance_counts.at(k).at(v); ++n) ++c[pick(rng)];
    }
  }
  return d;
}

DeploymentScheme random_initial_placement(const Scenario& s, const SizingPlan& plan,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_initial_placement(s, plan, rng);
}

}  // namespace edgeplace
