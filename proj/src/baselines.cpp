#include "edgeplace/baselines.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "edgeplace/annealing.hpp"
#include "edgeplace/latency.hpp"
#include "edgeplace/repair.hpp"
#include "edgeplace/sizing.hpp"

namespace edgeplace {
namespace {

// Weighted latency restricted to microservices that already have instances.
// Hops touching an unplaced stage are skipped.
double partial_latency(const Scenario& s, const DeploymentScheme& d) {
  double weighted = 0.0;
  for (std::size_t k = 0; k < s.app_count(); ++k) {
    const auto& app = s.applications[k];
    const double load = s.requests.total(k);
    std::vector<double> prev = ingress_distribution(s, k);
    bool prev_placed = true;
    double bits = app.request_data_size * 8.0;
    double t = 0.0;
    for (std::size_t v = 0; v < app.chain.size(); ++v) {
      const int n = total_instances(d, k, v);
      const bool placed = n > 0;
      std::vector<double> cur(s.server_count(), 0.0);
      if (placed) {
        cur = routing_distribution(s, d, {k, v});
        t += load / n / app.chain[v].processing_rate();
        if (prev_placed) {
          for (std::size_t i = 0; i < prev.size(); ++i) {
            for (std::size_t j = 0; j < cur.size(); ++j) {
              if (i != j && prev[i] > 0.0 && cur[j] > 0.0) {
                t += prev[i] * cur[j] * bits / s.bandwidth.at(i, j);
              }
            }
          }
        }
      }
      if (app.chain[v].out_edge_data) bits = *app.chain[v].out_edge_data * 8.0;
      prev = std::move(cur);
      prev_placed = placed;
    }
    weighted += app.priority * t;
  }
  return weighted;
}

class GreedyPlacer {
 public:
  explicit GreedyPlacer(const Scenario& s) : s_(s), scheme_(s), residual_(s.server_count()) {
    for (std::size_t i = 0; i < s.server_count(); ++i) residual_[i] = capacity_of(s.servers[i]);
  }

  // Puts one instance of `b` where partial latency is lowest, preferring
  // servers that still have room.
  void place_one(BlockId b) {
    const ResourceUnits dem = demand_of(s_.microservice(b.app, b.position));
    bool any_fits = false;
    for (const auto& r : residual_) any_fits = any_fits || (r.cpu >= dem.cpu && r.mem >= dem.mem);

    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < residual_.size(); ++i) {
      if (any_fits && (residual_[i].cpu < dem.cpu || residual_[i].mem < dem.mem)) continue;
      scheme_.counts(b)[i] += 1;
      const double value = partial_latency(s_, scheme_);
      scheme_.counts(b)[i] -= 1;
      if (value < best_value) {
        best_value = value;
        best = i;
      }
    }
    scheme_.counts(b)[best] += 1;
    residual_[best].cpu -= dem.cpu;
    residual_[best].mem -= dem.mem;
  }

  void take_one(BlockId b, std::size_t server) {
    const ResourceUnits dem = demand_of(s_.microservice(b.app, b.position));
    scheme_.counts(b)[server] -= 1;
    residual_[server].cpu += dem.cpu;
    residual_[server].mem += dem.mem;
  }

  // Every current instance of `b` is removed and placed again, one at a time.
  void redeploy(BlockId b) {
    const std::vector<int> snapshot = scheme_.counts(b);
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
      for (int n = 0; n < snapshot[i]; ++n) {
        take_one(b, i);
        place_one(b);
      }
    }
  }

  const DeploymentScheme& scheme() const { return scheme_; }

 private:
  const Scenario& s_;
  DeploymentScheme scheme_;
  std::vector<ResourceUnits> residual_;
};

}  // namespace

DeploymentScheme greedy_spread_deploy(const Scenario& s, std::uint64_t /*seed*/) {
  require_valid(s);
  const SizingPlan plan = solve_scale(s);
  GreedyPlacer placer(s);
  for (const BlockId b : block_order(s)) {
    const std::size_t len = s.applications[b.app].chain.size();
    for (int n = 0; n < plan.instance_counts[b.app][b.position]; ++n) {
      placer.place_one(b);
      if (b.position > 0) placer.redeploy({b.app, b.position - 1});
      if (b.position + 1 < len) placer.redeploy({b.app, b.position + 1});
    }
  }
  return repair(s, placer.scheme()).scheme;
}

DeploymentScheme ceil_sized_deploy(const Scenario& s, std::uint64_t /*seed*/) {
  require_valid(s);
  GreedyPlacer placer(s);
  for (const BlockId b : block_order(s)) {
    const double exact = s.requests.total(b.app) / s.microservice(b.app, b.position).processing_rate();
    // Ratios that are integral up to round-off must not gain an instance.
    const int n = std::max(1, static_cast<int>(std::ceil(exact - 1e-9 * std::max(1.0, exact))));
    for (int i = 0; i < n; ++i) placer.place_one(b);
  }
  return repair(s, placer.scheme()).scheme;
}

DeploymentScheme random_deploy(const Scenario& s, std::uint64_t seed) {
  require_valid(s);
  const SizingPlan plan = solve_scale(s);
  return repair(s, random_initial_placement(s, plan, seed)).scheme;
}

ExhaustiveResult exhaustive_optimal(const Scenario& s, const SearchBounds& bounds) {
  require_valid(s);
  const std::size_t n_servers = s.server_count();
  const int cap = bounds.max_per_microservice;
  if (cap < 1) throw std::invalid_argument("max_per_microservice must be >= 1");

  // Every count vector with total in [1, cap].
  std::vector<std::vector<int>> options;
  {
    std::vector<int> v(n_servers, 0);
    std::function<void(std::size_t, int)> fill = [&](std::size_t i, int left) {
      if (i + 1 == n_servers) {
        for (int x = 0; x <= left; ++x) {
          v[i] = x;
          const int total = cap - left + x;
          if (total >= 1) options.push_back(v);
        }
        return;
      }
      for (int x = 0; x <= left; ++x) {
        v[i] = x;
        fill(i + 1, left - x);
      }
    };
    fill(0, cap);
  }

  DeploymentScheme scheme(s);
  const auto blocks = scheme.blocks();
  double states = 1.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) states *= static_cast<double>(options.size());
  if (states > static_cast<double>(bounds.max_states)) {
    throw SearchSpaceTooLarge("exhaustive search over " + std::to_string(states) +
                              " states exceeds cap of " + std::to_string(bounds.max_states));
  }

  std::vector<ResourceUnits> residual(n_servers);
  for (std::size_t i = 0; i < n_servers; ++i) residual[i] = capacity_of(s.servers[i]);

  ExhaustiveResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t)> search = [&](std::size_t depth) {
    if (depth == blocks.size()) {
      ++best.feasible_schemes;
      const double value = weighted_latency(s, scheme);
      if (value < best.objective) {
        best.objective = value;
        best.scheme = scheme;
      }
      return;
    }
    const BlockId b = blocks[depth];
    const ResourceUnits dem = demand_of(s.microservice(b.app, b.position));
    for (const auto& opt : options) {
      bool fits = true;
      for (std::size_t i = 0; i < n_servers && fits; ++i) {
        fits = residual[i].cpu >= opt[i] * dem.cpu && residual[i].mem >= opt[i] * dem.mem;
      }
      if (!fits) continue;
      for (std::size_t i = 0; i < n_servers; ++i) {
        residual[i].cpu -= opt[i] * dem.cpu;
        residual[i].mem -= opt[i] * dem.mem;
      }
      scheme.counts(b) = opt;
      search(depth + 1);
      for (std::size_t i = 0; i < n_servers; ++i) {
        residual[i].cpu += opt[i] * dem.cpu;
        residual[i].mem += opt[i] * dem.mem;
      }
    }
    scheme.counts(b).assign(n_servers, 0);
  };
  search(0);

  if (best.feasible_schemes == 0) {
    throw std::runtime_error("no scheme with at most " + std::to_string(cap) +
                             " instances per microservice fits the cluster");
  }
  return best;
}

}  // namespace edgeplace
