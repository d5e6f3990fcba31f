#include "edgeplace/annealing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "edgeplace/latency.hpp"

namespace edgeplace {

std::vector<std::string> SaParams::problems() const {
  std::vector<std::string> out;
  if (!(t_initial_fraction > 0.0)) out.emplace_back("t_initial_fraction must be > 0");
  if (!(t_min_ratio > 0.0 && t_min_ratio < 1.0)) out.emplace_back("t_min_ratio must be in (0,1)");
  if (!(alpha > 0.0 && alpha < 1.0)) out.emplace_back("alpha must be in (0,1)");
  if (moves_per_temp < 1) out.emplace_back("moves_per_temp must be >= 1");
  if (max_sweeps < 1) out.emplace_back("max_sweeps must be >= 1");
  if (!(overload_penalty >= 0.0)) out.emplace_back("overload_penalty must be >= 0");
  return out;
}

const char* to_string(Termination t) {
  return t == Termination::converged ? "converged" : "max_sweeps";
}

std::string sweep_trace_csv(const SweepTrace& trace) {
  std::ostringstream os;
  os << "sweep,current_objective,best_objective,accepted_moves\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", trace.initial_objective);
  os << "0," << buf << ',' << buf << ",0\n";
  for (const auto& r : trace.sweeps) {
    os << r.sweep << ',';
    std::snprintf(buf, sizeof buf, "%.9g", r.current_objective);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.9g", r.best_objective);
    os << buf << ',' << r.accepted_moves << '\n';
  }
  return os.str();
}

std::vector<BlockId> block_order(const Scenario& s) {
  std::vector<std::size_t> apps(s.app_count());
  std::iota(apps.begin(), apps.end(), std::size_t{0});
  std::stable_sort(apps.begin(), apps.end(), [&s](std::size_t a, std::size_t b) {
    return s.applications[a].priority > s.applications[b].priority;
  });
  std::vector<BlockId> order;
  for (std::size_t k : apps) {
    for (std::size_t v = 0; v < s.applications[k].chain.size(); ++v) order.push_back({k, v});
  }
  return order;
}

std::vector<int> propose_swap(const std::vector<int>& block, std::mt19937_64& rng) {
  std::vector<int> out = block;
  if (block.size() < 2) return out;
  std::vector<std::size_t> hosts;
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (block[i] >= 1) hosts.push_back(i);
  }
  if (hosts.empty()) return out;
  const std::size_t src =
      hosts[std::uniform_int_distribution<std::size_t>(0, hosts.size() - 1)(rng)];
  // Uniform over the other |S|-1 servers.
  std::size_t dst = std::uniform_int_distribution<std::size_t>(0, block.size() - 2)(rng);
  if (dst >= src) ++dst;
  out[src] -= 1;
  out[dst] += 1;
  return out;
}

bool metropolis_accept(double delta, double temperature, double uniform_draw) {
  return delta < 0.0 || std::exp(-delta / temperature) > uniform_draw;
}

namespace {

// Energy of a scheme where only one block varies. Latency of the other
// applications is constant and computed once.
class BlockEnergy {
 public:
  BlockEnergy(const Scenario& s, const DeploymentScheme& d, BlockId block, double penalty)
      : s_(s), block_(block), penalty_(penalty) {
    for (std::size_t k = 0; k < s.app_count(); ++k) {
      if (k == block.app) continue;
      frozen_ += s.applications[k].priority * app_latency(s, d, k);
    }
    if (penalty_ > 0.0) {
      const auto used = resource_usage(s, d);
      const auto& own = d.counts(block);
      demand_ = demand_of(s.microservice(block.app, block.position));
      // Usage of every other block.
      base_usage_.resize(used.size());
      for (std::size_t i = 0; i < used.size(); ++i) {
        base_usage_[i] = {used[i].cpu - own[i] * demand_.cpu, used[i].mem - own[i] * demand_.mem};
      }
    }
  }

  double operator()(const DeploymentScheme& d) const {
    double e = frozen_ + s_.applications[block_.app].priority * app_latency(s_, d, block_.app);
    if (penalty_ > 0.0) e += penalty_ * overload(d.counts(block_));
    return e;
  }

 private:
  double overload(const std::vector<int>& own) const {
    double total = 0.0;
    for (std::size_t i = 0; i < own.size(); ++i) {
      const ResourceUnits cap = capacity_of(s_.servers[i]);
      const std::int64_t cpu = base_usage_[i].cpu + own[i] * demand_.cpu;
      const std::int64_t mem = base_usage_[i].mem + own[i] * demand_.mem;
      total += static_cast<double>(std::max<std::int64_t>(0, cpu - cap.cpu)) / cap.cpu;
      total += static_cast<double>(std::max<std::int64_t>(0, mem - cap.mem)) / cap.mem;
    }
    return total;
  }

  const Scenario& s_;
  BlockId block_;
  double penalty_;
  double frozen_ = 0.0;
  ResourceUnits demand_;
  std::vector<ResourceUnits> base_usage_;
};

double energy(const Scenario& s, const DeploymentScheme& d, const SaParams& p) {
  double e = weighted_latency(s, d);
  if (p.overload_penalty > 0.0 && e != kUnservableObjective) {
    e += p.overload_penalty * relative_overload(s, d);
  }
  return e;
}

}  // namespace

AnnealOutcome anneal_block(const Scenario& s, const DeploymentScheme& d, BlockId block,
                           const SaParams& p, std::mt19937_64& rng) {
  AnnealOutcome out{d, 0, 0.0};
  const BlockEnergy block_energy(s, d, block, p.overload_penalty);
  double current = block_energy(out.scheme);
  out.objective = current;

  const double t_initial = p.t_initial_fraction * current;
  const double t_min = p.t_min_ratio * t_initial;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  DeploymentScheme candidate = out.scheme;
  for (double temp = t_initial; temp > t_min; temp *= p.alpha) {
    for (int i = 0; i < p.moves_per_temp; ++i) {
      std::vector<int> proposal = propose_swap(out.scheme.counts(block), rng);
      if (proposal == out.scheme.counts(block)) continue;
      candidate.counts(block) = proposal;
      const double next = block_energy(candidate);
      const double delta = next - current;
      if (metropolis_accept(delta, temp, unit(rng))) {
        out.scheme.counts(block) = std::move(proposal);
        current = next;
        ++out.accepted_moves;
      } else {
        candidate.counts(block) = out.scheme.counts(block);
      }
    }
  }
  out.objective = current;
  return out;
}

DeploymentScheme bcd_anneal(const Scenario& s, const DeploymentScheme& initial,
                            const SaParams& p, std::mt19937_64& rng, SweepTrace& trace) {
  const auto order = block_order(s);
  DeploymentScheme current = initial;
  trace = SweepTrace{};
  trace.initial_objective = energy(s, current, p);
  double best = trace.initial_objective;

  for (int sweep = 1; sweep <= p.max_sweeps; ++sweep) {
    const DeploymentScheme before = current;
    SweepRecord rec;
    rec.sweep = static_cast<std::size_t>(sweep);
    for (const BlockId b : order) {
      AnnealOutcome o = anneal_block(s, current, b, p, rng);
      current = std::move(o.scheme);
      rec.accepted_per_block.push_back(o.accepted_moves);
      rec.accepted_moves += o.accepted_moves;
    }
    rec.current_objective = energy(s, current, p);
    best = std::min(best, rec.current_objective);
    rec.best_objective = best;
    trace.sweeps.push_back(std::move(rec));
    if (current == before) {
      trace.termination = Termination::converged;
      return current;
    }
  }
  trace.termination = Termination::max_sweeps;
  return current;
}

CamdResult camd_deploy(const Scenario& s, const SaParams& p) {
  require_valid(s);
  if (auto bad = p.problems(); !bad.empty()) {
    std::string msg = "invalid annealing parameters:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw std::invalid_argument(msg);
  }
  CamdResult out;
  out.plan = solve_scale(s);
  std::mt19937_64 rng(p.seed);
  const DeploymentScheme initial = random_initial_placement(s, out.plan, rng);
  out.searched = bcd_anneal(s, initial, p, rng, out.trace);
  RepairResult fixed = repair(s, out.searched);
  out.scheme = std::move(fixed.scheme);
  out.repair_log = std::move(fixed.log);
  return out;
}

}  // namespace edgeplace
