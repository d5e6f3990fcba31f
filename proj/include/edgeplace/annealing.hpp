#pragma once

// Block coordinate descent over microservices, each block optimized by
// simulated annealing.
//
// A block is one microservice's per-server count vector. Blocks are visited
// application by application in descending priority (ties by lower id), and in
// chain order within an application. While one block anneals, every other
// block stays frozen. A sweep visits every block once; sweeps repeat until one
// leaves the whole scheme unchanged or max_sweeps is reached.
//
// Moves take one instance off a server that hosts the microservice and put it
// on any other server, so the instance total of each block never changes
// during the search. Capacity is ignored here; the result goes through repair()
// afterwards.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "edgeplace/model.hpp"
#include "edgeplace/repair.hpp"
#include "edgeplace/sizing.hpp"

namespace edgeplace {

struct SaParams {
  double t_initial_fraction = 0.1;  // T_initial as a fraction of the block's starting objective
  double t_min_ratio = 1e-3;        // T_min = t_min_ratio * T_initial
  double alpha = 0.95;              // geometric cooling factor
  int moves_per_temp = 50;          // proposals per temperature level
  int max_sweeps = 10;
  std::uint64_t seed = 0;
  // Seconds of energy added per unit of relative overload (overrun / capacity,
  // summed over servers and resources). Zero searches on raw latency.
  double overload_penalty = 0.0;

  /// Empty when the parameters are usable.
  std::vector<std::string> problems() const;
};

enum class Termination { converged, max_sweeps };

const char* to_string(Termination t);

struct SweepRecord {
  std::size_t sweep = 0;             // 1-based
  double current_objective = 0.0;    // weighted latency at the end of the sweep
  double best_objective = 0.0;       // lowest end-of-sweep value so far, initial state included
  std::size_t accepted_moves = 0;
  std::vector<std::size_t> accepted_per_block;  // in block_order
};

struct SweepTrace {
  double initial_objective = 0.0;
  std::vector<SweepRecord> sweeps;
  Termination termination = Termination::max_sweeps;
};

/// CSV: sweep,current_objective,best_objective,accepted_moves
std::string sweep_trace_csv(const SweepTrace& trace);

/// Blocks in optimization order.
std::vector<BlockId> block_order(const Scenario& s);

/// Moves one instance from a uniformly chosen hosting server to a uniformly
/// chosen different server. A single-server block comes back unchanged.
std::vector<int> propose_swap(const std::vector<int>& block, std::mt19937_64& rng);

/// Metropolis acceptance: always for delta < 0, otherwise when
/// exp(-delta / temperature) exceeds `uniform_draw` in [0, 1).
bool metropolis_accept(double delta, double temperature, double uniform_draw);

struct AnnealOutcome {
  DeploymentScheme scheme;
  std::size_t accepted_moves = 0;  // accepted proposals that changed the block
  double objective = 0.0;          // energy of the returned scheme
};

/// Anneals a single block with every other block frozen. `d` must be servable.
AnnealOutcome anneal_block(const Scenario& s, const DeploymentScheme& d, BlockId block,
                           const SaParams& p, std::mt19937_64& rng);

struct CamdResult {
  DeploymentScheme scheme;  // after repair
  DeploymentScheme searched;  // before repair
  SizingPlan plan;
  SweepTrace trace;
  RepairLog repair_log;
};

/// Sizing, random initial placement, block-wise annealing, then repair.
/// Deterministic in (scenario, params).
CamdResult camd_deploy(const Scenario& s, const SaParams& p);

/// The annealing phase alone, starting from `initial`.
DeploymentScheme bcd_anneal(const Scenario& s, const DeploymentScheme& initial,
                            const SaParams& p, std::mt19937_64& rng, SweepTrace& trace);

}  // namespace edgeplace
