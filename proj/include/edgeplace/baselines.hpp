#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "edgeplace/model.hpp"

namespace edgeplace {

/// Greedy per-instance placement with the sizing plan's counts. Each instance
/// goes to the server, among those with room for it, that gives the lowest
/// weighted latency over the microservices placed so far (ties to the lower
/// index). After each placement, every instance of the chain predecessor and
/// successor is taken out and greedily placed again, once. The result is
/// repaired. `seed` is accepted for interface symmetry; the procedure is
/// deterministic.
DeploymentScheme greedy_spread_deploy(const Scenario& s, std::uint64_t seed = 0);

/// ceil(R / o) instances per microservice, placed by the same latency-greedy
/// rule without the neighbour pass, then repaired.
DeploymentScheme ceil_sized_deploy(const Scenario& s, std::uint64_t seed = 0);

/// Sizing-plan counts placed uniformly at random, then repaired.
DeploymentScheme random_deploy(const Scenario& s, std::uint64_t seed);

struct SearchBounds {
  int max_per_microservice = 3;        // largest instance total tried for any microservice
  std::size_t max_states = 10'000'000;  // refuse larger search spaces
};

class SearchSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExhaustiveResult {
  DeploymentScheme scheme;
  double objective = 0.0;
  std::size_t feasible_schemes = 0;
};

/// Minimum weighted latency over every scheme whose per-microservice totals lie
/// in [1, max_per_microservice] and that fits every server. Throws
/// SearchSpaceTooLarge when the unpruned space exceeds bounds.max_states, and
/// std::runtime_error when no such scheme fits.
ExhaustiveResult exhaustive_optimal(const Scenario& s, const SearchBounds& bounds = {});

}  // namespace edgeplace
