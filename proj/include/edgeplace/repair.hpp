#pragma once

// Capacity repair: turns a scheme that may overload servers into one that
// respects every server's CPU and memory limit.
//
// Overloaded servers are processed in index order. On each, instances are
// evicted lowest application priority first, then largest CPU demand first.
// An evicted instance migrates to the server with the most residual CPU that
// can hold it; when no server can, it is removed. The last remaining instance
// of a microservice is only removed after every other candidate on that server
// has been tried, and such a microservice is flagged as unservable unless a
// server with room for it turns up by the end of the pass.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "edgeplace/model.hpp"

namespace edgeplace {

struct RepairAction {
  enum class Kind { migrate, remove };
  Kind kind = Kind::migrate;
  BlockId block;
  std::size_t from = 0;
  std::optional<std::size_t> to;  // set for migrations

  bool operator==(const RepairAction&) const = default;
};

struct RepairLog {
  std::vector<RepairAction> actions;
  std::vector<BlockId> unservable;  // microservices left with zero instances

  bool empty() const { return actions.empty() && unservable.empty(); }
  std::size_t migrations() const;
  std::size_t removals() const;
};

struct RepairResult {
  DeploymentScheme scheme;
  RepairLog log;
};

/// Server able to take one more instance with `demand`: the one with the most
/// residual CPU among those whose residual CPU and memory both cover it. Ties
/// go to more residual memory, then the lower index.
std::optional<std::size_t> pick_target(const std::vector<ResourceUnits>& residual,
                                       ResourceUnits demand);

RepairResult repair(const Scenario& s, const DeploymentScheme& d);

/// CSV: action,app,position,from,to
std::string repair_log_csv(const RepairLog& log);

}  // namespace edgeplace
