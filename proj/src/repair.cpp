#include "edgeplace/repair.hpp"

#include <algorithm>
#include <sstream>

namespace edgeplace {

std::size_t RepairLog::migrations() const {
  return static_cast<std::size_t>(std::count_if(actions.begin(), actions.end(), [](const auto& a) {
    return a.kind == RepairAction::Kind::migrate;
  }));
}

std::size_t RepairLog::removals() const { return actions.size() - migrations(); }

std::optional<std::size_t> pick_target(const std::vector<ResourceUnits>& residual,
                                       ResourceUnits demand) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    const ResourceUnits& r = residual[i];
    if (r.cpu < demand.cpu || r.mem < demand.mem) continue;
    if (!best || r.cpu > residual[*best].cpu ||
        (r.cpu == residual[*best].cpu && r.mem > residual[*best].mem)) {
      best = i;
    }
  }
  return best;
}

namespace {

bool overloaded(const ResourceUnits& residual) { return residual.cpu < 0 || residual.mem < 0; }

}  // namespace

RepairResult repair(const Scenario& s, const DeploymentScheme& d) {
  RepairResult out{d, {}};
  DeploymentScheme& scheme = out.scheme;
  const std::vector<BlockId> blocks = scheme.blocks();

  std::vector<ResourceUnits> residual(s.server_count());
  {
    const auto used = resource_usage(s, scheme);
    for (std::size_t i = 0; i < residual.size(); ++i) {
      const ResourceUnits cap = capacity_of(s.servers[i]);
      residual[i] = {cap.cpu - used[i].cpu, cap.mem - used[i].mem};
    }
  }

  // Eviction order: lowest priority first, then largest CPU demand.
  std::vector<BlockId> eviction = blocks;
  std::stable_sort(eviction.begin(), eviction.end(), [&s](BlockId a, BlockId b) {
    const double pa = s.applications[a.app].priority;
    const double pb = s.applications[b.app].priority;
    if (pa != pb) return pa < pb;
    return demand_of(s.microservice(a.app, a.position)).cpu >
           demand_of(s.microservice(b.app, b.position)).cpu;
  });

  std::vector<BlockId> zeroed;  // last replicas this pass had to drop
  for (std::size_t srv = 0; srv < s.server_count(); ++srv) {
    while (overloaded(residual[srv])) {
      std::optional<BlockId> evicted;
      std::optional<std::size_t> target;
      for (const BlockId b : eviction) {
        if (scheme.at(b, srv) == 0) continue;
        const ResourceUnits dem = demand_of(s.microservice(b.app, b.position));
        target = pick_target(residual, dem);
        if (target || total_instances(scheme, b) > 1) {
          evicted = b;
          break;
        }
      }
      if (!evicted) {
        // Only sole replicas are left on this server; drop the first in
        // eviction order.
        for (const BlockId b : eviction) {
          if (scheme.at(b, srv) > 0) {
            evicted = b;
            zeroed.push_back(b);
            break;
          }
        }
      }

      const BlockId b = *evicted;
      const ResourceUnits dem = demand_of(s.microservice(b.app, b.position));
      scheme.counts(b)[srv] -= 1;
      residual[srv].cpu += dem.cpu;
      residual[srv].mem += dem.mem;
      if (target) {
        scheme.counts(b)[*target] += 1;
        residual[*target].cpu -= dem.cpu;
        residual[*target].mem -= dem.mem;
        out.log.actions.push_back({RepairAction::Kind::migrate, b, srv, target});
      } else {
        out.log.actions.push_back({RepairAction::Kind::remove, b, srv, std::nullopt});
      }
    }
  }

  // Later evictions may have freed room for a microservice dropped earlier.
  // Its removal then becomes a migration.
  for (const BlockId b : zeroed) {
    const ResourceUnits dem = demand_of(s.microservice(b.app, b.position));
    const auto target = pick_target(residual, dem);
    if (!target) continue;
    scheme.counts(b)[*target] += 1;
    residual[*target].cpu -= dem.cpu;
    residual[*target].mem -= dem.mem;
    for (auto it = out.log.actions.rbegin(); it != out.log.actions.rend(); ++it) {
      if (it->block == b && it->kind == RepairAction::Kind::remove) {
        it->kind = RepairAction::Kind::migrate;
        it->to = target;
        break;
      }
    }
  }

  for (const BlockId b : blocks) {
    if (total_instances(scheme, b) == 0) out.log.unservable.push_back(b);
  }
  return out;
}

std::string repair_log_csv(const RepairLog& log) {
  std::ostringstream os;
  os << "action,app,position,from,to\n";
  for (const auto& a : log.actions) {
    os << (a.kind == RepairAction::Kind::migrate ? "migrate" : "remove") << ',' << a.block.app
       << ',' << a.block.position << ',' << a.from << ',';
    if (a.to) os << *a.to;
    os << '\n';
  }
  return os.str();
}

}  // namespace edgeplace
