#include "edgeplace/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace edgeplace {

double RequestDistribution::total(std::size_t app) const {
  double sum = 0.0;
  for (std::size_t s = 0; s < servers_; ++s) sum += at(app, s);
  return sum;
}

RequestDistribution RequestDistribution::scaled(double factor) const {
  RequestDistribution out = *this;
  for (double& r : out.arrivals_) r *= factor;
  return out;
}

std::size_t Scenario::microservice_count() const {
  std::size_t n = 0;
  for (const auto& app : applications) n += app.chain.size();
  return n;
}

DeploymentScheme::DeploymentScheme(const Scenario& scenario) : servers_(scenario.server_count()) {
  counts_.reserve(scenario.app_count());
  for (const auto& app : scenario.applications) {
    counts_.emplace_back(app.chain.size(), std::vector<int>(servers_, 0));
  }
}

const std::vector<int>& DeploymentScheme::counts(BlockId block) const {
  if (block.app >= counts_.size() || block.position >= counts_[block.app].size()) {
    throw LookupError("no microservice at app " + std::to_string(block.app) + ", position " +
                      std::to_string(block.position));
  }
  return counts_[block.app][block.position];
}

std::vector<int>& DeploymentScheme::counts(BlockId block) {
  return const_cast<std::vector<int>&>(std::as_const(*this).counts(block));
}

void DeploymentScheme::set_counts(BlockId block, std::vector<int> per_server) {
  if (per_server.size() != servers_) {
    throw std::invalid_argument("count vector has " + std::to_string(per_server.size()) +
                                " entries, expected " + std::to_string(servers_));
  }
  counts(block) = std::move(per_server);
}

std::vector<BlockId> DeploymentScheme::blocks() const {
  std::vector<BlockId> out;
  for (std::size_t a = 0; a < counts_.size(); ++a) {
    for (std::size_t v = 0; v < counts_[a].size(); ++v) out.push_back({a, v});
  }
  return out;
}

int total_instances(const DeploymentScheme& scheme, std::size_t app, std::size_t pos) {
  const auto& c = scheme.counts({app, pos});
  return std::accumulate(c.begin(), c.end(), 0);
}

namespace {

std::string index_field(const std::string& name, std::size_t i) {
  return name + "[" + std::to_string(i) + "]";
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto flag = [&out](std::string field, std::string message) {
    out.push_back({std::move(field), std::move(message)});
  };

  const std::size_t n_servers = s.servers.size();
  if (n_servers == 0) flag("servers", "no servers");
  for (std::size_t i = 0; i < n_servers; ++i) {
    const auto& srv = s.servers[i];
    const auto f = index_field("servers", i);
    if (srv.id != i) flag(f + ".id", "server ids must be dense 0..|S|-1");
    if (!positive_finite(srv.cpu_capacity)) flag(f + ".cpu_capacity", "non-positive CPU capacity");
    if (!positive_finite(srv.mem_capacity)) flag(f + ".mem_capacity", "non-positive memory capacity");
  }

  if (s.bandwidth.size() != n_servers) {
    flag("bandwidth", "matrix is " + std::to_string(s.bandwidth.size()) + "x" +
                          std::to_string(s.bandwidth.size()) + ", expected " +
                          std::to_string(n_servers));
  } else {
    for (std::size_t i = 0; i < n_servers; ++i) {
      for (std::size_t j = 0; j < n_servers; ++j) {
        if (i == j) continue;
        const double b = s.bandwidth.at(i, j);
        const auto f = "bandwidth[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        if (!positive_finite(b)) {
          flag(f, "non-positive bandwidth");
        } else if (j > i && b != s.bandwidth.at(j, i)) {
          flag(f, "bandwidth matrix not symmetric");
        }
      }
    }
  }

  if (s.applications.empty()) flag("applications", "no applications");
  double priority_sum = 0.0;
  for (std::size_t k = 0; k < s.applications.size(); ++k) {
    const auto& app = s.applications[k];
    const auto f = index_field("applications", k);
    if (app.id != k) flag(f + ".id", "application ids must be dense 0..|A|-1");
    // A lone application carries the whole weight, so 1 is admitted.
    if (!(std::isfinite(app.priority) && app.priority > 0.0 && app.priority <= 1.0)) {
      flag(f + ".priority", "priority outside (0,1]");
    }
    priority_sum += app.priority;
    if (!positive_finite(app.request_data_size)) {
      flag(f + ".request_data_size", "non-positive request data size");
    }
    if (app.chain.empty()) flag(f + ".chain", "empty microservice chain");
    for (std::size_t v = 0; v < app.chain.size(); ++v) {
      const auto& ms = app.chain[v];
      const auto g = f + index_field(".chain", v);
      if (!positive_finite(ms.cpu_demand)) flag(g + ".cpu_demand", "non-positive CPU demand");
      if (!positive_finite(ms.mem_demand)) flag(g + ".mem_demand", "non-positive memory demand");
      if (!positive_finite(ms.cycles_per_request)) {
        flag(g + ".cycles_per_request", "non-positive cycles per request");
      }
      const bool tail = v + 1 == app.chain.size();
      if (tail && ms.out_edge_data) {
        flag(g + ".out_edge_data", "last microservice of a chain has no successor");
      } else if (!tail && !ms.out_edge_data) {
        flag(g + ".out_edge_data", "missing data size towards successor");
      } else if (!tail && !positive_finite(*ms.out_edge_data)) {
        flag(g + ".out_edge_data", "non-positive edge data size");
      }
    }
  }
  if (!s.applications.empty() && std::abs(priority_sum - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "priority sum != 1 (got " << priority_sum << ")";
    flag("applications.priority", msg.str());
  }

  if (s.requests.apps() != s.applications.size() || s.requests.servers() != n_servers) {
    flag("requests", "arrival matrix shape does not match applications x servers");
  } else {
    for (std::size_t k = 0; k < s.applications.size(); ++k) {
      bool bad_entry = false;
      for (std::size_t i = 0; i < n_servers; ++i) {
        const double r = s.requests.at(k, i);
        if (!std::isfinite(r) || r < 0.0) {
          flag("requests[" + std::to_string(k) + "][" + std::to_string(i) + "]",
               "negative request count");
          bad_entry = true;
        }
      }
      if (!bad_entry && !(s.requests.total(k) > 0.0)) {
        flag(index_field("requests", k), "application receives no requests");
      }
    }
  }
  return out;
}

std::vector<Violation> validate_scheme(const Scenario& scenario, const DeploymentScheme& scheme) {
  std::vector<Violation> out;
  if (scheme.server_count() != scenario.server_count()) {
    out.push_back({"counts", "scheme covers " + std::to_string(scheme.server_count()) +
                                 " servers, scenario has " +
                                 std::to_string(scenario.server_count())});
    return out;
  }
  if (scheme.app_count() != scenario.app_count()) {
    out.push_back({"counts", "scheme covers " + std::to_string(scheme.app_count()) +
                                 " applications, scenario has " +
                                 std::to_string(scenario.app_count())});
    return out;
  }
  for (std::size_t k = 0; k < scenario.app_count(); ++k) {
    if (scheme.chain_length(k) != scenario.applications[k].chain.size()) {
      out.push_back({"counts[" + std::to_string(k) + "]", "chain length mismatch"});
      continue;
    }
    for (std::size_t v = 0; v < scheme.chain_length(k); ++v) {
      for (std::size_t i = 0; i < scheme.server_count(); ++i) {
        if (scheme.at({k, v}, i) < 0) {
          out.push_back({"counts[" + std::to_string(k) + "][" + std::to_string(v) + "][" +
                             std::to_string(i) + "]",
                         "negative instance count"});
        }
      }
    }
  }
  return out;
}

namespace {

std::string join_violations(const std::vector<Violation>& v) {
  std::string msg = "invalid input:";
  for (const auto& x : v) msg += "\n  " + x.field + ": " + x.message;
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations)) {}

void require_valid(const Scenario& scenario) {
  auto v = validate_scenario(scenario);
  if (!v.empty()) throw ValidationError(std::move(v));
}

std::int64_t to_units(double value) { return std::llround(value); }

ResourceUnits capacity_of(const ServerSpec& server) {
  return {to_units(server.cpu_capacity), to_units(server.mem_capacity)};
}

ResourceUnits demand_of(const MicroserviceSpec& ms) {
  return {to_units(ms.cpu_demand), to_units(ms.mem_demand)};
}

std::vector<ResourceUnits> resource_usage(const Scenario& scenario,
                                          const DeploymentScheme& scheme) {
  std::vector<ResourceUnits> used(scenario.server_count());
  for (const BlockId b : scheme.blocks()) {
    const ResourceUnits d = demand_of(scenario.microservice(b.app, b.position));
    const auto& c = scheme.counts(b);
    for (std::size_t i = 0; i < used.size(); ++i) {
      used[i].cpu += c[i] * d.cpu;
      used[i].mem += c[i] * d.mem;
    }
  }
  return used;
}

}  // namespace edgeplace
