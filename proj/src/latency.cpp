#include "edgeplace/latency.hpp"

#include <algorithm>
#include <string>

namespace edgeplace {

UnservableError::UnservableError(BlockId block)
    : std::runtime_error("unservable microservice: app " + std::to_string(block.app) +
                         ", position " + std::to_string(block.position) + " has no instances"),
      block_(block) {}

std::vector<double> routing_distribution(const Scenario& s, const DeploymentScheme& d,
                                         BlockId block) {
  const auto& c = d.counts(block);
  const int total = total_instances(d, block);
  if (total < 1) throw UnservableError(block);
  std::vector<double> p(s.server_count(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(c[i]) / total;
  return p;
}

std::vector<double> ingress_distribution(const Scenario& s, std::size_t app) {
  const double total = s.requests.total(app);
  if (!(total > 0.0)) {
    throw std::invalid_argument("application " + std::to_string(app) + " receives no requests");
  }
  std::vector<double> p(s.server_count(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = s.requests.at(app, i) / total;
  return p;
}

double computing_delay(const Scenario& s, const DeploymentScheme& d, std::size_t app) {
  const double load = s.requests.total(app);
  const auto& chain = s.applications.at(app).chain;
  double delay = 0.0;
  for (std::size_t v = 0; v < chain.size(); ++v) {
    const int n = total_instances(d, app, v);
    if (n < 1) throw UnservableError({app, v});
    delay += load / n / chain[v].processing_rate();
  }
  return delay;
}

namespace {

// Expected cost of one hop whose endpoints are drawn independently from `src`
// and `dst`. Same-server pairs cost nothing and bw(i, i) is never read.
double hop_delay(const BandwidthMatrix& bw, const std::vector<double>& src,
                 const std::vector<double>& dst, double bits) {
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < dst.size(); ++j) {
      if (j == i || dst[j] == 0.0) continue;
      row += dst[j] / bw.at(i, j);
    }
    sum += src[i] * row;
  }
  return sum * bits;
}

}  // namespace

double expected_transmission_delay(const Scenario& s, const DeploymentScheme& d, std::size_t app) {
  const auto& spec = s.applications.at(app);
  std::vector<double> prev = ingress_distribution(s, app);
  double bits = spec.request_data_size * 8.0;
  double delay = 0.0;
  for (std::size_t v = 0; v < spec.chain.size(); ++v) {
    std::vector<double> cur = routing_distribution(s, d, {app, v});
    delay += hop_delay(s.bandwidth, prev, cur, bits);
    if (spec.chain[v].out_edge_data) bits = *spec.chain[v].out_edge_data * 8.0;
    prev = std::move(cur);
  }
  return delay;
}

double app_latency(const Scenario& s, const DeploymentScheme& d, std::size_t app) {
  return expected_transmission_delay(s, d, app) + computing_delay(s, d, app);
}

std::vector<WeightedPath> enumerate_paths(const Scenario& s, const DeploymentScheme& d,
                                          std::size_t app, std::size_t path_cap) {
  const auto& spec = s.applications.at(app);
  const std::size_t hops = spec.chain.size() + 1;

  // Per hop: the distribution and the servers with non-zero probability.
  std::vector<std::vector<double>> dist;
  dist.reserve(hops);
  dist.push_back(ingress_distribution(s, app));
  for (std::size_t v = 0; v < spec.chain.size(); ++v) {
    dist.push_back(routing_distribution(s, d, {app, v}));
  }
  std::vector<std::vector<std::size_t>> support(hops);
  std::size_t n_paths = 1;
  for (std::size_t h = 0; h < hops; ++h) {
    for (std::size_t i = 0; i < dist[h].size(); ++i) {
      if (dist[h][i] > 0.0) support[h].push_back(i);
    }
    if (n_paths > path_cap / support[h].size()) {
      throw EnumerationInfeasible("path enumeration for app " + std::to_string(app) +
                                  " exceeds cap of " + std::to_string(path_cap) + " paths");
    }
    n_paths *= support[h].size();
  }

  // Data size crossing hop h (h = 0 is ingress -> stage 1).
  std::vector<double> hop_bits(hops, 0.0);
  hop_bits[1] = spec.request_data_size * 8.0;
  for (std::size_t v = 0; v + 1 < spec.chain.size(); ++v) {
    hop_bits[v + 2] = *spec.chain[v].out_edge_data * 8.0;
  }

  // Computing delay does not depend on the path; it is evaluated per path
  // anyway so that this routine stays a literal sum over paths.
  const double load = s.requests.total(app);

  std::vector<WeightedPath> out;
  out.reserve(n_paths);
  std::vector<std::size_t> idx(hops, 0);
  for (std::size_t m = 0; m < n_paths; ++m) {
    WeightedPath path;
    path.servers.resize(hops);
    path.probability = 1.0;
    for (std::size_t h = 0; h < hops; ++h) {
      path.servers[h] = support[h][idx[h]];
      path.probability *= dist[h][path.servers[h]];
    }
    double tran = 0.0;
    for (std::size_t h = 1; h < hops; ++h) {
      const std::size_t a = path.servers[h - 1];
      const std::size_t b = path.servers[h];
      if (a != b) tran += hop_bits[h] / s.bandwidth.at(a, b);
    }
    double com = 0.0;
    for (std::size_t v = 0; v < spec.chain.size(); ++v) {
      com += load / total_instances(d, app, v) / spec.chain[v].processing_rate();
    }
    path.latency = tran + com;
    out.push_back(std::move(path));

    // Odometer increment, last hop fastest.
    for (std::size_t h = hops; h-- > 0;) {
      if (++idx[h] < support[h].size()) break;
      idx[h] = 0;
    }
  }
  return out;
}

double enumerate_paths_latency(const Scenario& s, const DeploymentScheme& d, std::size_t app,
                               std::size_t path_cap) {
  double total = 0.0;
  for (const auto& p : enumerate_paths(s, d, app, path_cap)) total += p.probability * p.latency;
  return total;
}

bool LatencyReport::servable() const {
  return std::all_of(per_app_latency.begin(), per_app_latency.end(),
                     [](const auto& t) { return t.has_value(); });
}

bool LatencyReport::capacity_ok() const {
  auto zero = [](double x) { return x == 0.0; };
  return std::all_of(cpu_violation.begin(), cpu_violation.end(), zero) &&
         std::all_of(mem_violation.begin(), mem_violation.end(), zero);
}

LatencyReport objective(const Scenario& s, const DeploymentScheme& d) {
  LatencyReport r;
  const auto used = resource_usage(s, d);
  r.cpu_violation.assign(s.server_count(), 0.0);
  r.mem_violation.assign(s.server_count(), 0.0);
  for (std::size_t i = 0; i < s.server_count(); ++i) {
    const ResourceUnits cap = capacity_of(s.servers[i]);
    r.cpu_violation[i] = static_cast<double>(std::max<std::int64_t>(0, used[i].cpu - cap.cpu));
    r.mem_violation[i] = static_cast<double>(std::max<std::int64_t>(0, used[i].mem - cap.mem));
  }

  bool all_servable = true;
  double weighted = 0.0;
  r.per_app_latency.resize(s.app_count());
  r.min_instance_ok.resize(s.app_count());
  for (std::size_t k = 0; k < s.app_count(); ++k) {
    const std::size_t len = s.applications[k].chain.size();
    r.min_instance_ok[k].resize(len);
    bool servable = true;
    for (std::size_t v = 0; v < len; ++v) {
      r.min_instance_ok[k][v] = total_instances(d, k, v) >= 1;
      servable = servable && r.min_instance_ok[k][v];
    }
    if (servable) {
      r.per_app_latency[k] = app_latency(s, d, k);
      weighted += s.applications[k].priority * *r.per_app_latency[k];
    } else {
      all_servable = false;
    }
  }
  r.objective = all_servable ? weighted : kUnservableObjective;
  return r;
}

double weighted_latency(const Scenario& s, const DeploymentScheme& d) {
  double weighted = 0.0;
  for (std::size_t k = 0; k < s.app_count(); ++k) {
    for (std::size_t v = 0; v < s.applications[k].chain.size(); ++v) {
      if (total_instances(d, k, v) < 1) return kUnservableObjective;
    }
    weighted += s.applications[k].priority * app_latency(s, d, k);
  }
  return weighted;
}

double relative_overload(const Scenario& s, const DeploymentScheme& d) {
  const auto used = resource_usage(s, d);
  double total = 0.0;
  for (std::size_t i = 0; i < s.server_count(); ++i) {
    const ResourceUnits cap = capacity_of(s.servers[i]);
    total += static_cast<double>(std::max<std::int64_t>(0, used[i].cpu - cap.cpu)) / cap.cpu;
    total += static_cast<double>(std::max<std::int64_t>(0, used[i].mem - cap.mem)) / cap.mem;
  }
  return total;
}

}  // namespace edgeplace
