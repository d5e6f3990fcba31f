#include "doctest.h"

#include <cmath>

#include "edgeplace/sizing.hpp"
#include "test_support.hpp"

using namespace edgeplace;
using namespace edgeplace::testing;

TEST_CASE("chain_ratios are proportional to R times priority") {
  Scenario s = cluster(2);
  add_app(s, 0.7, 10 * KB, {ms(0.5 * GHz, 5e6)}, {500, 500});
  add_app(s, 0.3, 10 * KB, {ms(0.5 * GHz, 5e6)}, {500, 500});
  auto w = chain_ratios(s);
  CHECK(w[0] == doctest::Approx(0.7));
  CHECK(w[1] == doctest::Approx(0.3));

  Scenario t = cluster(2);
  add_app(t, 0.5, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1000, 1000});
  add_app(t, 0.5, 10 * KB, {ms(0.5 * GHz, 5e6)}, {500, 500});
  w = chain_ratios(t);
  CHECK(w[0] == doctest::Approx(2.0 / 3.0));
  CHECK(w[1] == doctest::Approx(1.0 / 3.0));

  Scenario one = cluster(1);
  add_app(one, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6)}, {42});
  CHECK(chain_ratios(one) == std::vector<double>{1.0});
}

TEST_CASE("intra_app_ratios are inverse to processing rate") {
  // Rates 100, 100 / 100, 50 / 100, 50, 25 req/s.
  ApplicationSpec a;
  a.chain = {ms(0.5 * GHz, 5e6), ms(0.5 * GHz, 5e6)};
  auto u = intra_app_ratios(a);
  CHECK(u[0] == doctest::Approx(0.5));
  CHECK(u[1] == doctest::Approx(0.5));

  a.chain = {ms(0.5 * GHz, 5e6), ms(0.5 * GHz, 10e6)};
  u = intra_app_ratios(a);
  CHECK(u[0] == doctest::Approx(1.0 / 3.0));
  CHECK(u[1] == doctest::Approx(2.0 / 3.0));

  a.chain = {ms(0.5 * GHz, 5e6), ms(0.5 * GHz, 10e6), ms(0.5 * GHz, 20e6)};
  u = intra_app_ratios(a);
  CHECK(u[0] == doctest::Approx(1.0 / 7.0));
  CHECK(u[1] == doctest::Approx(2.0 / 7.0));
  CHECK(u[2] == doctest::Approx(4.0 / 7.0));
}

namespace {

// One app, rates 200 and 100 req/s (base counts 1:2), 0.5 GHz per instance,
// memory 1 GB and 2 GB per instance.
Scenario sizing_example(double total_cpu, double total_mem) {
  Scenario s = cluster(2, total_cpu / 2, total_mem / 2);
  add_app(s, 1.0, 10 * KB, {ms(0.5 * GHz, 2.5e6, 1 * GB), ms(0.5 * GHz, 5e6, 2 * GB)}, {50, 50});
  return s;
}

}  // namespace

TEST_CASE("solve_scale: CPU budget alone gives 20 and 40 instances") {
  // lambda * (1 * 0.5 + 2 * 0.5) GHz = 30 GHz -> lambda = 20 -> (20, 40).
  // Memory is generous here, so CPU binds.
  const SizingPlan plan = solve_scale(sizing_example(30 * GHz, 1000 * GB));
  CHECK(plan.binding_resource == BindingResource::cpu);
  CHECK(plan.instance_counts[0] == std::vector<int>{20, 40});
  CHECK(plan.continuous_counts[0][0] == doctest::Approx(20.0));
  CHECK(plan.continuous_counts[0][1] == doctest::Approx(40.0));
}

TEST_CASE("solve_scale: memory binds at 16 and 32 instances") {
  // lambda * (1 * 1 + 2 * 2) GB = 80 GB -> lambda = 16 -> (16, 32), smaller
  // than the CPU solution (20, 40).
  const SizingPlan plan = solve_scale(sizing_example(30 * GHz, 80 * GB));
  CHECK(plan.binding_resource == BindingResource::memory);
  CHECK(plan.instance_counts[0] == std::vector<int>{16, 32});
  CHECK(plan.lambda_mem < plan.lambda_cpu);
  CHECK(plan.chain_count[0] == doctest::Approx(48.0));
}

TEST_CASE("solve_scale rejects a cluster that cannot hold one of each") {
  Scenario s = cluster(1, 0.8 * GHz);
  add_app(s, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6), ms(0.5 * GHz, 5e6)}, {10});
  CHECK_THROWS_AS(solve_scale(s), UndersizedCluster);

  Scenario m = cluster(1, 10 * GHz, 1 * GB);
  add_app(m, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6, 2 * GB)}, {10});
  CHECK_THROWS_AS(solve_scale(m), UndersizedCluster);
}

TEST_CASE("solve_scale clamps tiny shares to one instance") {
  // App 1 has a negligible share but must still be servable.
  Scenario s = cluster(1, 2 * GHz);
  add_app(s, 0.999, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1000});
  add_app(s, 0.001, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1});
  const SizingPlan plan = solve_scale(s);
  CHECK(plan.instance_counts[1][0] == 1);
  CHECK(plan.continuous_counts[1][0] < 1.0);
}

TEST_CASE("continuous sizing exhausts the binding budget") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GeneratorConfig g;
    g.seed = seed;
    g.server_count = 2 + static_cast<int>(seed % 4);
    const Scenario s = generate_scenario(g);
    const SizingPlan plan = solve_scale(s);
    double cpu_total = 0.0, mem_total = 0.0, cpu_used = 0.0, mem_used = 0.0;
    for (const auto& srv : s.servers) {
      cpu_total += srv.cpu_capacity;
      mem_total += srv.mem_capacity;
    }
    for (std::size_t k = 0; k < s.app_count(); ++k) {
      for (std::size_t v = 0; v < s.applications[k].chain.size(); ++v) {
        cpu_used += plan.continuous_counts[k][v] * s.applications[k].chain[v].cpu_demand;
        mem_used += plan.continuous_counts[k][v] * s.applications[k].chain[v].mem_demand;
        CHECK(plan.instance_counts[k][v] >= 1);
      }
    }
    if (plan.binding_resource == BindingResource::cpu) {
      CHECK(std::abs(cpu_used - cpu_total) <= 1e-9 * cpu_total);
      CHECK(mem_used <= mem_total * (1 + 1e-9));
    } else {
      CHECK(std::abs(mem_used - mem_total) <= 1e-9 * mem_total);
      CHECK(cpu_used <= cpu_total * (1 + 1e-9));
    }
  }
}

TEST_CASE("chain_ratios ignore a common load factor") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig g;
    g.seed = seed;
    Scenario s = generate_scenario(g);
    const auto before = chain_ratios(s);
    s.requests = s.requests.scaled(3.5);
    const auto after = chain_ratios(s);
    for (std::size_t k = 0; k < before.size(); ++k) {
      CHECK(after[k] == doctest::Approx(before[k]).epsilon(1e-14));
    }
  }
}

TEST_CASE("raising an application's priority never lowers its chain weight") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig g;
    g.seed = seed;
    Scenario s = generate_scenario(g);
    const double before = chain_ratios(s)[0];
    // Raise app 0's priority and rescale the others to keep the sum at 1.
    const double old_p = s.applications[0].priority;
    const double new_p = old_p + 0.5 * (1.0 - old_p);
    for (std::size_t k = 1; k < s.app_count(); ++k) {
      s.applications[k].priority *= (1.0 - new_p) / (1.0 - old_p);
    }
    s.applications[0].priority = new_p;
    CHECK(chain_ratios(s)[0] >= before);
  }
}

TEST_CASE("random_initial_placement honours the plan and the seed") {
  GeneratorConfig g;
  g.seed = 3;
  const Scenario s = generate_scenario(g);
  const SizingPlan plan = solve_scale(s);
  const DeploymentScheme a = random_initial_placement(s, plan, 17);
  const DeploymentScheme b = random_initial_placement(s, plan, 17);
  CHECK(a == b);
  CHECK_FALSE(a == random_initial_placement(s, plan, 18));
  for (const BlockId blk : a.blocks()) {
    CHECK(total_instances(a, blk) == plan.instance_counts[blk.app][blk.position]);
  }
}

TEST_CASE("random_initial_placement places 3 instances on 2 servers") {
  Scenario s = cluster(2);
  add_app(s, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1, 1});
  SizingPlan plan;
  plan.instance_counts = {{3}};
  CHECK(total_instances(random_initial_placement(s, plan, 5), {0, 0}) == 3);
}

TEST_CASE("random_initial_placement picks servers uniformly") {
  // 10^4 single-instance draws over 4 servers: each count is
  // Binomial(10^4, 1/4), sigma = sqrt(10^4 * 0.25 * 0.75) ~= 43.3.
  Scenario s = cluster(4);
  add_app(s, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1, 1, 1, 1});
  SizingPlan plan;
  plan.instance_counts = {{1}};
  std::mt19937_64 rng(12345);
  std::vector<int> hits(4, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const DeploymentScheme d = random_initial_placement(s, plan, rng);
    for (std::size_t j = 0; j < 4; ++j) hits[j] += d.at({0, 0}, j);
  }
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (int h : hits) CHECK(std::abs(h - draws * 0.25) <= 4 * sigma);
}
