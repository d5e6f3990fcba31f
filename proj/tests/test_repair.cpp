#include "doctest.h"

#include <random>

#include "edgeplace/latency.hpp"
#include "edgeplace/repair.hpp"
#include "test_support.hpp"

using namespace edgeplace;
using namespace edgeplace::testing;

TEST_CASE("pick_target") {
  const ResourceUnits demand{1'000, 10};
  SUBCASE("single candidate") {
    CHECK(pick_target({{500, 100}, {2'000, 100}, {3'000, 5}}, demand) == 1u);
  }
  SUBCASE("most residual CPU wins") {
    CHECK(pick_target({{3'000, 100}, {5'000, 100}}, demand) == 1u);
  }
  SUBCASE("ties go to memory, then the lower index") {
    CHECK(pick_target({{3'000, 50}, {3'000, 80}, {3'000, 80}}, demand) == 1u);
  }
  SUBCASE("no candidate") {
    CHECK_FALSE(pick_target({{999, 100}, {5'000, 9}}, demand).has_value());
    CHECK_FALSE(pick_target({}, demand).has_value());
  }
}

TEST_CASE("repair leaves a feasible scheme alone") {
  Scenario s = cluster(2, 2 * GHz);
  add_app(s, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1, 1});
  DeploymentScheme d(s);
  d.set_counts({0, 0}, {2, 1});
  const RepairResult r = repair(s, d);
  CHECK(r.scheme == d);
  CHECK(r.log.empty());
}

TEST_CASE("repair migrates an instance to a server with room") {
  // Server 0 holds 5 x 0.5 GHz against 2 GHz: one instance too many.
  Scenario s = cluster(2, 2 * GHz);
  add_app(s, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1, 1});
  DeploymentScheme d(s);
  d.set_counts({0, 0}, {5, 0});
  const RepairResult r = repair(s, d);
  REQUIRE(r.log.actions.size() == 1);
  CHECK(r.log.actions[0] == RepairAction{RepairAction::Kind::migrate, {0, 0}, 0, 1u});
  CHECK(r.scheme.counts({0, 0}) == std::vector<int>{4, 1});
}

TEST_CASE("repair removes an instance when nothing has room") {
  Scenario s = cluster(2, 2 * GHz);
  add_app(s, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1, 1});
  DeploymentScheme d(s);
  d.set_counts({0, 0}, {5, 4});
  const RepairResult r = repair(s, d);
  REQUIRE(r.log.actions.size() == 1);
  CHECK(r.log.actions[0].kind == RepairAction::Kind::remove);
  CHECK(total_instances(r.scheme, {0, 0}) == 8);
  CHECK(r.log.unservable.empty());
}

TEST_CASE("repair evicts the lower-priority application first") {
  Scenario s = cluster(2, 1 * GHz);
  s.servers[1].cpu_capacity = 0.5 * GHz;
  add_app(s, 0.8, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1, 1});
  add_app(s, 0.2, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1, 1});
  DeploymentScheme d(s);
  d.set_counts({0, 0}, {2, 0});
  d.set_counts({1, 0}, {1, 0});
  const RepairResult r = repair(s, d);
  REQUIRE(r.log.actions.size() == 1);
  CHECK(r.log.actions[0].block == BlockId{1, 0});
  CHECK(r.log.actions[0].kind == RepairAction::Kind::migrate);
  CHECK(r.scheme.counts({1, 0}) == std::vector<int>{0, 1});
}

TEST_CASE("repair evicts the larger CPU demand first within a priority") {
  Scenario s = cluster(1, 1 * GHz);
  add_app(s, 1.0, 10 * KB, {ms(0.2 * GHz, 5e6), ms(0.6 * GHz, 5e6)}, {1});
  DeploymentScheme d(s);
  d.set_counts({0, 0}, {2});
  d.set_counts({0, 1}, {2});
  const RepairResult r = repair(s, d);
  // 0.4 + 1.2 = 1.6 GHz; dropping one 0.6 GHz instance fixes it.
  REQUIRE(r.log.actions.size() == 1);
  CHECK(r.log.actions[0].block == BlockId{0, 1});
  CHECK(r.scheme.counts({0, 1}) == std::vector<int>{1});
}

TEST_CASE("repair keeps a sole replica when another eviction suffices") {
  // Low-priority app 1 has a single instance; high-priority app 0 has two.
  // The sole replica cannot move, so app 0 gives one up instead.
  Scenario s = cluster(1, 1 * GHz);
  add_app(s, 0.9, 10 * KB, {ms(0.4 * GHz, 5e6)}, {1});
  add_app(s, 0.1, 10 * KB, {ms(0.4 * GHz, 5e6)}, {1});
  DeploymentScheme d(s);
  d.set_counts({0, 0}, {2});
  d.set_counts({1, 0}, {1});
  const RepairResult r = repair(s, d);
  CHECK(r.scheme.counts({1, 0}) == std::vector<int>{1});
  CHECK(r.scheme.counts({0, 0}) == std::vector<int>{1});
  CHECK(r.log.unservable.empty());
}

TEST_CASE("repair flags a microservice that fits nowhere") {
  // A 3 GHz instance on 2 GHz servers can never be hosted.
  Scenario s = cluster(2, 2 * GHz);
  add_app(s, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6), ms(3 * GHz, 5e6)}, {1, 1});
  DeploymentScheme d(s);
  d.set_counts({0, 0}, {1, 1});
  d.set_counts({0, 1}, {1, 0});
  const RepairResult r = repair(s, d);
  CHECK(objective(s, r.scheme).capacity_ok());
  REQUIRE(r.log.unservable.size() == 1);
  CHECK(r.log.unservable[0] == BlockId{0, 1});
  CHECK_FALSE(objective(s, r.scheme).min_instance_ok[0][1]);
}

TEST_CASE("repair log CSV") {
  RepairLog log;
  log.actions.push_back({RepairAction::Kind::migrate, {1, 2}, 0, 3u});
  log.actions.push_back({RepairAction::Kind::remove, {0, 1}, 2, std::nullopt});
  CHECK(repair_log_csv(log) == "action,app,position,from,to\nmigrate,1,2,0,3\nremove,0,1,2,\n");
  CHECK(log.migrations() == 1);
  CHECK(log.removals() == 1);
}

TEST_CASE("repair fuzz: feasible, idempotent, never adds instances") {
  std::mt19937_64 rng(31337);
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    GeneratorConfig g;
    g.seed = seed;
    g.server_count = 2 + static_cast<int>(seed % 4);
    g.cpu_capacity_range = {1e9, 3e9};
    g.mem_capacity_range = {2e9, 10e9};
    const Scenario s = generate_scenario(g);
    const DeploymentScheme d = random_servable_scheme(s, rng, 6);
    const RepairResult once = repair(s, d);
    const LatencyReport rep = objective(s, once.scheme);
    REQUIRE(rep.capacity_ok());
    for (const BlockId b : d.blocks()) CHECK(total_instances(once.scheme, b) <= total_instances(d, b));
    CHECK(repair(s, once.scheme).scheme == once.scheme);

    // Anything left unservable must not fit on any server.
    const auto used = resource_usage(s, once.scheme);
    for (const BlockId b : once.log.unservable) {
      const ResourceUnits dem = demand_of(s.microservice(b.app, b.position));
      for (std::size_t i = 0; i < s.server_count(); ++i) {
        const ResourceUnits cap = capacity_of(s.servers[i]);
        CHECK((cap.cpu - used[i].cpu < dem.cpu || cap.mem - used[i].mem < dem.mem));
      }
    }
  }
}
