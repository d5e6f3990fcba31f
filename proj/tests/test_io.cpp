#include "doctest.h"

#include <filesystem>
#include <string>

#include "edgeplace/scenario_io.hpp"
#include "test_support.hpp"

using namespace edgeplace;
using namespace edgeplace::testing;

TEST_CASE("parse_quantity understands units and prefixes") {
  CHECK(parse_quantity("12.5 GHz", Dimension::frequency) == 12.5e9);
  CHECK(parse_quantity("300MHz", Dimension::frequency) == 300e6);
  CHECK(parse_quantity("64GB", Dimension::bytes) == 64e9);
  CHECK(parse_quantity("10 KB", Dimension::bytes) == 10e3);
  CHECK(parse_quantity("1 Gbps", Dimension::bandwidth) == 1e9);
  CHECK(parse_quantity("7.2 M cycles", Dimension::cycles) == 7.2e6);
  CHECK(parse_quantity("42", Dimension::bytes) == 42.0);
  CHECK_THROWS_AS(parse_quantity("12 GB", Dimension::frequency), ParseError);
  CHECK_THROWS_AS(parse_quantity("fast", Dimension::frequency), ParseError);
  CHECK_THROWS_AS(parse_quantity("", Dimension::bytes), ParseError);
}

TEST_CASE("scenario files round-trip exactly") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    GeneratorConfig g;
    g.seed = seed;
    g.server_count = 1 + static_cast<int>(seed % 5);
    const Scenario s = generate_scenario(g);
    const std::string text = render_scenario(s);
    const Scenario back = parse_scenario(text);
    CHECK(back == s);
    CHECK(render_scenario(back) == text);
  }
}

TEST_CASE("scenario parse errors name the culprit") {
  Scenario s = cluster(2);
  add_app(s, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1, 1});
  nlohmann::json j = scenario_to_json(s);

  SUBCASE("syntax error reports a line") {
    try {
      parse_scenario("{\n  \"format\": \"edgeplace-scenario\",\n  oops\n}");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("bad quantity reports the field") {
    j["servers"][1]["cpu_capacity"] = "lots";
    try {
      parse_scenario(j.dump());
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("servers[1].cpu_capacity") != std::string::npos);
    }
  }
  SUBCASE("validation failures become ParseError") {
    j["applications"][0]["priority"] = 0.5;
    try {
      parse_scenario(j.dump());
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("priority") != std::string::npos);
    }
  }
  SUBCASE("branching edge lists are rejected") {
    j["applications"][0]["chain"].push_back(j["applications"][0]["chain"][0]);
    j["applications"][0]["chain"][0]["out_edge_data"] = "1 KB";
    j["applications"][0]["edges"] = nlohmann::json::array({{0, 1}, {0, 1}});
    CHECK_THROWS_AS(parse_scenario(j.dump()), ParseError);
  }
}

TEST_CASE("scheme files round-trip") {
  GeneratorConfig g;
  g.seed = 5;
  const Scenario s = generate_scenario(g);
  std::mt19937_64 rng(2);
  const DeploymentScheme d = random_servable_scheme(s, rng);
  CHECK(parse_scheme(render_scheme(d), s) == d);

  nlohmann::json j = scheme_to_json(d);
  j["counts"][0][0][0] = -1;
  CHECK_THROWS_AS(parse_scheme(j.dump(), s), ParseError);
  Scenario other = cluster(1);
  add_app(other, 1.0, 10 * KB, {ms(0.5 * GHz, 5e6)}, {1});
  CHECK_THROWS_AS(parse_scheme(render_scheme(d), other), ParseError);
}

TEST_CASE("files on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "edgeplace_io_test";
  std::filesystem::remove_all(dir);
  GeneratorConfig g;
  const Scenario s = generate_scenario(g);
  save_scenario(dir / "nested" / "s.json", s);
  CHECK(load_scenario(dir / "nested" / "s.json") == s);
  CHECK_THROWS_AS(load_scenario(dir / "missing.json"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("report CSV") {
  CHECK(format_float(0.1) == "0.1");
  CHECK(format_float(1.0 / 3.0) == "0.333333333");
  Scenario s = cluster(1, 1 * GHz);
  add_app(s, 0.5, 10 * KB, {ms(0.5 * GHz, 5e6)}, {100});
  add_app(s, 0.5, 10 * KB, {ms(0.5 * GHz, 5e6)}, {100});
  DeploymentScheme d(s);
  d.set_counts({0, 0}, {1});
  const LatencyReport r = objective(s, d);
  CHECK(report_csv_header() ==
        "objective,per_app_latency,servable,capacity_ok,cpu_violation_total,mem_violation_total");
  const std::string row = report_csv_row(r);
  CHECK(row.find(";") != std::string::npos);
  // app 1 has no instance: unservable, capacity fine.
  CHECK(row.rfind("inf,", 0) == 0);
  CHECK(row.find(",0,1,") != std::string::npos);
}
