#include "doctest.h"

#include "edgeplace/experiment.hpp"

using namespace edgeplace;

TEST_CASE("presets") {
  const ExperimentConfig f2 = experiment_preset("fig2");
  CHECK(f2.variable == SweepVariable::requests);
  CHECK(f2.values == std::vector<double>{2000, 2250, 2500, 2750, 3000});
  CHECK(f2.generator.server_count == 3);
  CHECK(f2.generator.app_count == 3);
  const ExperimentConfig f3 = experiment_preset("fig3");
  CHECK(f3.variable == SweepVariable::servers);
  CHECK(f3.values == std::vector<double>{3, 5, 7});
  const ExperimentConfig f4 = experiment_preset("fig4");
  CHECK(f4.variable == SweepVariable::chain_length);
  CHECK(f4.values == std::vector<double>{3, 5, 7});
  CHECK_THROWS(experiment_preset("fig9"));
}

TEST_CASE("cell generator applies the sweep value and the seed") {
  ExperimentConfig e = experiment_preset("fig3");
  const GeneratorConfig g = cell_generator(e, 5, 2);
  CHECK(g.server_count == 5);
  CHECK(g.seed == e.base_seed + 2);
  e = experiment_preset("fig4");
  const GeneratorConfig h = cell_generator(e, 7, 0);
  CHECK(h.chain_length_range == IntRange{7, 7});
  e = experiment_preset("fig2");
  const GeneratorConfig r = cell_generator(e, 2250, 0);
  CHECK(r.request_total_range == Range{2250, 2250});
}

TEST_CASE("config JSON overrides a preset") {
  const auto j = nlohmann::json::parse(R"({
    "preset": "fig2",
    "replications": 2,
    "sweep": {"variable": "requests", "values": [2000, 3000]},
    "algorithms": ["camd", "random"],
    "sa": {"max_sweeps": 1}
  })");
  const ExperimentConfig e = experiment_config_from_json(j);
  CHECK(e.replications == 2);
  CHECK(e.values == std::vector<double>{2000, 3000});
  CHECK(e.algorithms == std::vector<Algorithm>{Algorithm::camd, Algorithm::random});
  CHECK(e.sa.max_sweeps == 1);
  CHECK(e.generator.server_count == 3);
  const ExperimentConfig back = experiment_config_from_json(experiment_config_to_json(e));
  CHECK(back.values == e.values);
  CHECK(back.algorithms == e.algorithms);
  CHECK_THROWS(experiment_config_from_json(nlohmann::json::parse(R"({"algorithms": ["nope"]})")));
}

TEST_CASE("a small sweep produces every row and a summary") {
  ExperimentConfig e = experiment_preset("fig2");
  e.values = {2000, 2500};
  e.replications = 2;
  e.sa.max_sweeps = 1;
  e.sa.moves_per_temp = 10;
  e.threads = 2;
  const ExperimentResults r = run_experiment(e);
  CHECK(r.rows.size() == 2 * 2 * all_algorithms().size());
  CHECK(r.summary.size() == 2 * all_algorithms().size());
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& a = r.rows[i - 1];
    const auto& b = r.rows[i];
    CHECK(std::tie(a.sweep_value, a.replication) <= std::tie(b.sweep_value, b.replication));
  }
  const std::string csv = results_csv(e, r);
  CHECK(csv.rfind("sweep_variable,sweep_value,replication,seed,algorithm,objective", 0) == 0);
  // Same config, same numbers (runtime aside).
  const ExperimentResults again = run_experiment(e);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].report.objective == again.rows[i].report.objective);
  }
  const std::string plot = plot_csv(e, r);
  CHECK(std::count(plot.begin(), plot.end(), '\n') == 3);
}
