// edgeplace command-line front end.
//
//   edgeplace generate [--config gen.json] [--seed N] [-o scenario.json]
//   edgeplace evaluate SCENARIO SCHEME
//   edgeplace deploy SCENARIO [--algo camd] [--seed N] [-o scheme.json] [--trace t.csv]
//   edgeplace compare SCENARIO [--algos camd,random,...] [--seed N]
//   edgeplace sweep (--preset fig2 | --config exp.json) [--out DIR]
//
// EDGEPLACE_OUT_DIR, when set, replaces the default "results" directory of
// sweeps.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgeplace/annealing.hpp"
#include "edgeplace/baselines.hpp"
#include "edgeplace/experiment.hpp"
#include "edgeplace/generator.hpp"
#include "edgeplace/latency.hpp"
#include "edgeplace/repair.hpp"
#include "edgeplace/scenario_io.hpp"
#include "edgeplace/sizing.hpp"

namespace ep = edgeplace;

namespace {

struct SaFlags {
  std::optional<double> t_initial_fraction;
  std::optional<double> t_min_ratio;
  std::optional<double> alpha;
  std::optional<int> moves_per_temp;
  std::optional<int> max_sweeps;
  std::optional<double> overload_penalty;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--t-initial", t_initial_fraction, "Initial temperature as a fraction of the block objective");
    cmd->add_option("--t-min-ratio", t_min_ratio, "Final temperature relative to the initial one");
    cmd->add_option("--alpha", alpha, "Cooling factor");
    cmd->add_option("--moves", moves_per_temp, "Proposals per temperature level");
    cmd->add_option("--max-sweeps", max_sweeps, "Upper bound on block-coordinate sweeps");
    cmd->add_option("--overload-penalty", overload_penalty, "Penalty per unit of relative overload");
  }

  void apply(ep::SaParams& p) const {
    if (t_initial_fraction) p.t_initial_fraction = *t_initial_fraction;
    if (t_min_ratio) p.t_min_ratio = *t_min_ratio;
    if (alpha) p.alpha = *alpha;
    if (moves_per_temp) p.moves_per_temp = *moves_per_temp;
    if (max_sweeps) p.max_sweeps = *max_sweeps;
    if (overload_penalty) p.overload_penalty = *overload_penalty;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    ep::write_file(path, text);
  }
}

std::vector<ep::Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<ep::Algorithm> out;
  for (const auto& n : names) out.push_back(ep::algorithm_from_string(n));
  return out;
}

std::string algorithm_names() {
  std::string s;
  for (auto a : ep::all_algorithms()) {
    if (!s.empty()) s += ", ";
    s += ep::to_string(a);
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microservice placement on edge clusters"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random scenario");
  std::string gen_config, gen_out;
  std::optional<std::uint64_t> gen_seed;
  std::optional<int> gen_servers, gen_apps;
  gen->add_option("--config", gen_config, "Generator config (JSON)")->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--servers", gen_servers, "Number of servers");
  gen->add_option("--apps", gen_apps, "Number of applications");
  gen->add_option("-o,--output", gen_out, "Scenario file (stdout if omitted)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Evaluate a scheme on a scenario");
  std::string eval_scenario, eval_scheme;
  eval->add_option("scenario", eval_scenario, "Scenario file")->required();
  eval->add_option("scheme", eval_scheme, "Scheme file")->required();

  // deploy
  auto* dep = app.add_subcommand("deploy", "Compute a deployment scheme");
  std::string dep_scenario, dep_algo = "camd", dep_out, dep_trace, dep_repair;
  std::uint64_t dep_seed = 0;
  SaFlags dep_sa;
  dep->add_option("scenario", dep_scenario, "Scenario file")->required();
  dep->add_option("--algo", dep_algo, "One of: " + algorithm_names());
  dep->add_option("--seed", dep_seed, "Random seed");
  dep->add_option("-o,--output", dep_out, "Scheme file (stdout if omitted)");
  dep->add_option("--trace", dep_trace, "Per-sweep trace CSV (camd only)");
  dep->add_option("--repair-log", dep_repair, "Repair actions CSV (camd only)");
  dep_sa.add_to(dep);

  // compare
  auto* cmp = app.add_subcommand("compare", "Run several deployers on one scenario");
  std::string cmp_scenario, cmp_out;
  std::vector<std::string> cmp_algos;
  std::uint64_t cmp_seed = 0;
  SaFlags cmp_sa;
  cmp->add_option("scenario", cmp_scenario, "Scenario file")->required();
  cmp->add_option("--algos", cmp_algos, "Deployers to run (default: all)")->delimiter(',');
  cmp->add_option("--seed", cmp_seed, "Random seed");
  cmp->add_option("-o,--output", cmp_out, "CSV file (stdout if omitted)");
  cmp_sa.add_to(cmp);

  // sweep
  auto* swp = app.add_subcommand("sweep", "Run an experiment sweep");
  std::string swp_preset, swp_config, swp_out;
  std::optional<int> swp_reps, swp_threads;
  SaFlags swp_sa;
  auto* preset_opt = swp->add_option("--preset", swp_preset, "fig2, fig3 or fig4");
  auto* config_opt = swp->add_option("--config", swp_config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  preset_opt->excludes(config_opt);
  swp->add_option("--out", swp_out, "Output directory");
  swp->add_option("--replications", swp_reps, "Override the number of replications");
  swp->add_option("--threads", swp_threads, "Worker threads (0 = all cores)");
  swp_sa.add_to(swp);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      ep::GeneratorConfig cfg;
      if (!gen_config.empty()) {
        cfg = ep::generator_config_from_json(ep::parse_json_text(ep::read_file(gen_config), gen_config));
      }
      if (gen_seed) cfg.seed = *gen_seed;
      if (gen_servers) cfg.server_count = *gen_servers;
      if (gen_apps) cfg.app_count = *gen_apps;
      emit(gen_out, ep::render_scenario(ep::generate_scenario(cfg)));
      return 0;
    }

    if (*eval) {
      const ep::Scenario s = ep::load_scenario(eval_scenario);
      const ep::DeploymentScheme d = ep::load_scheme(eval_scheme, s);
      const ep::LatencyReport r = ep::objective(s, d);
      std::cout << ep::report_csv_header() << '\n' << ep::report_csv_row(r) << '\n';
      for (std::size_t i = 0; i < s.server_count(); ++i) {
        if (r.cpu_violation[i] > 0) {
          std::cerr << "server " << i << ": CPU over capacity by " << ep::format_float(r.cpu_violation[i]) << " Hz\n";
        }
        if (r.mem_violation[i] > 0) {
          std::cerr << "server " << i << ": memory over capacity by " << ep::format_float(r.mem_violation[i]) << " B\n";
        }
      }
      for (std::size_t k = 0; k < r.min_instance_ok.size(); ++k) {
        for (std::size_t v = 0; v < r.min_instance_ok[k].size(); ++v) {
          if (!r.min_instance_ok[k][v]) std::cerr << "app " << k << " position " << v << ": no instance\n";
        }
      }
      return 0;
    }

    if (*dep) {
      const ep::Scenario s = ep::load_scenario(dep_scenario);
      const ep::Algorithm a = ep::algorithm_from_string(dep_algo);
      ep::SaParams p;
      p.seed = dep_seed;
      dep_sa.apply(p);
      if (a == ep::Algorithm::camd) {
        const ep::CamdResult r = ep::camd_deploy(s, p);
        emit(dep_out, ep::render_scheme(r.scheme));
        if (!dep_trace.empty()) ep::write_file(dep_trace, ep::sweep_trace_csv(r.trace));
        if (!dep_repair.empty()) ep::write_file(dep_repair, ep::repair_log_csv(r.repair_log));
      } else {
        emit(dep_out, ep::render_scheme(ep::run_algorithm(a, s, p)));
      }
      return 0;
    }

    if (*cmp) {
      const ep::Scenario s = ep::load_scenario(cmp_scenario);
      const auto algos = cmp_algos.empty() ? ep::all_algorithms() : parse_algorithms(cmp_algos);
      ep::SaParams p;
      p.seed = cmp_seed;
      cmp_sa.apply(p);
      std::string out = "algorithm," + ep::report_csv_header() + ",runtime_s\n";
      for (const auto a : algos) {
        const auto start = std::chrono::steady_clock::now();
        const ep::DeploymentScheme d = ep::run_algorithm(a, s, p);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out += std::string(ep::to_string(a)) + ',' + ep::report_csv_row(ep::objective(s, d)) + ',' +
               ep::format_float(secs) + '\n';
      }
      emit(cmp_out, out);
      return 0;
    }

    if (*swp) {
      ep::ExperimentConfig e;
      if (!swp_config.empty()) {
        e = ep::experiment_config_from_json(ep::parse_json_text(ep::read_file(swp_config), swp_config));
      } else if (!swp_preset.empty()) {
        e = ep::experiment_preset(swp_preset);
      } else {
        std::cerr << "sweep: one of --preset or --config is required\n";
        return 2;
      }
      if (!swp_out.empty()) {
        e.output_dir = swp_out;
      } else if (const char* env = std::getenv("EDGEPLACE_OUT_DIR"); env && *env) {
        e.output_dir = std::filesystem::path(env) / e.name;
      }
      if (swp_reps) e.replications = *swp_reps;
      if (swp_threads) e.threads = *swp_threads;
      swp_sa.apply(e.sa);
      const ep::ExperimentResults r = ep::run_experiment(e);
      for (const auto& path : ep::write_experiment(e, r)) std::cout << path.string() << '\n';
      return 0;
    }
  } catch (const ep::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& v : e.violations()) std::cerr << "  " << v.field << ": " << v.message << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
