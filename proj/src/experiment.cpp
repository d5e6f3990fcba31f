#include "edgeplace/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "edgeplace/baselines.hpp"
#include "edgeplace/scenario_io.hpp"

namespace edgeplace {

using nlohmann::json;

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::camd: return "camd";
    case Algorithm::greedy_spread: return "greedy_spread";
    case Algorithm::ceil_sized: return "ceil_sized";
    case Algorithm::random: return "random";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (Algorithm a : all_algorithms()) {
    if (name == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm \"" + name +
                              "\" (expected camd, greedy_spread, ceil_sized or random)");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all{Algorithm::camd, Algorithm::greedy_spread,
                                          Algorithm::ceil_sized, Algorithm::random};
  return all;
}

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::requests: return "requests";
    case SweepVariable::servers: return "servers";
    case SweepVariable::chain_length: return "chain_length";
  }
  return "?";
}

SweepVariable sweep_variable_from_string(const std::string& name) {
  if (name == "requests") return SweepVariable::requests;
  if (name == "servers") return SweepVariable::servers;
  if (name == "chain_length") return SweepVariable::chain_length;
  throw std::invalid_argument("unknown sweep variable \"" + name +
                              "\" (expected requests, servers or chain_length)");
}

DeploymentScheme run_algorithm(Algorithm a, const Scenario& s, const SaParams& params) {
  switch (a) {
    case Algorithm::camd: return camd_deploy(s, params).scheme;
    case Algorithm::greedy_spread: return greedy_spread_deploy(s, params.seed);
    case Algorithm::ceil_sized: return ceil_sized_deploy(s, params.seed);
    case Algorithm::random: return random_deploy(s, params.seed);
  }
  throw std::logic_error("unhandled algorithm");
}

std::vector<std::string> ExperimentConfig::problems() const {
  std::vector<std::string> out;
  if (values.empty()) out.emplace_back("sweep has no values");
  if (replications < 1) out.emplace_back("replications must be >= 1");
  if (algorithms.empty()) out.emplace_back("no algorithms selected");
  for (double v : values) {
    if (variable != SweepVariable::requests && (v < 1 || v != std::floor(v))) {
      out.emplace_back(std::string(to_string(variable)) + " values must be positive integers");
      break;
    }
    if (variable == SweepVariable::requests && !(v >= 1)) {
      out.emplace_back("request values must be >= 1");
      break;
    }
  }
  for (const auto& p : sa.problems()) out.push_back("sa: " + p);
  return out;
}

ExperimentConfig experiment_preset(const std::string& name) {
  ExperimentConfig e;
  e.name = name;
  e.generator.server_count = 3;
  e.generator.app_count = 3;
  e.generator.priority_mode = PriorityMode::explicit_list;
  e.generator.priorities = {0.5, 0.3, 0.2};
  if (name == "fig2") {
    e.variable = SweepVariable::requests;
    e.values = {2000, 2250, 2500, 2750, 3000};
    e.generator.chain_length_range = {2, 4};
  } else if (name == "fig3") {
    e.variable = SweepVariable::servers;
    e.values = {3, 5, 7};
    e.generator.request_total_range = {2000, 2000};
    e.generator.chain_length_range = {5, 7};
  } else if (name == "fig4") {
    e.variable = SweepVariable::chain_length;
    e.values = {3, 5, 7};
    e.generator.request_total_range = {2000, 2000};
  } else {
    throw std::invalid_argument("unknown preset \"" + name + "\" (expected fig2, fig3 or fig4)");
  }
  e.output_dir = std::filesystem::path("results") / name;
  return e;
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4"}; }

namespace {

SaParams sa_from_json(const json& j, SaParams p) {
  if (!j.is_object()) throw ParseError("sa: expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string f = "sa." + key;
    auto num = [&]() {
      if (!value.is_number()) throw ParseError(f + ": expected a number");
      return value.get<double>();
    };
    auto integer = [&]() {
      if (!value.is_number_integer()) throw ParseError(f + ": expected an integer");
      return value.get<long long>();
    };
    if (key == "t_initial_fraction") {
      p.t_initial_fraction = num();
    } else if (key == "t_min_ratio") {
      p.t_min_ratio = num();
    } else if (key == "alpha") {
      p.alpha = num();
    } else if (key == "moves_per_temp") {
      p.moves_per_temp = static_cast<int>(integer());
    } else if (key == "max_sweeps") {
      p.max_sweeps = static_cast<int>(integer());
    } else if (key == "seed") {
      p.seed = static_cast<std::uint64_t>(integer());
    } else if (key == "overload_penalty") {
      p.overload_penalty = num();
    } else {
      throw ParseError(f + ": unknown field");
    }
  }
  return p;
}

json sa_to_json(const SaParams& p) {
  return {{"t_initial_fraction", p.t_initial_fraction},
          {"t_min_ratio", p.t_min_ratio},
          {"alpha", p.alpha},
          {"moves_per_temp", p.moves_per_temp},
          {"max_sweeps", p.max_sweeps},
          {"seed", p.seed},
          {"overload_penalty", p.overload_penalty}};
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("experiment: expected an object");
  ExperimentConfig e;
  if (auto it = j.find("preset"); it != j.end()) {
    if (!it->is_string()) throw ParseError("experiment.preset: expected a string");
    e = experiment_preset(it->get<std::string>());
  }
  for (const auto& [key, value] : j.items()) {
    const std::string f = "experiment." + key;
    if (key == "preset") {
      continue;
    } else if (key == "name") {
      if (!value.is_string()) throw ParseError(f + ": expected a string");
      e.name = value.get<std::string>();
    } else if (key == "sweep") {
      if (!value.is_object()) throw ParseError(f + ": expected an object");
      if (value.contains("variable")) {
        if (!value["variable"].is_string()) throw ParseError(f + ".variable: expected a string");
        try {
          e.variable = sweep_variable_from_string(value["variable"].get<std::string>());
        } catch (const std::invalid_argument& ex) {
          throw ParseError(f + ".variable: " + ex.what());
        }
      }
      if (value.contains("values")) {
        if (!value["values"].is_array()) throw ParseError(f + ".values: expected an array");
        e.values.clear();
        for (const auto& x : value["values"]) {
          if (!x.is_number()) throw ParseError(f + ".values: expected numbers");
          e.values.push_back(x.get<double>());
        }
      }
    } else if (key == "replications") {
      if (!value.is_number_integer()) throw ParseError(f + ": expected an integer");
      e.replications = value.get<int>();
    } else if (key == "base_seed") {
      if (!value.is_number_unsigned()) throw ParseError(f + ": expected a non-negative integer");
      e.base_seed = value.get<std::uint64_t>();
    } else if (key == "generator") {
      e.generator = generator_config_from_json(value, e.generator);
    } else if (key == "sa") {
      e.sa = sa_from_json(value, e.sa);
    } else if (key == "algorithms") {
      if (!value.is_array()) throw ParseError(f + ": expected an array");
      e.algorithms.clear();
      for (const auto& x : value) {
        if (!x.is_string()) throw ParseError(f + ": expected algorithm names");
        try {
          e.algorithms.push_back(algorithm_from_string(x.get<std::string>()));
        } catch (const std::invalid_argument& ex) {
          throw ParseError(f + ": " + ex.what());
        }
      }
    } else if (key == "output_dir") {
      if (!value.is_string()) throw ParseError(f + ": expected a string");
      e.output_dir = value.get<std::string>();
    } else if (key == "threads") {
      if (!value.is_number_integer()) throw ParseError(f + ": expected an integer");
      e.threads = value.get<int>();
    } else {
      throw ParseError(f + ": unknown field");
    }
  }
  return e;
}

json experiment_config_to_json(const ExperimentConfig& e) {
  json algos = json::array();
  for (Algorithm a : e.algorithms) algos.push_back(to_string(a));
  return {{"name", e.name},
          {"sweep", {{"variable", to_string(e.variable)}, {"values", e.values}}},
          {"replications", e.replications},
          {"base_seed", e.base_seed},
          {"generator", generator_config_to_json(e.generator)},
          {"sa", sa_to_json(e.sa)},
          {"algorithms", std::move(algos)},
          {"output_dir", e.output_dir.string()},
          {"threads", e.threads}};
}

GeneratorConfig cell_generator(const ExperimentConfig& e, double value, int replication) {
  GeneratorConfig g = e.generator;
  g.seed = e.base_seed + static_cast<std::uint64_t>(replication);
  switch (e.variable) {
    case SweepVariable::requests: g.request_total_range = {value, value}; break;
    case SweepVariable::servers: g.server_count = static_cast<int>(value); break;
    case SweepVariable::chain_length:
      g.chain_length_range = {static_cast<int>(value), static_cast<int>(value)};
      break;
  }
  return g;
}

namespace {

std::size_t algorithm_rank(Algorithm a) {
  const auto& all = all_algorithms();
  return static_cast<std::size_t>(std::find(all.begin(), all.end(), a) - all.begin());
}

std::vector<ResultRow> run_cell(const ExperimentConfig& e, double value, int replication) {
  const GeneratorConfig g = cell_generator(e, value, replication);
  const Scenario s = generate_scenario(g);
  SaParams sa = e.sa;
  sa.seed = g.seed;
  std::vector<ResultRow> rows;
  for (Algorithm a : e.algorithms) {
    const auto start = std::chrono::steady_clock::now();
    const DeploymentScheme d = run_algorithm(a, s, sa);
    const auto stop = std::chrono::steady_clock::now();
    ResultRow row;
    row.sweep_value = value;
    row.replication = replication;
    row.seed = g.seed;
    row.algorithm = a;
    row.report = objective(s, d);
    for (const BlockId b : d.blocks()) row.total_instances += total_instances(d, b);
    row.runtime_s = std::chrono::duration<double>(stop - start).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ExperimentResults run_experiment(const ExperimentConfig& e) {
  if (auto bad = e.problems(); !bad.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw std::invalid_argument(msg);
  }

  struct Cell {
    double value;
    int replication;
  };
  std::vector<Cell> cells;
  for (double v : e.values) {
    for (int r = 0; r < e.replications; ++r) cells.push_back({v, r});
  }

  ExperimentResults out;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        auto rows = run_cell(e, cells[i].value, cells[i].replication);
        std::lock_guard lock(mu);
        for (auto& r : rows) out.rows.push_back(std::move(r));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned n_threads = e.threads > 0 ? static_cast<unsigned>(e.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(cells.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::sort(out.rows.begin(), out.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
    if (a.replication != b.replication) return a.replication < b.replication;
    return algorithm_rank(a.algorithm) < algorithm_rank(b.algorithm);
  });

  for (double v : e.values) {
    std::vector<SummaryRow> group;
    for (Algorithm a : e.algorithms) {
      SummaryRow sr;
      sr.sweep_value = v;
      sr.algorithm = a;
      for (const auto& row : out.rows) {
        if (row.sweep_value != v || row.algorithm != a) continue;
        ++sr.runs;
        sr.mean_objective += row.report.servable() ? row.report.objective
                                                   : std::numeric_limits<double>::infinity();
        sr.mean_runtime_s += row.runtime_s;
        if (row.report.feasible()) ++sr.feasible_runs;
      }
      if (sr.runs > 0) {
        sr.mean_objective /= sr.runs;
        sr.mean_runtime_s /= sr.runs;
      }
      group.push_back(sr);
    }
    for (auto& sr : group) {
      sr.reduction_vs.assign(all_algorithms().size(), std::nullopt);
      for (const auto& base : group) {
        if (std::isfinite(base.mean_objective) && base.mean_objective > 0.0) {
          sr.reduction_vs[algorithm_rank(base.algorithm)] =
              (base.mean_objective - sr.mean_objective) / base.mean_objective;
        }
      }
      out.summary.push_back(sr);
    }
  }
  return out;
}

namespace {

std::string value_text(double v) { return format_float(v); }

std::string objective_text(const LatencyReport& r) {
  return r.servable() ? format_float(r.objective) : std::string("inf");
}

}  // namespace

std::string results_csv(const ExperimentConfig& e, const ExperimentResults& r) {
  std::ostringstream os;
  os << "sweep_variable,sweep_value,replication,seed,algorithm,objective,per_app_latency,"
        "servable,capacity_ok,total_instances,runtime_s\n";
  for (const auto& row : r.rows) {
    std::string per_app;
    for (std::size_t k = 0; k < row.report.per_app_latency.size(); ++k) {
      if (k) per_app += ';';
      if (row.report.per_app_latency[k]) per_app += format_float(*row.report.per_app_latency[k]);
    }
    os << to_string(e.variable) << ',' << value_text(row.sweep_value) << ',' << row.replication
       << ',' << row.seed << ',' << to_string(row.algorithm) << ',' << objective_text(row.report)
       << ',' << per_app << ',' << (row.report.servable() ? 1 : 0) << ','
       << (row.report.capacity_ok() ? 1 : 0) << ',' << row.total_instances << ','
       << format_float(row.runtime_s) << '\n';
  }
  return os.str();
}

std::string summary_csv(const ExperimentConfig& e, const ExperimentResults& r) {
  std::ostringstream os;
  os << "sweep_variable,sweep_value,algorithm,runs,feasible_runs,mean_objective,mean_runtime_s";
  for (Algorithm a : all_algorithms()) os << ",reduction_vs_" << to_string(a);
  os << '\n';
  for (const auto& sr : r.summary) {
    os << to_string(e.variable) << ',' << value_text(sr.sweep_value) << ','
       << to_string(sr.algorithm) << ',' << sr.runs << ',' << sr.feasible_runs << ','
       << format_float(sr.mean_objective) << ',' << format_float(sr.mean_runtime_s);
    for (const auto& red : sr.reduction_vs) {
      os << ',';
      if (red) os << format_float(*red);
    }
    os << '\n';
  }
  return os.str();
}

std::string plot_csv(const ExperimentConfig& e, const ExperimentResults& r) {
  std::ostringstream os;
  os << to_string(e.variable);
  for (Algorithm a : e.algorithms) os << ',' << to_string(a);
  os << '\n';
  for (double v : e.values) {
    os << value_text(v);
    for (Algorithm a : e.algorithms) {
      os << ',';
      for (const auto& sr : r.summary) {
        if (sr.sweep_value == v && sr.algorithm == a) os << format_float(sr.mean_objective);
      }
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::filesystem::path> write_experiment(const ExperimentConfig& e,
                                                    const ExperimentResults& r) {
  const std::vector<std::pair<std::filesystem::path, std::string>> files{
      {e.output_dir / "results.csv", results_csv(e, r)},
      {e.output_dir / "summary.csv", summary_csv(e, r)},
      {e.output_dir / ("plot_" + e.name + ".csv"), plot_csv(e, r)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [path, text] : files) {
    write_file(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace edgeplace
