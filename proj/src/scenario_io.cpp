#include "edgeplace/scenario_io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace edgeplace {

using nlohmann::json;

namespace {

struct UnitScale {
  std::string_view name;
  double factor;
};

// Lower-cased unit spellings with their factor to canonical units.
constexpr std::array kFrequencyUnits{UnitScale{"hz", 1.0}, UnitScale{"khz", 1e3},
                                     UnitScale{"mhz", 1e6}, UnitScale{"ghz", 1e9}};
constexpr std::array kByteUnits{UnitScale{"b", 1.0},   UnitScale{"bytes", 1.0},
                                UnitScale{"kb", 1e3},  UnitScale{"mb", 1e6},
                                UnitScale{"gb", 1e9},  UnitScale{"tb", 1e12}};
constexpr std::array kBandwidthUnits{UnitScale{"bps", 1.0}, UnitScale{"kbps", 1e3},
                                     UnitScale{"mbps", 1e6}, UnitScale{"gbps", 1e9}};
constexpr std::array kCycleUnits{UnitScale{"cycles", 1.0}, UnitScale{"kcycles", 1e3},
                                 UnitScale{"mcycles", 1e6}, UnitScale{"gcycles", 1e9},
                                 UnitScale{"k cycles", 1e3}, UnitScale{"m cycles", 1e6},
                                 UnitScale{"g cycles", 1e9}};

const char* canonical_unit(Dimension dim) {
  switch (dim) {
    case Dimension::frequency: return "Hz";
    case Dimension::bytes: return "B";
    case Dimension::bandwidth: return "bps";
    case Dimension::cycles: return "cycles";
  }
  return "";
}

template <std::size_t N>
std::optional<double> lookup(const std::array<UnitScale, N>& table, std::string_view unit) {
  for (const auto& u : table) {
    if (u.name == unit) return u.factor;
  }
  return std::nullopt;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string format_exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "." + key + ": missing field");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ParseError(field + ": expected a number");
  return j.get<double>();
}

std::size_t index_value(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ParseError(field + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

const json& array(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field + ": expected an array");
  return j;
}

void check_format(const json& j, const char* expected, const std::string& origin) {
  if (!j.is_object()) throw ParseError(origin + ": top level must be a JSON object");
  auto it = j.find("format");
  if (it != j.end() && (!it->is_string() || it->get<std::string>() != expected)) {
    throw ParseError(origin + ".format: expected \"" + expected + "\"");
  }
}

}  // namespace

double parse_quantity(std::string_view text, Dimension dim) {
  const std::string t = trim(text);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr == begin) {
    throw ParseError("cannot read a number from \"" + std::string(text) + "\"");
  }
  const std::string unit = to_lower(trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr))));
  if (unit.empty()) return value;

  std::optional<double> factor;
  switch (dim) {
    case Dimension::frequency: factor = lookup(kFrequencyUnits, unit); break;
    case Dimension::bytes: factor = lookup(kByteUnits, unit); break;
    case Dimension::bandwidth: factor = lookup(kBandwidthUnits, unit); break;
    case Dimension::cycles: factor = lookup(kCycleUnits, unit); break;
  }
  if (!factor) {
    throw ParseError("unit \"" + unit + "\" is not a " + canonical_unit(dim) + " unit");
  }
  return value * *factor;
}

double quantity_from_json(const json& j, Dimension dim, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_quantity(j.get<std::string>(), dim);
    } catch (const ParseError& e) {
      throw ParseError(field + ": " + e.what());
    }
  }
  throw ParseError(field + ": expected a number or a quantity string");
}

json quantity_to_json(double canonical, Dimension dim) {
  return format_exact(canonical) + " " + canonical_unit(dim);
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["format"] = "edgeplace-scenario";
  j["version"] = 1;

  json servers = json::array();
  for (const auto& srv : s.servers) {
    servers.push_back({{"id", srv.id},
                       {"cpu_capacity", quantity_to_json(srv.cpu_capacity, Dimension::frequency)},
                       {"mem_capacity", quantity_to_json(srv.mem_capacity, Dimension::bytes)}});
  }
  j["servers"] = std::move(servers);

  json bw = json::array();
  for (std::size_t i = 0; i < s.bandwidth.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < s.bandwidth.size(); ++k) {
      if (i == k) {
        row.push_back(nullptr);
      } else {
        row.push_back(quantity_to_json(s.bandwidth.at(i, k), Dimension::bandwidth));
      }
    }
    bw.push_back(std::move(row));
  }
  j["bandwidth"] = std::move(bw);

  json apps = json::array();
  for (const auto& app : s.applications) {
    json chain = json::array();
    for (const auto& ms : app.chain) {
      json m = {{"cpu_demand", quantity_to_json(ms.cpu_demand, Dimension::frequency)},
                {"mem_demand", quantity_to_json(ms.mem_demand, Dimension::bytes)},
                {"cycles_per_request", quantity_to_json(ms.cycles_per_request, Dimension::cycles)}};
      if (ms.out_edge_data) m["out_edge_data"] = quantity_to_json(*ms.out_edge_data, Dimension::bytes);
      chain.push_back(std::move(m));
    }
    apps.push_back({{"id", app.id},
                    {"priority", app.priority},
                    {"request_data_size", quantity_to_json(app.request_data_size, Dimension::bytes)},
                    {"chain", std::move(chain)}});
  }
  j["applications"] = std::move(apps);

  json req = json::array();
  for (std::size_t k = 0; k < s.requests.apps(); ++k) {
    json row = json::array();
    for (std::size_t i = 0; i < s.requests.servers(); ++i) row.push_back(s.requests.at(k, i));
    req.push_back(std::move(row));
  }
  j["requests"] = std::move(req);
  return j;
}

Scenario scenario_from_json(const json& j) {
  check_format(j, "edgeplace-scenario", "scenario");
  Scenario s;

  const json& servers = array(member(j, "servers", "scenario"), "servers");
  for (std::size_t i = 0; i < servers.size(); ++i) {
    const std::string f = "servers[" + std::to_string(i) + "]";
    ServerSpec srv;
    srv.id = servers[i].contains("id") ? index_value(servers[i]["id"], f + ".id") : i;
    srv.cpu_capacity =
        quantity_from_json(member(servers[i], "cpu_capacity", f), Dimension::frequency, f + ".cpu_capacity");
    srv.mem_capacity =
        quantity_from_json(member(servers[i], "mem_capacity", f), Dimension::bytes, f + ".mem_capacity");
    s.servers.push_back(srv);
  }

  const json& bw = array(member(j, "bandwidth", "scenario"), "bandwidth");
  const std::size_t n = servers.size();
  if (bw.size() != n) throw ParseError("bandwidth: expected " + std::to_string(n) + " rows");
  s.bandwidth = BandwidthMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string f = "bandwidth[" + std::to_string(i) + "]";
    const json& row = array(bw[i], f);
    if (row.size() != n) throw ParseError(f + ": expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k && row[k].is_null()) continue;
      s.bandwidth.set(i, k, quantity_from_json(row[k], Dimension::bandwidth,
                                               f + "[" + std::to_string(k) + "]"));
    }
  }

  const json& apps = array(member(j, "applications", "scenario"), "applications");
  for (std::size_t a = 0; a < apps.size(); ++a) {
    const std::string f = "applications[" + std::to_string(a) + "]";
    ApplicationSpec app;
    app.id = apps[a].contains("id") ? index_value(apps[a]["id"], f + ".id") : a;
    app.priority = number(member(apps[a], "priority", f), f + ".priority");
    app.request_data_size = quantity_from_json(member(apps[a], "request_data_size", f),
                                               Dimension::bytes, f + ".request_data_size");
    const json& chain = array(member(apps[a], "chain", f), f + ".chain");
    for (std::size_t v = 0; v < chain.size(); ++v) {
      const std::string g = f + ".chain[" + std::to_string(v) + "]";
      MicroserviceSpec ms;
      ms.cpu_demand = quantity_from_json(member(chain[v], "cpu_demand", g), Dimension::frequency,
                                         g + ".cpu_demand");
      ms.mem_demand =
          quantity_from_json(member(chain[v], "mem_demand", g), Dimension::bytes, g + ".mem_demand");
      ms.cycles_per_request = quantity_from_json(member(chain[v], "cycles_per_request", g),
                                                 Dimension::cycles, g + ".cycles_per_request");
      if (chain[v].contains("out_edge_data") && !chain[v]["out_edge_data"].is_null()) {
        ms.out_edge_data =
            quantity_from_json(chain[v]["out_edge_data"], Dimension::bytes, g + ".out_edge_data");
      }
      app.chain.push_back(ms);
    }
    // Optional explicit edge list; only the consecutive chain is accepted.
    if (apps[a].contains("edges")) {
      const json& edges = array(apps[a]["edges"], f + ".edges");
      if (edges.size() + 1 != chain.size() && !(chain.empty() && edges.empty())) {
        throw ParseError(f + ".edges: a chain of " + std::to_string(chain.size()) +
                         " microservices has exactly " +
                         std::to_string(chain.empty() ? 0 : chain.size() - 1) + " edges");
      }
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string g = f + ".edges[" + std::to_string(e) + "]";
        const json& edge = array(edges[e], g);
        if (edge.size() != 2 || index_value(edge[0], g) != e || index_value(edge[1], g) != e + 1) {
          throw ParseError(g + ": only linear chains are supported (expected [" +
                           std::to_string(e) + ", " + std::to_string(e + 1) + "])");
        }
      }
    }
    s.applications.push_back(std::move(app));
  }

  const json& req = array(member(j, "requests", "scenario"), "requests");
  if (req.size() != apps.size()) {
    throw ParseError("requests: expected one row per application (" + std::to_string(apps.size()) + ")");
  }
  s.requests = RequestDistribution(apps.size(), n);
  for (std::size_t a = 0; a < req.size(); ++a) {
    const std::string f = "requests[" + std::to_string(a) + "]";
    const json& row = array(req[a], f);
    if (row.size() != n) throw ParseError(f + ": expected " + std::to_string(n) + " entries");
    for (std::size_t i = 0; i < n; ++i) {
      s.requests.set(a, i, number(row[i], f + "[" + std::to_string(i) + "]"));
    }
  }
  return s;
}

std::string render_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

json parse_json_text(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < upto; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ParseError(origin + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
}

Scenario parse_scenario(std::string_view text) {
  Scenario s = scenario_from_json(parse_json_text(text, "scenario"));
  auto v = validate_scenario(s);
  if (!v.empty()) {
    std::string msg = "scenario failed validation:";
    for (const auto& x : v) msg += "\n  " + x.field + ": " + x.message;
    throw ParseError(msg);
  }
  return s;
}

json scheme_to_json(const DeploymentScheme& d) {
  json j;
  j["format"] = "edgeplace-scheme";
  j["version"] = 1;
  j["servers"] = d.server_count();
  json apps = json::array();
  for (std::size_t k = 0; k < d.app_count(); ++k) {
    json chain = json::array();
    for (std::size_t v = 0; v < d.chain_length(k); ++v) chain.push_back(d.counts({k, v}));
    apps.push_back(std::move(chain));
  }
  j["counts"] = std::move(apps);
  return j;
}

DeploymentScheme scheme_from_json(const json& j, const Scenario& s) {
  check_format(j, "edgeplace-scheme", "scheme");
  const std::size_t n = index_value(member(j, "servers", "scheme"), "servers");
  if (n != s.server_count()) {
    throw ParseError("servers: scheme has " + std::to_string(n) + " servers, scenario has " +
                     std::to_string(s.server_count()));
  }
  const json& apps = array(member(j, "counts", "scheme"), "counts");
  if (apps.size() != s.app_count()) {
    throw ParseError("counts: expected " + std::to_string(s.app_count()) + " applications");
  }
  DeploymentScheme d(s);
  for (std::size_t k = 0; k < apps.size(); ++k) {
    const std::string f = "counts[" + std::to_string(k) + "]";
    const json& chain = array(apps[k], f);
    if (chain.size() != s.applications[k].chain.size()) {
      throw ParseError(f + ": expected " + std::to_string(s.applications[k].chain.size()) +
                       " microservices");
    }
    for (std::size_t v = 0; v < chain.size(); ++v) {
      const std::string g = f + "[" + std::to_string(v) + "]";
      const json& row = array(chain[v], g);
      if (row.size() != n) throw ParseError(g + ": expected " + std::to_string(n) + " counts");
      for (std::size_t i = 0; i < n; ++i) {
        d.set({k, v}, i, static_cast<int>(index_value(row[i], g + "[" + std::to_string(i) + "]")));
      }
    }
  }
  return d;
}

std::string render_scheme(const DeploymentScheme& d) { return scheme_to_json(d).dump(2) + "\n"; }

DeploymentScheme parse_scheme(std::string_view text, const Scenario& s) {
  return scheme_from_json(parse_json_text(text, "scheme"), s);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

namespace {

template <typename F>
auto with_path(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return with_path(path, [&] { return parse_scenario(text); });
}

void save_scenario(const std::filesystem::path& path, const Scenario& s) {
  write_file(path, render_scenario(s));
}

DeploymentScheme load_scheme(const std::filesystem::path& path, const Scenario& s) {
  const std::string text = read_file(path);
  return with_path(path, [&] { return parse_scheme(text, s); });
}

void save_scheme(const std::filesystem::path& path, const DeploymentScheme& d) {
  write_file(path, render_scheme(d));
}

std::string format_float(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string report_csv_header() {
  return "objective,per_app_latency,servable,capacity_ok,cpu_violation_total,mem_violation_total";
}

std::string report_csv_row(const LatencyReport& r) {
  std::string row = r.servable() ? format_float(r.objective) : std::string("inf");
  row += ',';
  for (std::size_t k = 0; k < r.per_app_latency.size(); ++k) {
    if (k) row += ';';
    if (r.per_app_latency[k]) row += format_float(*r.per_app_latency[k]);
  }
  double cpu = 0.0;
  double mem = 0.0;
  for (double x : r.cpu_violation) cpu += x;
  for (double x : r.mem_violation) mem += x;
  row += ',';
  row += r.servable() ? "1" : "0";
  row += ',';
  row += r.capacity_ok() ? "1" : "0";
  row += ',' + format_float(cpu) + ',' + format_float(mem);
  return row;
}

}  // namespace edgeplace
