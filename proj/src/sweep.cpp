#include "adhocsim/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace adhocsim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

SweepSpec SweepSpec::from_string(const std::string& text) {
  SweepSpec spec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno),
                        "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "protocols") {
      spec.protocols = split_list(value);
    } else if (key == "macs") {
      spec.macs = split_list(value);
    } else if (key == "nodes") {
      spec.node_counts.clear();
      for (const std::string& s : split_list(value))
        spec.node_counts.push_back(std::stoi(s));
    } else if (key == "speeds") {
      spec.speeds.clear();
      for (const std::string& s : split_list(value))
        spec.speeds.push_back(std::stod(s));
    } else if (key == "reps") {
      spec.replications = std::stoi(value);
    } else {
      spec.base.apply(key, value);
    }
  }
  return spec;
}

SweepSpec SweepSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("sweep", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

void SweepSpec::validate() const {
  if (replications < 1) throw ConfigError("reps", "must be >= 1");
  if (protocols.empty() || macs.empty() || node_counts.empty() || speeds.empty())
    throw ConfigError("sweep", "every axis needs at least one value");
  for (const ScenarioConfig& cell : enumerate_cells(*this)) cell.validate();
}

std::vector<ScenarioConfig> enumerate_cells(const SweepSpec& spec) {
  std::vector<std::string> protocols = spec.protocols;
  std::vector<std::string> macs = spec.macs;
  std::vector<int> nodes = spec.node_counts;
  std::vector<double> speeds = spec.speeds;
  std::sort(protocols.begin(), protocols.end());
  std::sort(macs.begin(), macs.end());
  std::sort(nodes.begin(), nodes.end());
  std::sort(speeds.begin(), speeds.end());

  std::vector<ScenarioConfig> cells;
  cells.reserve(protocols.size() * macs.size() * nodes.size() * speeds.size() *
                spec.replications);
  for (const std::string& p : protocols)
    for (const std::string& m : macs)
      for (int n : nodes)
        for (double v : speeds)
          for (int rep = 0; rep < spec.replications; ++rep) {
            ScenarioConfig c = spec.base;
            c.protocol = p;
            c.mac = m;
            c.mobility.clear();  // re-derive from mac unless base pinned it
            if (!spec.base.mobility.empty()) c.mobility = spec.base.mobility;
            c.nodes = n;
            c.speed_mps = v;
            c.seed = spec.base.seed + static_cast<uint64_t>(rep);
            cells.push_back(std::move(c));
          }
  return cells;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  const std::vector<ScenarioConfig> cells = enumerate_cells(spec);
  std::vector<ResultRow> rows(cells.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int64_t i = 0; i < static_cast<int64_t>(cells.size()); ++i) {
    try {
      rows[i] = run_scenario(cells[i]);
    } catch (const std::exception& e) {
      ResultRow r;
      r.scenario_id = cells[i].scenario_id();
      r.protocol = cells[i].protocol;
      r.mac = cells[i].mac;
      r.nodes = cells[i].nodes;
      r.speed_mps = cells[i].speed_mps;
      r.seed = cells[i].seed;
      r.sim_time_s = cells[i].sim_time_s;
      r.status = std::string("error: ") + e.what();
      rows[i] = std::move(r);
    }
  }
  return rows;
}

std::vector<ResultRow> run_sweep_serial(const SweepSpec& spec) {
  spec.validate();
  const std::vector<ScenarioConfig> cells = enumerate_cells(spec);
  std::vector<ResultRow> rows;
  rows.reserve(cells.size());
  for (const ScenarioConfig& c : cells) rows.push_back(run_scenario(c));
  return rows;
}

}  // namespace adhocsim
