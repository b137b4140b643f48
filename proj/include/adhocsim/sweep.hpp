#pragma once

#include <string>
#include <vector>

#include "adhocsim/runner.hpp"

namespace adhocsim {

/// Experimental grid over protocol x mac x nodes x speed plus replications.
/// Everything else comes from the base scenario. Replication seeds derive as
/// base.seed + replication index.
struct SweepSpec {
  ScenarioConfig base;
  std::vector<std::string> protocols{"aodv"};
  std::vector<std::string> macs{"80211"};
  std::vector<int> node_counts{25};
  std::vector<double> speeds{2.0};
  int replications = 1;

  static SweepSpec from_string(const std::string& text);
  static SweepSpec from_file(const std::string& path);
  void validate() const;
};

/// All grid cells as concrete scenario configs, sorted by
/// (protocol, mac, nodes, speed, seed); the emission order of result rows.
std::vector<ScenarioConfig> enumerate_cells(const SweepSpec& spec);

/// Runs every cell; cells are embarrassingly parallel (OpenMP, `workers`
/// threads; <= 0 picks the OpenMP default). A failing cell is recorded in its
/// row's status and the sweep continues. Output is invariant to the worker
/// count because rows land in enumeration order.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, int workers = 0);

/// Serial reference used by tests and the benchmark; identical output.
std::vector<ResultRow> run_sweep_serial(const SweepSpec& spec);

}  // namespace adhocsim
