#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adhocsim/types.hpp"

namespace adhocsim {

struct ResultRow {
  std::string scenario_id;
  std::string protocol;
  std::string mac;
  int nodes = 0;
  double speed_mps = 0.0;
  uint64_t seed = 0;
  double sim_time_s = 0.0;
  uint64_t data_sent = 0;
  uint64_t data_delivered = 0;
  std::optional<double> pdr;
  double throughput_bps = 0.0;
  std::optional<double> e2ed_ms;  // absent when nothing was delivered
  std::optional<double> nrl;      // absent when nothing was delivered
  std::string status = "ok";      // sweep bookkeeping; not a CSV column
};

/// Exact result header:
/// scenario_id,protocol,mac,nodes,speed_mps,seed,sim_time_s,data_sent,
/// data_delivered,pdr,throughput_bps,e2ed_ms,nrl
std::string csv_header();
std::string csv_row(const ResultRow& r);
std::string rows_to_csv(std::span<const ResultRow> rows);

struct SummaryRow {
  std::string protocol;
  std::string mac;
  int nodes = 0;
  double speed_mps = 0.0;
  int replications = 0;
  std::optional<double> pdr_mean, pdr_se;
  double throughput_mean = 0.0, throughput_se = 0.0;
  std::optional<double> e2ed_mean, e2ed_se;
  std::optional<double> nrl_mean, nrl_se;
  std::string status = "ok";
};

/// Per-cell mean and standard error over replications (protocol, mac, nodes,
/// speed become the cell key).
std::vector<SummaryRow> summarize(std::span<const ResultRow> rows);
std::string summary_to_csv(std::span<const SummaryRow> rows);

/// Plot-ready series, one file per (metric, mac, axis) mirroring the paper's
/// figure layout: MANET/VANET by mac, scalability (x = nodes) and mobility
/// (x = speed) as axes, one column per protocol. Returns filename -> content.
std::map<std::string, std::string> plot_data_files(std::span<const ResultRow> rows);

}  // namespace adhocsim
