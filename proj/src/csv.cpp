#include "adhocsim/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace adhocsim {

namespace {

std::string fixed(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string opt_fixed(const std::optional<double>& v, int prec) {
  return v ? fixed(*v, prec) : "";
}

struct Stats {
  int n = 0;
  double sum = 0.0, sumsq = 0.0;
  void add(double v) {
    ++n;
    sum += v;
    sumsq += v * v;
  }
  std::optional<double> mean() const {
    return n > 0 ? std::optional<double>(sum / n) : std::nullopt;
  }
  std::optional<double> stderr_mean() const {
    if (n < 1) return std::nullopt;
    if (n == 1) return 0.0;
    const double m = sum / n;
    const double var = std::max(0.0, (sumsq - n * m * m) / (n - 1));
    return std::sqrt(var / n);
  }
};

}  // namespace

std::string csv_header() {
  return "scenario_id,protocol,mac,nodes,speed_mps,seed,sim_time_s,data_sent,"
         "data_delivered,pdr,throughput_bps,e2ed_ms,nrl";
}

std::string csv_row(const ResultRow& r) {
  std::ostringstream os;
  os << r.scenario_id << ',' << r.protocol << ',' << r.mac << ',' << r.nodes << ','
     << general(r.speed_mps) << ',' << r.seed << ',' << general(r.sim_time_s) << ','
     << r.data_sent << ',' << r.data_delivered << ',' << opt_fixed(r.pdr, 6) << ','
     << fixed(r.throughput_bps, 3) << ',' << opt_fixed(r.e2ed_ms, 6) << ','
     << opt_fixed(r.nrl, 6);
  return os.str();
}

std::string rows_to_csv(std::span<const ResultRow> rows) {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const ResultRow& r : rows) os << csv_row(r) << '\n';
  return os.str();
}

std::vector<SummaryRow> summarize(std::span<const ResultRow> rows) {
  using Key = std::tuple<std::string, std::string, int, double>;
  std::map<Key, std::vector<const ResultRow*>> cells;
  for (const ResultRow& r : rows)
    cells[{r.protocol, r.mac, r.nodes, r.speed_mps}].push_back(&r);

  std::vector<SummaryRow> out;
  out.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    SummaryRow s;
    s.protocol = std::get<0>(key);
    s.mac = std::get<1>(key);
    s.nodes = std::get<2>(key);
    s.speed_mps = std::get<3>(key);
    s.replications = static_cast<int>(cell.size());
    Stats pdr, tput, e2ed, nrl;
    for (const ResultRow* r : cells.at(key)) {
      if (r->status != "ok") s.status = r->status;
      if (r->pdr) pdr.add(*r->pdr);
      tput.add(r->throughput_bps);
      if (r->e2ed_ms) e2ed.add(*r->e2ed_ms);
      if (r->nrl) nrl.add(*r->nrl);
    }
    s.pdr_mean = pdr.mean();
    s.pdr_se = pdr.stderr_mean();
    s.throughput_mean = tput.mean().value_or(0.0);
    s.throughput_se = tput.stderr_mean().value_or(0.0);
    s.e2ed_mean = e2ed.mean();
    s.e2ed_se = e2ed.stderr_mean();
    s.nrl_mean = nrl.mean();
    s.nrl_se = nrl.stderr_mean();
    out.push_back(std::move(s));
  }
  return out;
}

std::string summary_to_csv(std::span<const SummaryRow> rows) {
  std::ostringstream os;
  os << "protocol,mac,nodes,speed_mps,replications,pdr_mean,pdr_se,"
        "throughput_mean_bps,throughput_se_bps,e2ed_mean_ms,e2ed_se_ms,"
        "nrl_mean,nrl_se,status\n";
  for (const SummaryRow& s : rows) {
    os << s.protocol << ',' << s.mac << ',' << s.nodes << ',' << general(s.speed_mps)
       << ',' << s.replications << ',' << opt_fixed(s.pdr_mean, 6) << ','
       << opt_fixed(s.pdr_se, 6) << ',' << fixed(s.throughput_mean, 3) << ','
       << fixed(s.throughput_se, 3) << ',' << opt_fixed(s.e2ed_mean, 6) << ','
       << opt_fixed(s.e2ed_se, 6) << ',' << opt_fixed(s.nrl_mean, 6) << ','
       << opt_fixed(s.nrl_se, 6) << ',' << s.status << '\n';
  }
  return os.str();
}

std::map<std::string, std::string> plot_data_files(std::span<const ResultRow> rows) {
  // Series value = mean over replications and over the non-axis factor.
  const std::vector<SummaryRow> cells = summarize(rows);
  std::set<std::string> protocols;
  for (const SummaryRow& c : cells) protocols.insert(c.protocol);

  struct MetricDef {
    const char* name;
    std::optional<double> SummaryRow::* mean_opt;
    double SummaryRow::* mean_plain;
  };
  const MetricDef metrics[] = {
      {"throughput", nullptr, &SummaryRow::throughput_mean},
      {"e2ed", &SummaryRow::e2ed_mean, nullptr},
      {"nrl", &SummaryRow::nrl_mean, nullptr},
  };

  std::map<std::string, std::string> files;
  for (const char* mac : {"80211", "80211p"}) {
    const std::string family = std::string(mac) == "80211" ? "manet" : "vanet";
    for (const char* axis : {"nodes", "speed"}) {
      const std::string axis_name =
          std::string(axis) == "nodes" ? "scalability" : "mobility";
      for (const MetricDef& m : metrics) {
        // x value -> protocol -> accumulated means
        std::map<double, std::map<std::string, Stats>> grid;
        for (const SummaryRow& c : cells) {
          if (c.mac != mac) continue;
          std::optional<double> v;
          if (m.mean_plain) v = c.*(m.mean_plain);
          else v = c.*(m.mean_opt);
          if (!v) continue;
          const double x = std::string(axis) == "nodes"
                               ? static_cast<double>(c.nodes)
                               : c.speed_mps;
          grid[x][c.protocol].add(*v);
        }
        if (grid.empty()) continue;
        std::ostringstream os;
        os << axis;
        for (const std::string& p : protocols) os << ',' << p;
        os << '\n';
        for (const auto& [x, series] : grid) {
          os << general(x);
          for (const std::string& p : protocols) {
            auto it = series.find(p);
            os << ',' << (it != series.end() ? fixed(*it->second.mean(), 6) : "");
          }
          os << '\n';
        }
        files["plot_" + std::string(m.name) + "_" + family + "_" + axis_name +
              ".csv"] = os.str();
      }
    }
  }
  return files;
}

}  // namespace adhocsim
