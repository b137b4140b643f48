// adhocsim command line: single runs, Table-1-style sweeps, closed-form
// analytics curves, and the highway occupancy validation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adhocsim/analytics.hpp"
#include "adhocsim/csv.hpp"
#include "adhocsim/runner.hpp"
#include "adhocsim/scenario.hpp"
#include "adhocsim/sweep.hpp"

namespace {

using namespace adhocsim;

std::ofstream open_or_die(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("out", "cannot write '" + path + "'");
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_or_die(path);
  out << content;
}

struct ScenarioFlags {
  std::string config_path;
  std::string protocol, mac, mobility;
  int nodes = -1, flows = -1;
  double speed = -1.0, sim_time = -1.0, warmup = -1.0;
  int64_t seed = -1;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "scenario config file (key = value)");
    app.add_option("--protocol", protocol,
                   "aodv|mod-aodv|dsr|mod-dsr|fsr|mod-fsr");
    app.add_option("--mac", mac, "80211|80211p");
    app.add_option("--mobility", mobility, "waypoint|highway");
    app.add_option("--nodes", nodes, "node count");
    app.add_option("--speed", speed, "node speed, m/s");
    app.add_option("--sim-time", sim_time, "simulated seconds");
    app.add_option("--warmup", warmup, "metrics warm-up exclusion, seconds");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--flows", flows, "CBR flow count");
  }

  ScenarioConfig build() const {
    ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{}
                                             : ScenarioConfig::from_file(config_path);
    if (!protocol.empty()) cfg.protocol = protocol;
    if (!mac.empty()) cfg.mac = mac;
    if (!mobility.empty()) cfg.mobility = mobility;
    if (nodes >= 0) cfg.nodes = nodes;
    if (speed >= 0.0) cfg.speed_mps = speed;
    if (sim_time >= 0.0) cfg.sim_time_s = sim_time;
    if (warmup >= 0.0) cfg.warmup_s = warmup;
    if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
    if (flows >= 0) cfg.flows = flows;
    return cfg;
  }
};

int cmd_run(const ScenarioFlags& flags, const std::string& out_path) {
  ScenarioConfig cfg = flags.build();
  cfg.validate();
  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    out_file = open_or_die(out_path);
    out = &out_file;
  }
  const ResultRow row = run_scenario(cfg);
  *out << csv_header() << '\n' << csv_row(row) << '\n';
  return 0;
}

SweepSpec default_table1_sweep() {
  SweepSpec spec;
  spec.protocols = {"aodv", "mod-aodv", "dsr", "mod-dsr", "fsr", "mod-fsr"};
  spec.macs = {"80211", "80211p"};
  spec.node_counts = {25, 50, 75, 100};
  spec.speeds = {2, 7, 15, 30};
  spec.replications = 1;
  spec.base.sim_time_s = 200.0;  // desk scale; --full restores 900 s
  return spec;
}

int cmd_sweep(const std::string& config_path, int reps, int workers, bool full,
              bool plot_data, const std::string& out_dir) {
  SweepSpec spec = config_path.empty() ? default_table1_sweep()
                                       : SweepSpec::from_file(config_path);
  if (reps > 0) spec.replications = reps;
  if (full) spec.base.sim_time_s = 900.0;
  spec.validate();

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  // Probe writability before burning simulation time.
  const std::string rows_path = (fs::path(out_dir) / "results.csv").string();
  open_or_die(rows_path);

  const std::vector<ResultRow> rows = run_sweep(spec, workers);
  write_file(rows_path, rows_to_csv(rows));
  const std::vector<SummaryRow> summary = summarize(rows);
  write_file((fs::path(out_dir) / "summary.csv").string(), summary_to_csv(summary));
  if (plot_data)
    for (const auto& [name, content] : plot_data_files(rows))
      write_file((fs::path(out_dir) / name).string(), content);

  std::cout << "sweep: " << rows.size() << " rows -> " << out_dir << '\n';
  for (const ResultRow& r : rows)
    if (r.status != "ok")
      std::cerr << "cell " << r.scenario_id << " " << r.status << '\n';
  return 0;
}

int cmd_analytics(const std::string& out_dir, double range, double speed,
                  double lambda_max, int steps) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream out =
        open_or_die((fs::path(out_dir) / "connectivity.csv").string());
    out << "lambda_per_s,density_per_m,phi,p_nonempty\n";
    for (int i = 1; i <= steps; ++i) {
      const double lambda = lambda_max * i / steps;
      const double density = lambda / speed;
      const double phi = analytics::steady_state_phi(lambda, speed, 2.0 * range);
      char buf[160];
      std::snprintf(buf, sizeof buf, "%.6f,%.8f,%.6f,%.9f\n", lambda, density, phi,
                    analytics::p_nonempty(phi));
      out << buf;
    }
  }
  {
    std::ofstream out =
        open_or_die((fs::path(out_dir) / "link_duration.csv").string());
    out << "v1_mps,v2_mps,direction,duration_s\n";
    const double speeds[] = {2, 7, 15, 30};
    for (double v1 : speeds)
      for (double v2 : speeds)
        for (auto dir : {analytics::Direction::kSame, analytics::Direction::kOpposite}) {
          const double d = analytics::link_duration(
              {v1, v2, dir, range});
          out << v1 << ',' << v2 << ','
              << (dir == analytics::Direction::kSame ? "same" : "opposite") << ',';
          if (std::isinf(d))
            out << "inf\n";
          else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f\n", d);
            out << buf;
          }
        }
  }
  std::cout << "analytics curves -> " << out_dir << '\n';
  return 0;
}

int cmd_validate(double lambda, double speed, double road, double seg_start,
                 double seg_length, int64_t samples, uint64_t seed, bool serial,
                 bool convoy) {
  HighwayConfig hw;
  hw.road_length = road;
  hw.lanes_per_direction = 1;
  hw.arrival_rate = lambda;
  hw.speed_mps = speed;

  analytics::SegmentModel model;
  model.seg_start = seg_start;
  model.seg_length = seg_length;
  model.lambda = lambda;
  model.speed = speed;
  model.phi = analytics::steady_state_phi(lambda, speed, seg_length);

  const auto trace =
      convoy ? analytics::convoy_occupancy_trace(hw, static_cast<size_t>(samples))
             : analytics::highway_occupancy_trace(hw, static_cast<size_t>(samples),
                                                  seed, !serial);
  const auto rep = analytics::validate_occupancy(trace, model);

  const char* status = rep.status == analytics::OccupancyReport::Status::kPass
                           ? "PASS"
                       : rep.status == analytics::OccupancyReport::Status::kFail
                           ? "FAIL"
                           : "INCONCLUSIVE";
  std::cout << "occupancy fit: " << status << '\n'
            << "  samples            " << rep.samples << '\n'
            << "  expected phi       " << rep.expected_phi << '\n'
            << "  empirical mean     " << rep.empirical_mean << '\n'
            << "  variance/mean      " << rep.variance_mean_ratio << '\n'
            << "  chi-square         " << rep.chi_square << " over " << rep.chi_bins
            << " bins\n";
  if (!rep.note.empty()) std::cout << "  note: " << rep.note << '\n';
  return rep.status == analytics::OccupancyReport::Status::kPass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adhocsim: deterministic MANET/VANET routing simulator"};
  app.require_subcommand(1);

  ScenarioFlags run_flags;
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "run one scenario, emit a CSV row");
  run_flags.add_to(*run);
  run->add_option("--out", run_out, "output CSV path (default stdout)");

  std::string sweep_config, sweep_out = "sweep_out";
  int sweep_reps = 0, sweep_workers = 0;
  bool sweep_full = false, sweep_plot = false;
  CLI::App* sweep = app.add_subcommand("sweep", "run the experimental grid");
  sweep->add_option("--config", sweep_config, "sweep config file");
  sweep->add_option("--reps", sweep_reps, "replications per cell");
  sweep->add_option("--workers", sweep_workers, "parallel workers (0 = auto)");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_flag("--full", sweep_full, "full-scale 900 s cells");
  sweep->add_flag("--plot-data", sweep_plot, "also emit plot-ready series");

  std::string ana_out = "analytics_out";
  double ana_range = 250.0, ana_speed = 20.0, ana_lambda_max = 0.5;
  int ana_steps = 50;
  CLI::App* ana = app.add_subcommand("analytics", "emit closed-form curves");
  ana->add_option("--out", ana_out, "output directory");
  ana->add_option("--range", ana_range, "communication range, m");
  ana->add_option("--speed", ana_speed, "vehicle speed, m/s");
  ana->add_option("--lambda-max", ana_lambda_max, "max arrival rate, 1/s");
  ana->add_option("--steps", ana_steps, "curve resolution");

  double val_lambda = 0.1, val_speed = 20.0, val_road = 1000.0;
  double val_seg_start = 100.0, val_seg_len = 400.0;
  int64_t val_samples = 100000;
  uint64_t val_seed = 1;
  bool val_serial = false, val_convoy = false;
  CLI::App* val = app.add_subcommand("validate", "occupancy fit vs Poisson model");
  val->add_option("--lambda", val_lambda, "arrival rate per lane, 1/s");
  val->add_option("--speed", val_speed, "vehicle speed, m/s");
  val->add_option("--road-length", val_road, "ring road length, m");
  val->add_option("--segment-start", val_seg_start, "segment start, m");
  val->add_option("--segment-length", val_seg_len, "segment length, m");
  val->add_option("--samples", val_samples, "decorrelated samples");
  val->add_option("--seed", val_seed, "master seed");
  val->add_flag("--serial", val_serial, "disable the OpenMP sampler");
  val->add_flag("--convoy", val_convoy, "equally-spaced convoy negative control");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags, run_out);
    if (sweep->parsed())
      return cmd_sweep(sweep_config, sweep_reps, sweep_workers, sweep_full,
                       sweep_plot, sweep_out);
    if (ana->parsed())
      return cmd_analytics(ana_out, ana_range, ana_speed, ana_lambda_max, ana_steps);
    if (val->parsed())
      return cmd_validate(val_lambda, val_speed, val_road, val_seg_start,
                          val_seg_len, val_samples, val_seed, val_serial,
                          val_convoy);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
