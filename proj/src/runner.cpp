#include "adhocsim/runner.hpp"

namespace adhocsim {

SimSetup build_setup(const ScenarioConfig& cfg) {
  SimSetup s;
  s.seed = cfg.seed;
  s.sim_time = cfg.sim_time_s;
  s.warmup = cfg.warmup_s;

  if (cfg.channel == "unitdisk") {
    s.channel = ChannelModel::unit_disk(cfg.effective_range(), cfg.data_rate_bps);
  } else {
    s.channel = ChannelModel::nakagami(cfg.effective_nakagami_m(),
                                       cfg.effective_range(), cfg.path_loss_alpha,
                                       cfg.data_rate_bps);
  }

  s.mac = cfg.mac == "80211p" ? MacConfig::preset_80211p() : MacConfig::preset_80211();
  s.mac.retry_limit = cfg.retry_limit;
  s.mac.queue_capacity = static_cast<size_t>(cfg.queue_capacity);
  s.mac.header_overhead_bytes = cfg.header_overhead_bytes;

  s.protocol = build_protocol_config(cfg);
  s.flows = spawn_flows(cfg.flows, cfg.nodes, cfg.seed, cfg.sim_time_s,
                        cfg.cbr_interval_s, cfg.cbr_payload_bytes,
                        cfg.flow_stagger_s);
  return s;
}

std::unique_ptr<MobilityModel> build_mobility(const ScenarioConfig& cfg) {
  if (cfg.effective_mobility() == "highway") {
    HighwayConfig hw;
    hw.road_length = cfg.road_length_m;
    hw.lanes_per_direction = cfg.lanes_per_direction;
    hw.lane_width = cfg.lane_width_m;
    hw.speed_mps = cfg.speed_mps;
    hw.speed_jitter = cfg.speed_jitter_mps;
    return std::make_unique<HighwayMobility>(
        HighwayMobility::fixed_count(hw, cfg.nodes, cfg.seed));
  }
  return std::make_unique<RandomWaypointMobility>(cfg.nodes, cfg.field_width_m,
                                                  cfg.field_height_m, cfg.speed_mps,
                                                  cfg.pause_s, cfg.seed);
}

ResultRow row_from_ledger(const ScenarioConfig& cfg, const MetricsLedger& ledger) {
  ResultRow r;
  r.scenario_id = cfg.scenario_id();
  r.protocol = cfg.protocol;
  r.mac = cfg.mac;
  r.nodes = cfg.nodes;
  r.speed_mps = cfg.speed_mps;
  r.seed = cfg.seed;
  r.sim_time_s = cfg.sim_time_s;
  r.data_sent = ledger.data_sent();
  r.data_delivered = ledger.data_delivered();
  r.pdr = ledger.pdr();
  r.throughput_bps = ledger.throughput_bps(cfg.sim_time_s - cfg.warmup_s);
  r.e2ed_ms = ledger.e2ed_ms();
  r.nrl = ledger.nrl();
  return r;
}

ResultRow run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Simulation sim(build_setup(cfg), build_mobility(cfg));
  sim.run();
  return row_from_ledger(cfg, sim.ledger());
}

}  // namespace adhocsim
