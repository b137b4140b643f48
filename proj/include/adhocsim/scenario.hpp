#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "adhocsim/protocol.hpp"

namespace adhocsim {

/// Config problem tied to a named field; the CLI surfaces field + reason and
/// exits nonzero without starting any simulation.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : std::runtime_error(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// One simulation scenario as described by the flat `key = value` config
/// format. Protocol-specific knobs live in `overrides` under a protocol
/// prefix (e.g. "aodv.ttl_start = 2"); unknown keys are rejected.
struct ScenarioConfig {
  std::string protocol = "aodv";
  std::string mac = "80211";        // 80211 | 80211p
  int nodes = 25;
  double speed_mps = 2.0;
  double sim_time_s = 900.0;
  uint64_t seed = 1;
  int flows = 10;
  std::string mobility;             // waypoint | highway; empty -> mac default
  double warmup_s = 50.0;

  double cbr_interval_s = 0.03;
  uint32_t cbr_payload_bytes = 512;
  double flow_stagger_s = 10.0;

  double field_width_m = 1000.0;
  double field_height_m = 1000.0;
  double pause_s = 0.0;

  double road_length_m = 1000.0;
  int lanes_per_direction = 2;
  double lane_width_m = 4.0;
  double speed_jitter_mps = 0.0;

  std::string channel = "nakagami";  // nakagami | unitdisk
  double range_m = 0.0;              // 0 -> mac preset default (250 / 300)
  double nakagami_m = 0.0;           // 0 -> mac preset default (1 / 3)
  double path_loss_alpha = 2.0;
  double data_rate_bps = 2e6;

  int retry_limit = 7;
  int queue_capacity = 50;
  uint32_t header_overhead_bytes = 28;

  std::map<std::string, std::string> overrides;

  static ScenarioConfig from_string(const std::string& text);
  static ScenarioConfig from_file(const std::string& path);

  /// Applies one key/value pair; throws ConfigError for unknown keys or
  /// unparsable values.
  void apply(const std::string& key, const std::string& value);

  void validate() const;

  /// Canonical config-file emission; parsing it back yields this config.
  std::string to_config_string() const;

  std::string effective_mobility() const;   // resolves the mac default
  double effective_range() const;
  double effective_nakagami_m() const;
  ProtocolKind protocol_kind() const { return protocol_from_string(protocol); }
  std::string scenario_id() const;
};

/// Builds the per-node protocol configuration: preset for the named protocol
/// with `overrides` applied. Throws ConfigError on unknown override keys.
ProtocolConfig build_protocol_config(const ScenarioConfig& cfg);

}  // namespace adhocsim
