#include "adhocsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "adhocsim/channel.hpp"
#include "adhocsim/medium.hpp"

namespace adhocsim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int64_t x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ScenarioConfig ScenarioConfig::from_string(const std::string& text) {
  ScenarioConfig cfg;
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
    cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

void ScenarioConfig::apply(const std::string& key, const std::string& value) {
  if (key == "protocol") protocol = value;
  else if (key == "mac") mac = value;
  else if (key == "nodes") nodes = static_cast<int>(parse_int(key, value));
  else if (key == "speed") speed_mps = parse_double(key, value);
  else if (key == "sim_time") sim_time_s = parse_double(key, value);
  else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "flows") flows = static_cast<int>(parse_int(key, value));
  else if (key == "mobility") mobility = value;
  else if (key == "warmup") warmup_s = parse_double(key, value);
  else if (key == "cbr_interval") cbr_interval_s = parse_double(key, value);
  else if (key == "cbr_payload") cbr_payload_bytes = static_cast<uint32_t>(parse_int(key, value));
  else if (key == "flow_stagger") flow_stagger_s = parse_double(key, value);
  else if (key == "field_width") field_width_m = parse_double(key, value);
  else if (key == "field_height") field_height_m = parse_double(key, value);
  else if (key == "pause") pause_s = parse_double(key, value);
  else if (key == "road_length") road_length_m = parse_double(key, value);
  else if (key == "lanes_per_direction") lanes_per_direction = static_cast<int>(parse_int(key, value));
  else if (key == "lane_width") lane_width_m = parse_double(key, value);
  else if (key == "speed_jitter") speed_jitter_mps = parse_double(key, value);
  else if (key == "channel") channel = value;
  else if (key == "range") range_m = parse_double(key, value);
  else if (key == "nakagami_m") nakagami_m = parse_double(key, value);
  else if (key == "path_loss_alpha") path_loss_alpha = parse_double(key, value);
  else if (key == "data_rate") data_rate_bps = parse_double(key, value);
  else if (key == "retry_limit") retry_limit = static_cast<int>(parse_int(key, value));
  else if (key == "queue_capacity") queue_capacity = static_cast<int>(parse_int(key, value));
  else if (key == "header_overhead") header_overhead_bytes = static_cast<uint32_t>(parse_int(key, value));
  else if (key.rfind("aodv.", 0) == 0 || key.rfind("dsr.", 0) == 0 ||
           key.rfind("fsr.", 0) == 0)
    overrides[key] = value;
  else
    throw ConfigError(key, "unknown config key");
}

std::string ScenarioConfig::effective_mobility() const {
  if (!mobility.empty()) return mobility;
  return mac == "80211p" ? "highway" : "waypoint";
}

double ScenarioConfig::effective_range() const {
  if (range_m > 0.0) return range_m;
  return mac == "80211p" ? 300.0 : 250.0;
}

double ScenarioConfig::effective_nakagami_m() const {
  if (nakagami_m > 0.0) return nakagami_m;
  return mac == "80211p" ? 3.0 : 1.0;
}

void ScenarioConfig::validate() const {
  protocol_from_string(protocol);  // throws for unknown names
  if (mac != "80211" && mac != "80211p")
    throw ConfigError("mac", "expected 80211 or 80211p, got '" + mac + "'");
  const std::string mob = effective_mobility();
  if (mob != "waypoint" && mob != "highway")
    throw ConfigError("mobility", "expected waypoint or highway, got '" + mob + "'");
  if (channel != "nakagami" && channel != "unitdisk")
    throw ConfigError("channel", "expected nakagami or unitdisk, got '" + channel + "'");
  if (nodes < 2) throw ConfigError("nodes", "need at least 2 nodes");
  if (speed_mps <= 0.0) throw ConfigError("speed", "must be positive");
  if (sim_time_s <= warmup_s)
    throw ConfigError("sim_time", "must exceed the warm-up (" +
                                      fmt_double(warmup_s) + " s)");
  if (flows < 0) throw ConfigError("flows", "must be >= 0");
  const int64_t pairs = static_cast<int64_t>(nodes) * (nodes - 1);
  if (flows > pairs) throw ConfigError("flows", "exceeds available (src,dst) pairs");
  if (cbr_interval_s <= 0.0) throw ConfigError("cbr_interval", "must be positive");
  if (cbr_payload_bytes == 0) throw ConfigError("cbr_payload", "must be positive");
  if (field_width_m <= 0.0 || field_height_m <= 0.0)
    throw ConfigError("field_width", "field dimensions must be positive");
  if (pause_s < 0.0) throw ConfigError("pause", "must be >= 0");
  if (road_length_m <= 0.0) throw ConfigError("road_length", "must be positive");
  if (lanes_per_direction < 1)
    throw ConfigError("lanes_per_direction", "must be >= 1");
  if (speed_jitter_mps < 0.0 || speed_jitter_mps >= speed_mps)
    throw ConfigError("speed_jitter", "must be in [0, speed)");
  if (range_m < 0.0) throw ConfigError("range", "must be >= 0 (0 = preset default)");
  if (path_loss_alpha <= 0.0) throw ConfigError("path_loss_alpha", "must be positive");
  if (data_rate_bps <= 0.0) throw ConfigError("data_rate", "must be positive");
  if (retry_limit < 1) throw ConfigError("retry_limit", "must be >= 1");
  if (queue_capacity < 1) throw ConfigError("queue_capacity", "must be >= 1");
  build_protocol_config(*this);  // rejects unknown/invalid overrides
}

std::string ScenarioConfig::to_config_string() const {
  std::ostringstream os;
  os << "# adhocsim scenario\n";
  os << "protocol = " << protocol << "\n";
  os << "mac = " << mac << "\n";
  os << "nodes = " << nodes << "\n";
  os << "speed = " << fmt_double(speed_mps) << "\n";
  os << "sim_time = " << fmt_double(sim_time_s) << "\n";
  os << "seed = " << seed << "\n";
  os << "flows = " << flows << "\n";
  if (!mobility.empty()) os << "mobility = " << mobility << "\n";
  os << "warmup = " << fmt_double(warmup_s) << "\n";
  os << "cbr_interval = " << fmt_double(cbr_interval_s) << "\n";
  os << "cbr_payload = " << cbr_payload_bytes << "\n";
  os << "flow_stagger = " << fmt_double(flow_stagger_s) << "\n";
  os << "field_width = " << fmt_double(field_width_m) << "\n";
  os << "field_height = " << fmt_double(field_height_m) << "\n";
  os << "pause = " << fmt_double(pause_s) << "\n";
  os << "road_length = " << fmt_double(road_length_m) << "\n";
  os << "lanes_per_direction = " << lanes_per_direction << "\n";
  os << "lane_width = " << fmt_double(lane_width_m) << "\n";
  os << "speed_jitter = " << fmt_double(speed_jitter_mps) << "\n";
  os << "channel = " << channel << "\n";
  os << "range = " << fmt_double(range_m) << "\n";
  os << "nakagami_m = " << fmt_double(nakagami_m) << "\n";
  os << "path_loss_alpha = " << fmt_double(path_loss_alpha) << "\n";
  os << "data_rate = " << fmt_double(data_rate_bps) << "\n";
  os << "retry_limit = " << retry_limit << "\n";
  os << "queue_capacity = " << queue_capacity << "\n";
  os << "header_overhead = " << header_overhead_bytes << "\n";
  for (const auto& [k, v] : overrides) os << k << " = " << v << "\n";
  return os.str();
}

std::string ScenarioConfig::scenario_id() const {
  std::ostringstream os;
  os << protocol << "_" << mac << "_n" << nodes << "_v" << fmt_double(speed_mps)
     << "_s" << seed;
  return os.str();
}

namespace {

void apply_flood_override(FloodTiming& f, const std::string& key,
                          const std::string& field, const std::string& value) {
  if (field == "flood_base_delay") f.base_delay_s = parse_double(key, value);
  else if (field == "flood_jitter") f.jitter_s = parse_double(key, value);
  else if (field == "flood_slotted") f.slotted = parse_bool(key, value);
  else if (field == "flood_slot_width") f.slot_width_s = parse_double(key, value);
  else if (field == "flood_slot_modulus") f.slot_modulus = static_cast<int>(parse_int(key, value));
  else throw ConfigError(key, "unknown protocol override");
}

void apply_aodv_override(AodvConfig& c, const std::string& key,
                         const std::string& field, const std::string& value) {
  if (field == "ttl_start") c.ttl_start = static_cast<int>(parse_int(key, value));
  else if (field == "ttl_increment") c.ttl_increment = static_cast<int>(parse_int(key, value));
  else if (field == "ttl_threshold") c.ttl_threshold = static_cast<int>(parse_int(key, value));
  else if (field == "net_diameter") c.net_diameter = static_cast<int>(parse_int(key, value));
  else if (field == "rreq_retries") c.rreq_retries = static_cast<int>(parse_int(key, value));
  else if (field == "node_traversal") c.node_traversal_s = parse_double(key, value);
  else if (field == "active_route_timeout") c.active_route_timeout_s = parse_double(key, value);
  else if (field == "hello_interval") c.hello_interval_s = parse_double(key, value);
  else if (field == "allowed_hello_loss") c.allowed_hello_loss = static_cast<int>(parse_int(key, value));
  else if (field == "local_repair") c.local_repair = parse_bool(key, value);
  else if (field == "gratuitous_rrep") c.gratuitous_rrep = parse_bool(key, value);
  else if (field == "dest_only_rrep") c.dest_only_rrep = parse_bool(key, value);
  else if (field == "local_add_ttl") c.local_add_ttl = static_cast<int>(parse_int(key, value));
  else if (field == "send_buffer_capacity") c.send_buffer_capacity = parse_u64(key, value);
  else apply_flood_override(c.flood, key, field, value);
}

void apply_dsr_override(DsrConfig& c, const std::string& key,
                        const std::string& field, const std::string& value) {
  if (field == "cache_capacity") c.cache_capacity = parse_u64(key, value);
  else if (field == "promiscuous") c.promiscuous = parse_bool(key, value);
  else if (field == "reply_from_cache") c.reply_from_cache = parse_bool(key, value);
  else if (field == "gratuitous_rrep") c.gratuitous_rrep = parse_bool(key, value);
  else if (field == "max_salvage") c.max_salvage = static_cast<int>(parse_int(key, value));
  else if (field == "send_buffer_capacity") c.send_buffer_capacity = parse_u64(key, value);
  else if (field == "send_buffer_timeout") c.send_buffer_timeout_s = parse_double(key, value);
  else if (field == "discovery_timeout") c.discovery_timeout_s = parse_double(key, value);
  else if (field == "discovery_timeout_max") c.discovery_timeout_max_s = parse_double(key, value);
  else if (field == "rrep_jitter") c.rrep_jitter_s = parse_double(key, value);
  else apply_flood_override(c.flood, key, field, value);
}

void apply_fsr_override(FsrConfig& c, const std::string& key,
                        const std::string& field, const std::string& value) {
  if (field == "inner_radius") c.inner_radius = static_cast<int>(parse_int(key, value));
  else if (field == "inner_interval") c.inner_interval_s = parse_double(key, value);
  else if (field == "outer_interval") c.outer_interval_s = parse_double(key, value);
  else if (field == "neighbor_hold_factor") c.neighbor_hold_factor = parse_double(key, value);
  else if (field == "entry_expiry_factor") c.entry_expiry_factor = parse_double(key, value);
  else throw ConfigError(key, "unknown protocol override");
}

}  // namespace

ProtocolConfig build_protocol_config(const ScenarioConfig& cfg) {
  ProtocolConfig pc = default_protocol_config(protocol_from_string(cfg.protocol));
  for (const auto& [key, value] : cfg.overrides) {
    const auto dot = key.find('.');
    const std::string prefix = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    if (prefix == "aodv") {
      auto* c = std::get_if<AodvConfig>(&pc);
      if (!c) continue;  // overrides for other protocols are inert
      apply_aodv_override(*c, key, field, value);
    } else if (prefix == "dsr") {
      auto* c = std::get_if<DsrConfig>(&pc);
      if (!c) continue;
      apply_dsr_override(*c, key, field, value);
    } else {
      auto* c = std::get_if<FsrConfig>(&pc);
      if (!c) continue;
      apply_fsr_override(*c, key, field, value);
    }
  }
  std::visit([](const auto& c) { c.validate(); }, pc);
  return pc;
}

}  // namespace adhocsim
