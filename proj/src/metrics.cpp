#include "adhocsim/metrics.hpp"

#include <stdexcept>

namespace adhocsim {

void MetricsLedger::on_sent(const DataPacket& p) {
  if (counted(p)) ++data_sent_;
}

void MetricsLedger::on_delivered(const DataPacket& p, SimTime now) {
  if (!counted(p)) return;
  if (!delivered_ids_.insert(p.id).second) return;  // duplicate arrival
  ++data_delivered_;
  delivered_bytes_ += p.payload_bytes;
  latencies_.push_back(
      LatencyRecord{p.id, p.origin, p.final_dst, p.app_sent, now, p.hops_traveled});
}

void MetricsLedger::on_dropped(const DataPacket& p, DropReason r) {
  if (!counted(p)) return;
  if (delivered_ids_.count(p.id)) return;  // already accounted as delivered
  ++data_dropped_;
  ++drops_[static_cast<size_t>(r)];
}

void MetricsLedger::on_control_tx(SimTime now) {
  if (now >= warmup_) ++control_tx_;
}

double MetricsLedger::throughput_bps(double duration) const {
  if (duration <= 0.0)
    throw std::invalid_argument("throughput: duration must be positive");
  return static_cast<double>(delivered_bytes_) * 8.0 / duration;
}

std::optional<double> MetricsLedger::e2ed_ms() const {
  if (latencies_.empty()) return std::nullopt;
  double sum = 0.0;
  for (const LatencyRecord& r : latencies_) sum += r.delivered_at - r.sent_at;
  return 1000.0 * sum / static_cast<double>(latencies_.size());
}

std::optional<double> MetricsLedger::nrl() const {
  if (data_delivered_ == 0) return std::nullopt;
  return static_cast<double>(control_tx_) / static_cast<double>(data_delivered_);
}

std::optional<double> MetricsLedger::pdr() const {
  if (data_sent_ == 0) return std::nullopt;
  return static_cast<double>(data_delivered_) / static_cast<double>(data_sent_);
}

}  // namespace adhocsim
