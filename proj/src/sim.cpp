#include "adhocsim/sim.hpp"

#include <stdexcept>
#include <string>

namespace adhocsim {

class Simulation::NodeEnv final : public RoutingEnv {
 public:
  NodeEnv(Simulation& sim, NodeId id)
      : sim_(sim), id_(id), rng_(sim.setup_.seed, Subsystem::kRouting, id) {}

  NodeId self() const override { return id_; }
  int node_count() const override { return sim_.node_count(); }
  SimTime now() const override { return sim_.eng_.now(); }
  EventHandle schedule(SimTime at, EventKind kind, std::function<void()> fn) override {
    return sim_.eng_.schedule(at, kind, id_, std::move(fn));
  }
  void cancel(EventHandle h) override { sim_.eng_.cancel(h); }
  void send_frame(Frame f) override { sim_.medium_->send(id_, std::move(f)); }
  void deliver_to_app(const DataPacket& pkt) override {
    sim_.ledger_.on_delivered(pkt, sim_.eng_.now());
  }
  void drop_data(const DataPacket& pkt, DropReason r) override {
    sim_.ledger_.on_dropped(pkt, r);
  }
  RngStream& rng() override { return rng_; }

 private:
  Simulation& sim_;
  NodeId id_;
  RngStream rng_;
};

Simulation::Simulation(SimSetup setup, std::unique_ptr<MobilityModel> mobility)
    : setup_(std::move(setup)), mob_(std::move(mobility)), ledger_(setup_.warmup) {
  if (!mob_) throw std::invalid_argument("Simulation: mobility model required");
  const int n = mob_->node_count();
  if (n < 1) throw std::invalid_argument("Simulation: need at least one node");
  medium_ = std::make_unique<Medium>(eng_, *mob_, setup_.channel, setup_.mac, *this,
                                     setup_.seed);
  envs_.reserve(n);
  protocols_.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    envs_.push_back(std::make_unique<NodeEnv>(*this, i));
    protocols_.push_back(make_protocol(setup_.protocol, *envs_.back()));
  }
  for (const CbrFlow& f : setup_.flows) {
    f.validate();
    if (f.src < 0 || f.src >= n || f.dst < 0 || f.dst >= n)
      throw std::invalid_argument("Simulation: flow endpoints out of range");
  }
}

Simulation::~Simulation() = default;

void Simulation::run() {
  if (ran_) throw std::logic_error("Simulation::run: already ran");
  ran_ = true;
  for (auto& p : protocols_) p->start();
  for (size_t i = 0; i < setup_.flows.size(); ++i) {
    const CbrFlow& f = setup_.flows[i];
    if (f.start < setup_.sim_time && f.start < f.stop)
      eng_.schedule(f.start, EventKind::kTrafficTick, f.src, [this, i] { flow_tick(i); });
  }
  eng_.run_until(setup_.sim_time);
}

void Simulation::flow_tick(size_t flow_idx) {
  const CbrFlow& f = setup_.flows[flow_idx];
  DataPacket pkt;
  pkt.id = next_packet_id_++;
  pkt.origin = f.src;
  pkt.final_dst = f.dst;
  pkt.app_sent = eng_.now();
  pkt.payload_bytes = f.payload_bytes;
  ledger_.on_sent(pkt);
  protocols_[f.src]->send_data(std::move(pkt));
  const SimTime next = eng_.now() + f.interval_s;
  if (next < f.stop && next < setup_.sim_time)
    eng_.schedule(next, EventKind::kTrafficTick, f.src,
                  [this, flow_idx] { flow_tick(flow_idx); });
}

void Simulation::on_frame(NodeId self, const Frame& f, NodeId from) {
  protocols_[self]->on_frame(f, from);
}

void Simulation::on_overhear(NodeId self, const Frame& f, NodeId from) {
  protocols_[self]->on_overhear(f, from);
}

void Simulation::on_tx_failed(NodeId self, const Frame& f, NodeId next_hop) {
  protocols_[self]->on_tx_failed(f, next_hop);
}

void Simulation::on_transmit_start(NodeId self, const Frame& f, int attempt) {
  if (f.kind == FrameKind::kControl && attempt == 1)
    ledger_.on_control_tx(eng_.now());
  if (tap_) tap_(self, f, attempt);
}

void Simulation::on_queue_drop(NodeId, const Frame& f) {
  if (const auto* data = std::get_if<DataPacket>(&f.payload))
    ledger_.on_dropped(*data, DropReason::kMacQueueOverflow);
}

}  // namespace adhocsim
