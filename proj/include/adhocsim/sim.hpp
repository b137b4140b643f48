#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "adhocsim/channel.hpp"
#include "adhocsim/engine.hpp"
#include "adhocsim/medium.hpp"
#include "adhocsim/metrics.hpp"
#include "adhocsim/mobility.hpp"
#include "adhocsim/protocol.hpp"
#include "adhocsim/traffic.hpp"

namespace adhocsim {

/// Programmatic scenario: everything one engine instance needs. The file/CLI
/// layer compiles a ScenarioConfig down to this.
struct SimSetup {
  uint64_t seed = 1;
  SimTime sim_time = 200.0;
  SimTime warmup = 0.0;
  ChannelModel channel = ChannelModel::unit_disk(250.0);
  MacConfig mac;
  ProtocolConfig protocol = AodvConfig::standard();
  std::vector<CbrFlow> flows;
};

/// One self-contained simulation run: engine, mobility, medium, one routing
/// instance per node, CBR traffic, and the metrics ledger. Strictly
/// single-threaded; whole instances may run on different threads.
class Simulation final : public MediumSink {
 public:
  Simulation(SimSetup setup, std::unique_ptr<MobilityModel> mobility);
  ~Simulation() override;

  /// Runs to sim_time. Callable once.
  void run();

  Engine& engine() { return eng_; }
  MetricsLedger& ledger() { return ledger_; }
  Medium& medium() { return *medium_; }
  MobilityModel& mobility() { return *mob_; }
  RoutingProtocol& protocol(NodeId id) { return *protocols_[id]; }
  const SimSetup& setup() const { return setup_; }
  int node_count() const { return mob_->node_count(); }

  /// Test hook: observe every physical transmission start.
  using TxTap = std::function<void(NodeId, const Frame&, int attempt)>;
  void set_tx_tap(TxTap tap) { tap_ = std::move(tap); }

 private:
  class NodeEnv;

  // MediumSink
  void on_frame(NodeId self, const Frame& f, NodeId from) override;
  void on_overhear(NodeId self, const Frame& f, NodeId from) override;
  void on_tx_failed(NodeId self, const Frame& f, NodeId next_hop) override;
  void on_transmit_start(NodeId self, const Frame& f, int attempt) override;
  void on_queue_drop(NodeId self, const Frame& f) override;

  void flow_tick(size_t flow_idx);

  SimSetup setup_;
  Engine eng_;
  std::unique_ptr<MobilityModel> mob_;
  MetricsLedger ledger_;
  std::unique_ptr<Medium> medium_;
  std::vector<std::unique_ptr<NodeEnv>> envs_;
  std::vector<std::unique_ptr<RoutingProtocol>> protocols_;
  uint64_t next_packet_id_ = 1;
  bool ran_ = false;
  TxTap tap_;
};

}  // namespace adhocsim
