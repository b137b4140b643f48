#include "adhocsim/protocol.hpp"

#include <stdexcept>

#include "adhocsim/aodv.hpp"
#include "adhocsim/dsr.hpp"
#include "adhocsim/fsr.hpp"

namespace adhocsim {

std::string to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::kAodv: return "aodv";
    case ProtocolKind::kModAodv: return "mod-aodv";
    case ProtocolKind::kDsr: return "dsr";
    case ProtocolKind::kModDsr: return "mod-dsr";
    case ProtocolKind::kFsr: return "fsr";
    case ProtocolKind::kModFsr: return "mod-fsr";
  }
  return "?";
}

ProtocolKind protocol_from_string(const std::string& name) {
  if (name == "aodv") return ProtocolKind::kAodv;
  if (name == "mod-aodv") return ProtocolKind::kModAodv;
  if (name == "dsr") return ProtocolKind::kDsr;
  if (name == "mod-dsr") return ProtocolKind::kModDsr;
  if (name == "fsr") return ProtocolKind::kFsr;
  if (name == "mod-fsr") return ProtocolKind::kModFsr;
  throw std::invalid_argument("unknown protocol '" + name +
                              "' (expected aodv|mod-aodv|dsr|mod-dsr|fsr|mod-fsr)");
}

ProtocolConfig default_protocol_config(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::kAodv: return AodvConfig::standard();
    case ProtocolKind::kModAodv: return AodvConfig::mod();
    case ProtocolKind::kDsr: return DsrConfig::standard();
    case ProtocolKind::kModDsr: return DsrConfig::mod();
    case ProtocolKind::kFsr: return FsrConfig::standard();
    case ProtocolKind::kModFsr: return FsrConfig::mod();
  }
  throw std::logic_error("unreachable");
}

std::unique_ptr<RoutingProtocol> make_protocol(const ProtocolConfig& cfg,
                                               RoutingEnv& env) {
  return std::visit(
      [&](const auto& c) -> std::unique_ptr<RoutingProtocol> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AodvConfig>)
          return std::make_unique<aodv::AodvProtocol>(c, env);
        else if constexpr (std::is_same_v<T, DsrConfig>)
          return std::make_unique<dsr::DsrProtocol>(c, env);
        else
          return std::make_unique<fsr::FsrProtocol>(c, env);
      },
      cfg);
}

}  // namespace adhocsim
