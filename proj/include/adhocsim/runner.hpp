#pragma once

#include <memory>

#include "adhocsim/csv.hpp"
#include "adhocsim/scenario.hpp"
#include "adhocsim/sim.hpp"

namespace adhocsim {

/// Compiles a validated ScenarioConfig down to the engine-level pieces.
SimSetup build_setup(const ScenarioConfig& cfg);
std::unique_ptr<MobilityModel> build_mobility(const ScenarioConfig& cfg);

/// Derives the result row from a finished run's ledger; exposed so audits can
/// recompute rows from the same counters the runner used.
ResultRow row_from_ledger(const ScenarioConfig& cfg, const MetricsLedger& ledger);

/// One complete deterministic simulation.
ResultRow run_scenario(const ScenarioConfig& cfg);

}  // namespace adhocsim
