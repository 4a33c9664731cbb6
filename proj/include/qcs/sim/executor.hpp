#pragma once

#include "qcs/config.hpp"
#include "qcs/lang/checker.hpp"
#include "qcs/plant.hpp"
#include "qcs/sim/trace.hpp"

namespace qcs::sim {

// Runs a checked program against a plant under the given cost model.
// Deterministic: identical (program, config, cost model, plant, seed) give a
// bit-identical trace. The plant accumulates per-element state history.
EventTrace run(const lang::TypedProgram& tp, const MachineConfig& mc, const CostModel& cm,
               PlantModel& plant, uint64_t seed);

}  // namespace qcs::sim
