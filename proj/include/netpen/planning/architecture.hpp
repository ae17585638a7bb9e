#pragma once

#include "netpen/planning/backend.hpp"
#include "netpen/planning/mas.hpp"
#include "netpen/planning/planners.hpp"

#include <string>
#include <string_view>

namespace netpen::planning {

enum class Architecture { Clp, Hap, Mas };

std::string_view to_string(Architecture a);
/// "clp", "hap", "mas" (any case).
Architecture parse_architecture(std::string_view text);

struct ArchitectureOptions {
  HapOptions hap;
  MasOptions mas;
  /// Operator side of HAP; a simulated operator (OperatorChannel) when null.
  FeedbackChannel* channel{nullptr};
};

/// Runs one planner. Round-limit and negotiation failures propagate.
PlanningResult run_architecture(Architecture a, const PlannerInputs& inputs, PlanBackend& backend,
                                const ArchitectureOptions& options = {});

}  // namespace netpen::planning
