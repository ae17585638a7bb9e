#include "netpen/planning/architecture.hpp"

#include "netpen/core/text.hpp"

#include <stdexcept>

namespace netpen::planning {

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::Clp: return "CLP";
    case Architecture::Hap: return "HAP";
    case Architecture::Mas: return "MAS";
  }
  return "?";
}

Architecture parse_architecture(std::string_view text) {
  const std::string t = text::to_lower(text);
  if (t == "clp") return Architecture::Clp;
  if (t == "hap") return Architecture::Hap;
  if (t == "mas") return Architecture::Mas;
  throw std::invalid_argument("unknown architecture '" + std::string(text) + "' (expected clp, hap or mas)");
}

PlanningResult run_architecture(Architecture a, const PlannerInputs& inputs, PlanBackend& backend,
                                const ArchitectureOptions& options) {
  switch (a) {
    case Architecture::Clp: return plan_clp(inputs, backend);
    case Architecture::Hap: {
      OperatorChannel op;
      return plan_hap(inputs, backend, options.channel ? *options.channel : op, options.hap);
    }
    case Architecture::Mas: return plan_mas(inputs, backend, options.mas);
  }
  throw std::invalid_argument("unknown architecture");
}

}  // namespace netpen::planning
