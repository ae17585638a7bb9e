#pragma once

#include "netpen/dynamics/vehicle_params.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace netpen::dynamics {

/// Parses the flat `key = value` parameter format (one entry per line, `#`
/// comments). Keys follow the table names: m, Ix, Iy, Iz, Xdu ... Ndr,
/// Xu ... Nr, Xuu, Yvv, Zww, Kpp, Mqq, Nrr, W, B, zg. Missing keys keep the
/// BlueROV2 defaults; when `m` is given without W/B both become m*g.
/// Unknown keys or malformed numbers raise SchemaError.
VehicleParamsd parse_params(std::string_view text);

VehicleParamsd load_params(const std::filesystem::path& path);

std::string format_params(const VehicleParamsd& params);

}  // namespace netpen::dynamics
