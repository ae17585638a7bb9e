#include "netpen/dynamics/params_io.hpp"

#include "netpen/core/errors.hpp"
#include "netpen/core/text.hpp"

#include <fmt/format.h>

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

namespace netpen::dynamics {
namespace {

using Field = double VehicleParamsd::*;

constexpr std::array<std::pair<std::string_view, Field>, 25> kFields{{
    {"m", &VehicleParamsd::mass},   {"Ix", &VehicleParamsd::Ix},
    {"Iy", &VehicleParamsd::Iy},    {"Iz", &VehicleParamsd::Iz},
    {"Xdu", &VehicleParamsd::Xdu},  {"Ydv", &VehicleParamsd::Ydv},
    {"Zdw", &VehicleParamsd::Zdw},  {"Kdp", &VehicleParamsd::Kdp},
    {"Mdq", &VehicleParamsd::Mdq},  {"Ndr", &VehicleParamsd::Ndr},
    {"Xu", &VehicleParamsd::Xu},    {"Yv", &VehicleParamsd::Yv},
    {"Zw", &VehicleParamsd::Zw},    {"Kp", &VehicleParamsd::Kp},
    {"Mq", &VehicleParamsd::Mq},    {"Nr", &VehicleParamsd::Nr},
    {"Xuu", &VehicleParamsd::Xuu},  {"Yvv", &VehicleParamsd::Yvv},
    {"Zww", &VehicleParamsd::Zww},  {"Kpp", &VehicleParamsd::Kpp},
    {"Mqq", &VehicleParamsd::Mqq},  {"Nrr", &VehicleParamsd::Nrr},
    {"W", &VehicleParamsd::weight}, {"B", &VehicleParamsd::buoyancy},
    {"zg", &VehicleParamsd::zg},
}};

}  // namespace

VehicleParamsd parse_params(std::string_view text) {
  VehicleParamsd p;
  bool has_mass = false, has_w = false, has_b = false;
  int line_no = 0;
  for (std::string_view raw : text::split_lines(text)) {
    ++line_no;
    const std::string_view line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string location = fmt::format("line {}", line_no);
    if (eq == std::string_view::npos) throw SchemaError(location, "expected 'key = value'");
    const std::string_view key = text::trim(line.substr(0, eq));
    const double value = text::parse_double(text::trim(line.substr(eq + 1)), location);
    bool known = false;
    for (const auto& [name, field] : kFields) {
      if (name == key) {
        p.*field = value;
        known = true;
        break;
      }
    }
    if (!known) throw SchemaError(location, fmt::format("unknown parameter '{}'", key));
    has_mass |= key == "m";
    has_w |= key == "W";
    has_b |= key == "B";
  }
  if (has_mass && !has_w) p.weight = p.mass * kGravity;
  if (has_mass && !has_b) p.buoyancy = has_w ? p.weight : p.mass * kGravity;
  p.validate();
  return p;
}

VehicleParamsd load_params(const std::filesystem::path& path) {
  return parse_params(text::read_file(path));
}

std::string format_params(const VehicleParamsd& params) {
  std::string out;
  for (const auto& [name, field] : kFields) {
    out += fmt::format("{} = {}\n", name, params.*field);
  }
  return out;
}

}  // namespace netpen::dynamics
