#include "sphere/budgets.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sphere/core_model.hpp"

namespace sphere {

using nlohmann::json;

MassReport mass_budget(std::span<const MassLine> lines, double limit_g) {
  if (!(limit_g > 0.0)) throw InvariantError("limit_g", "mass limit must be > 0");
  MassReport r;
  r.limit_g = limit_g;
  for (const auto& l : lines) {
    if (!(l.mass_g > 0.0)) throw InvariantError("mass_g", "mass line '" + l.unit + "' must be > 0");
    if (!(l.margin_factor >= 1.0)) throw InvariantError("margin_factor", "margin factor must be >= 1");
    r.total_g += l.mass_g;
  }
  r.margin_fraction = (limit_g - r.total_g) / limit_g;
  for (const auto& l : lines) {
    r.shares.push_back({l.unit, l.mass_g, l.mass_g / r.total_g});
  }
  return r;
}

std::optional<long> PowerReport::operation_minutes_display() const {
  if (!operation_minutes) return std::nullopt;
  return std::lround(*operation_minutes);
}

PowerReport power_budget(std::span<const PowerLine> lines, const EnergyStore& store) {
  if (!(store.usable_Wh > 0.0)) throw InvariantError("usable_Wh", "usable energy must be > 0");
  PowerReport r;
  for (const auto& l : lines) {
    if (!(l.duty_cycle >= 0.0 && l.duty_cycle <= 1.0)) {
      throw InvariantError("duty_cycle", "duty cycle of '" + l.unit + "' must be in [0, 1]");
    }
    if (!(l.allotted_W >= l.calculated_W)) {
      throw InvariantError("allotted_W", "allotted power of '" + l.unit + "' is below the calculated power");
    }
    PowerLineReport lr;
    lr.unit = l.unit;
    if (l.calculated_W > 0.0) {
      lr.margin_pct = (l.allotted_W - l.calculated_W) / l.calculated_W * 100.0;
    }
    lr.energy_Wh_per_hour = l.calculated_W * l.duty_cycle;
    if (l.printed_margin_pct) {
      lr.margin_mismatch = !lr.margin_pct || std::abs(*lr.margin_pct - *l.printed_margin_pct) > 0.005;
    }
    r.total_Wh_per_hour += lr.energy_Wh_per_hour;
    r.lines.push_back(std::move(lr));
  }
  if (r.total_Wh_per_hour > 0.0) {
    r.operation_minutes = store.usable_Wh / r.total_Wh_per_hour * 60.0;
  }
  return r;
}

HopEndurance hop_endurance(const EnergyStore& store, double hop_power_W, double hop_cycle_s) {
  if (!(store.usable_Wh > 0.0)) throw InvariantError("usable_Wh", "usable energy must be > 0");
  if (!(hop_power_W > 0.0)) throw InvariantError("hop_power_W", "hop power must be > 0");
  if (!(hop_cycle_s > 0.0)) throw InvariantError("hop_cycle_s", "hop cycle must be > 0");
  HopEndurance e;
  e.energy_per_hop_Wh = hop_power_W * hop_cycle_s / 3600.0;
  // Divide in joules so exact multiples stay exact.
  const double hops = store.usable_Wh * 3600.0 / (hop_power_W * hop_cycle_s);
  const double nearest = std::round(hops);
  const double whole = std::abs(hops - nearest) <= 1e-12 * std::max(1.0, hops) ? nearest : std::floor(hops);
  e.hop_count = static_cast<long>(whole);
  e.continuous_minutes = static_cast<double>(e.hop_count) * hop_cycle_s / 60.0;
  return e;
}

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open budget fixture '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("budget fixture '" + path.string() + "': " + e.what());
  }
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (j.contains(key) && j.at(key).is_number()) return j.at(key).get<double>();
  return std::nullopt;
}

}  // namespace

MassBudgetFixture load_mass_fixture(const std::filesystem::path& path) {
  const json j = read_json(path);
  MassBudgetFixture f;
  try {
    f.limit_g = j.at("limit_g").get<double>();
    for (const auto& row : j.at("lines")) {
      f.lines.push_back({row.at("subsystem").get<std::string>(), row.at("unit").get<std::string>(),
                         row.at("margin").get<double>(), row.at("mass_g").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ConfigError("mass budget fixture '" + path.string() + "': " + e.what());
  }
  f.printed_total_g = optional_number(j, "printed_total_g");
  f.printed_margin_pct = optional_number(j, "printed_margin_pct");
  return f;
}

PowerBudgetFixture load_power_fixture(const std::filesystem::path& path) {
  const json j = read_json(path);
  PowerBudgetFixture f;
  try {
    f.power_unit_W = j.value("power_unit_W", 1.0);
    f.store.usable_Wh = j.at("battery").at("usable_Wh").get<double>();
    f.store.chemistry_note = j.at("battery").value("note", std::string{});
    for (const auto& row : j.at("lines")) {
      PowerLine l;
      l.unit = row.at("unit").get<std::string>();
      l.duty_cycle = row.at("duty_cycle").get<double>();
      l.calculated_W = row.at("calculated").get<double>() * f.power_unit_W;
      l.allotted_W = row.at("allotted").get<double>() * f.power_unit_W;
      l.printed_margin_pct = optional_number(row, "printed_margin_pct");
      f.lines.push_back(std::move(l));
    }
  } catch (const json::exception& e) {
    throw ConfigError("power budget fixture '" + path.string() + "': " + e.what());
  }
  f.printed_total_Wh = optional_number(j, "printed_total_Wh");
  f.printed_operation_min = optional_number(j, "printed_operation_min");
  return f;
}

}  // namespace sphere
