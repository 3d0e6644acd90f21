#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sphere {

/// One row of a mass budget. `mass_g` already includes the margin factor.
struct MassLine {
  std::string subsystem;
  std::string unit;
  double margin_factor = 1.0;
  double mass_g = 0.0;
};

struct MassShare {
  std::string unit;
  double mass_g;
  double fraction_of_total;
};

struct MassReport {
  double total_g = 0.0;
  double limit_g = 0.0;
  /// (limit - total) / limit; negative when over the limit.
  double margin_fraction = 1.0;
  std::vector<MassShare> shares;
};

MassReport mass_budget(std::span<const MassLine> lines, double limit_g);

struct PowerLine {
  std::string unit;
  double duty_cycle = 1.0;
  double calculated_W = 0.0;
  double allotted_W = 0.0;
  /// Margin cell as published, in percent, for cross-checking.
  std::optional<double> printed_margin_pct;
};

struct EnergyStore {
  double usable_Wh = 0.0;
  std::string chemistry_note;
};

struct PowerLineReport {
  std::string unit;
  /// (allotted - calculated) / calculated, in percent; empty when calculated = 0.
  std::optional<double> margin_pct;
  double energy_Wh_per_hour = 0.0;
  /// Set when the published margin cell disagrees with the formula by more than 0.005 points.
  bool margin_mismatch = false;
};

struct PowerReport {
  std::vector<PowerLineReport> lines;
  double total_Wh_per_hour = 0.0;
  /// Empty when nothing draws power (unbounded operation).
  std::optional<double> operation_minutes;

  std::optional<long> operation_minutes_display() const;
};

PowerReport power_budget(std::span<const PowerLine> lines, const EnergyStore& store);

struct HopEndurance {
  long hop_count = 0;
  double continuous_minutes = 0.0;
  double energy_per_hop_Wh = 0.0;
};

HopEndurance hop_endurance(const EnergyStore& store, double hop_power_W, double hop_cycle_s);

struct MassBudgetFixture {
  std::vector<MassLine> lines;
  double limit_g = 0.0;
  std::optional<double> printed_total_g;
  std::optional<double> printed_margin_pct;
};

/// Power rows with their published units already applied (see `power_unit_W`).
struct PowerBudgetFixture {
  std::vector<PowerLine> lines;
  EnergyStore store;
  double power_unit_W = 1.0;
  std::optional<double> printed_total_Wh;
  std::optional<double> printed_operation_min;
};

MassBudgetFixture load_mass_fixture(const std::filesystem::path& path);
PowerBudgetFixture load_power_fixture(const std::filesystem::path& path);

}  // namespace sphere
