#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sphere/budgets.hpp"
#include "sphere/core_model.hpp"
#include "sphere/drivetrain.hpp"
#include "sphere/replicate.hpp"
#include "sphere/traverse_sim.hpp"

namespace sphere {

using RowValue = std::variant<double, long, bool, std::string>;

/// One key/value line. Numeric rows always carry a unit ("1" for dimensionless).
struct ReportRow {
  std::string key;
  RowValue value;
  std::string unit;
};

struct ReportSection {
  std::string title;
  std::vector<ReportRow> rows;
  /// Disagreements between published figures and what the model derives.
  std::vector<std::string> flags;

  void add(std::string key, double value, std::string unit);
  void add(std::string key, long value, std::string unit);
  void add(std::string key, std::string value);
  void add(std::string key, bool value);
};

struct Provenance {
  std::string config_path;
  std::string version;
  FormulaMode mode = FormulaMode::Corrected;
};

struct ReportDocument {
  std::vector<ReportSection> sections;
  Provenance provenance;
};

enum class ReportFormat { Text, Json, Csv };
ReportFormat parse_report_format(std::string_view text);
std::string_view extension(ReportFormat format);

std::string_view toolkit_version();

void write_report(const ReportDocument& doc, ReportFormat format, std::ostream& out);
std::string render_report(const ReportDocument& doc, ReportFormat format);
/// Writes to `out_path`; throws std::runtime_error if it cannot be opened.
void emit_report(const ReportDocument& doc, ReportFormat format, const std::filesystem::path& out_path);

/// Parses the JSON form back (used to check the schema round-trips).
ReportDocument parse_report_json(std::string_view text);

// Section builders. Every number they add comes straight from a library call.

ReportSection drivetrain_section(const Config& config, const TerrainSpec& terrain, const GravityEnvironment& env,
                                 FormulaMode mode, DrivetrainSolution* solution_out = nullptr);
ReportSection grouser_section(const Config& config);
ReportSection hopper_section(const Config& config, const GravityEnvironment& target_env);
ReportSection mass_section(const MassBudgetFixture& fixture);
ReportSection power_section(const PowerBudgetFixture& fixture);
ReportSection hops_section(const EnergyStore& store, const RobotParams& robot);
ReportSection traverse_section(const TraverseSummary& summary, const Course& course, const GravityEnvironment& env,
                               double set_speed_m_per_min, std::uint64_t seed);
ReportSection replication_section(const ReplicationReport& report);

}  // namespace sphere
