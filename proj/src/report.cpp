#include "sphere/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sphere/grouser.hpp"
#include "sphere/hopper.hpp"

#ifndef SPHERE_TOOLKIT_VERSION
#define SPHERE_TOOLKIT_VERSION "0.0.0"
#endif

namespace sphere {

using nlohmann::json;

void ReportSection::add(std::string key, double value, std::string unit) {
  rows.push_back({std::move(key), value, unit.empty() ? "1" : std::move(unit)});
}
void ReportSection::add(std::string key, long value, std::string unit) {
  rows.push_back({std::move(key), value, unit.empty() ? "1" : std::move(unit)});
}
void ReportSection::add(std::string key, std::string value) { rows.push_back({std::move(key), std::move(value), ""}); }
void ReportSection::add(std::string key, bool value) { rows.push_back({std::move(key), value, ""}); }

ReportFormat parse_report_format(std::string_view text) {
  if (text == "text") return ReportFormat::Text;
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw InvariantError("format", "unknown format '" + std::string(text) + "' (expected text, json or csv)");
}

std::string_view extension(ReportFormat format) {
  switch (format) {
    case ReportFormat::Text:
      return "txt";
    case ReportFormat::Json:
      return "json";
    case ReportFormat::Csv:
      return "csv";
  }
  return "txt";
}

std::string_view toolkit_version() { return SPHERE_TOOLKIT_VERSION; }

namespace {

std::string value_text(const RowValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.6g", x);
          return buf;
        } else if constexpr (std::is_same_v<T, long>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "yes" : "no";
        } else {
          return x;
        }
      },
      v);
}

json value_json(const RowValue& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json to_json(const ReportDocument& doc) {
  json sections = json::array();
  for (const auto& s : doc.sections) {
    json rows = json::array();
    for (const auto& r : s.rows) rows.push_back({{"key", r.key}, {"value", value_json(r.value)}, {"unit", r.unit}});
    sections.push_back({{"title", s.title}, {"rows", rows}, {"flags", s.flags}});
  }
  return {{"schema", "sphere-toolkit-report/1"},
          {"provenance",
           {{"config", doc.provenance.config_path},
            {"version", doc.provenance.version},
            {"mode", std::string(to_string(doc.provenance.mode))}}},
          {"sections", sections}};
}

}  // namespace

void write_report(const ReportDocument& doc, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::Json:
      out << to_json(doc).dump(2) << "\n";
      return;
    case ReportFormat::Csv:
      out << "section,key,value,unit\n";
      for (const auto& s : doc.sections) {
        for (const auto& r : s.rows) {
          out << csv_field(s.title) << ',' << csv_field(r.key) << ',' << csv_field(value_text(r.value)) << ','
              << csv_field(r.unit) << '\n';
        }
        for (const auto& f : s.flags) out << csv_field(s.title) << ",flag," << csv_field(f) << ",\n";
      }
      return;
    case ReportFormat::Text:
      break;
  }
  out << "sphere-toolkit " << doc.provenance.version << "  config: " << doc.provenance.config_path
      << "  mode: " << to_string(doc.provenance.mode) << "\n";
  for (const auto& s : doc.sections) {
    out << "\n== " << s.title << " ==\n";
    std::size_t key_w = 0;
    std::size_t val_w = 0;
    for (const auto& r : s.rows) {
      key_w = std::max(key_w, r.key.size());
      val_w = std::max(val_w, value_text(r.value).size());
    }
    for (const auto& r : s.rows) {
      const std::string v = value_text(r.value);
      out << "  " << r.key << std::string(key_w - r.key.size() + 2, ' ') << std::string(val_w - v.size(), ' ') << v;
      if (!r.unit.empty() && r.unit != "1") out << ' ' << r.unit;
      out << '\n';
    }
    for (const auto& f : s.flags) out << "  ! " << f << '\n';
  }
}

std::string render_report(const ReportDocument& doc, ReportFormat format) {
  std::ostringstream os;
  write_report(doc, format, os);
  return os.str();
}

void emit_report(const ReportDocument& doc, ReportFormat format, const std::filesystem::path& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to '" + out_path.string() + "'");
  write_report(doc, format, out);
  if (!out) throw std::runtime_error("failed while writing '" + out_path.string() + "'");
}

ReportDocument parse_report_json(std::string_view text) {
  const json j = json::parse(text);
  ReportDocument doc;
  const auto& p = j.at("provenance");
  doc.provenance.config_path = p.at("config").get<std::string>();
  doc.provenance.version = p.at("version").get<std::string>();
  doc.provenance.mode = parse_formula_mode(p.at("mode").get<std::string>());
  for (const auto& s : j.at("sections")) {
    ReportSection sec;
    sec.title = s.at("title").get<std::string>();
    for (const auto& r : s.at("rows")) {
      const auto& v = r.at("value");
      RowValue value;
      if (v.is_boolean()) {
        value = v.get<bool>();
      } else if (v.is_number_integer()) {
        value = v.get<long>();
      } else if (v.is_number()) {
        value = v.get<double>();
      } else {
        value = v.get<std::string>();
      }
      sec.rows.push_back({r.at("key").get<std::string>(), value, r.at("unit").get<std::string>()});
    }
    sec.flags = s.at("flags").get<std::vector<std::string>>();
    doc.sections.push_back(std::move(sec));
  }
  return doc;
}

ReportSection drivetrain_section(const Config& config, const TerrainSpec& terrain, const GravityEnvironment& env,
                                 FormulaMode mode, DrivetrainSolution* solution_out) {
  ReportSection s;
  s.title = "drivetrain";
  const ForceBreakdown f = tractive_forces(config.robot, terrain, env, mode);
  s.add("mode", std::string(to_string(mode)));
  s.add("terrain", terrain.name);
  s.add("gravity", env.name);
  s.add("g", env.g, "m/s^2");
  s.add("friction_force", f.friction_N, "N");
  s.add("slope_force", f.slope_force_N, "N");
  s.add("accel_force", f.accel_force_N, "N");
  s.add("total_tractive_force", f.total_N, "N");

  if (config.drivetrain.motors.empty()) {
    const TorqueRequirement t = required_torque(f, config.robot, mode);
    const double limit = traction_limit(config.robot, terrain, mode);
    s.add("required_torque_total", t.total_Nm, "N*m");
    s.add("required_torque_per_wheel", t.per_wheel_Nm, "N*m");
    s.add("traction_limit", limit, "N");
    s.add("traction_feasible", f.total_N <= limit);
    s.flags.push_back("no motor catalog configured; gear train not sized");
    return s;
  }

  const DrivetrainSolution sol =
      size_gear_train(config.robot, terrain, env, config.drivetrain.motors, config.drivetrain, mode);
  s.add("required_torque_total", sol.required_torque_total_Nm, "N*m");
  s.add("required_torque_per_wheel", sol.required_torque_per_wheel_Nm, "N*m");
  s.add("traction_limit", sol.traction_limit_N, "N");
  s.add("feasible", sol.feasible);
  s.add("binding_constraint", std::string(to_string(sol.binding)));
  if (sol.motor) {
    s.add("motor", *sol.motor);
    s.add("gear_ratio_primary", sol.gear_ratio_primary, "1");
    s.add("gear_ratio_secondary", sol.gear_ratio_secondary, "1");
    s.add("gear_ratio_total", sol.total_reduction(), "1");
    s.add("output_speed", sol.output_speed_mps, "m/s");
  }
  if (mode == FormulaMode::PaperLiteral) {
    s.flags.push_back("paper-literal mode: friction, slope and traction expressions are not in newtons");
  }
  if (solution_out) *solution_out = sol;
  return s;
}

ReportSection grouser_section(const Config& config) {
  ReportSection s;
  s.title = "grousers";
  const auto& g = config.grouser;
  const GrouserLayout layout = grouser_layout(config.robot.wheel_radius_m, g.height_m, g.sinkage_m, g.slip);
  const GrouserLayout built =
      grouser_layout(config.robot.wheel_radius_m, g.height_m, g.sinkage_m, g.slip, {.paper_rounding = true});
  s.add("grouser_height", g.height_m, "m");
  s.add("normalized_height", layout.normalized_height, "1");
  s.add("normalized_sinkage", layout.normalized_sinkage, "1");
  s.add("slip", layout.slip, "1");
  s.add("max_spacing", rad_to_deg(layout.max_spacing_rad), "deg");
  s.add("count", static_cast<long>(layout.count), "grousers");
  s.add("actual_spacing", rad_to_deg(layout.actual_spacing_rad), "deg");
  s.add("count_whole_degree_rounding", static_cast<long>(built.count), "grousers");
  s.add("spacing_whole_degree_rounding", rad_to_deg(built.actual_spacing_rad), "deg");

  // Published separation table, each row at the slip that reproduces it best.
  struct Row {
    const char* name;
    double h_hat, z_hat, slip, published_deg;
  };
  for (const Row& r : {Row{"10mm", 0.107, 0.1, 0.2, 15.1}, Row{"7mm", 0.074, 0.08, 0.0, 9.4}}) {
    const double phi = rad_to_deg(max_grouser_spacing(r.h_hat, r.z_hat, r.slip));
    s.add(std::string("table_") + r.name + "_spacing", phi, "deg");
    s.add(std::string("table_") + r.name + "_published", r.published_deg, "deg");
    s.add(std::string("table_") + r.name + "_inferred_slip", r.slip, "1");
  }
  if (built.count != layout.count) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "grouser layout: built wheel count %d (spacing rounded to whole degrees) differs from ceil rule %d",
                  built.count, layout.count);
    s.flags.push_back(buf);
  }
  s.flags.push_back("grouser separation table: the 10 mm and 7 mm rows imply different slips (about 0.21 and 0.01)");
  return s;
}

ReportSection hopper_section(const Config& config, const GravityEnvironment& target_env) {
  ReportSection s;
  s.title = "hopper";
  const GravityEnvironment earth = gravity_env("earth");
  const GravityEnvironment mars = gravity_env("mars");
  const GravityEnvironment moon = gravity_env("moon");
  const HopperDesign d = design_hopper(config.robot, earth, config.hopper.spring);
  s.add("design_hop_height_earth", d.design_hop_height_m, "m");
  s.add("stored_energy", d.stored_energy_J, "J");
  s.add("cam_angle", rad_to_deg(d.cam_angle_rad), "deg");
  s.add("spring_constant", d.spring_constant_Nm_per_rad, "N*m/rad");
  if (config.hopper.reference_spring_constant) {
    s.add("spring_constant_published", *config.hopper.reference_spring_constant, "N*m/rad");
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "hopper stiffness: energy balance gives %.1f N*m/rad, published value is %.0f N/rad",
                  d.spring_constant_Nm_per_rad, *config.hopper.reference_spring_constant);
    s.flags.push_back(buf);
  }
  s.add("spring_torque", d.spring_torque_Nm, "N*m");
  s.add("spring_force", d.spring_force_N, "N");
  s.add("spring_count", static_cast<long>(d.spring_count), "springs");
  s.add("psi", d.psi, "1");

  const double at_mars = scale_hop_height(d.design_hop_height_m, earth, mars);
  s.add("ideal_hop_height_mars", at_mars, "m");
  s.add("launch_efficiency", config.hopper.efficiency, "1");
  s.add("expected_hop_height_mars", config.hopper.efficiency * at_mars, "m");
  s.add("measured_hop_band_mars_low", 0.08, "m");
  s.add("measured_hop_band_mars_high", 0.16, "m");
  s.add("hop_height_moon_from_8cm_mars", scale_hop_height(0.08, mars, moon), "m");
  s.add("hop_height_moon_from_10cm_mars", scale_hop_height(0.10, mars, moon), "m");
  s.add("published_moon_band_low", 0.16, "m");
  s.add("published_moon_band_high", 0.20, "m");

  HopOptions opts;
  opts.efficiency = config.hopper.efficiency;
  const HopTrajectory traj = simulate_hop(d.stored_energy_J, config.robot.mass_kg, target_env, opts);
  s.add("simulated_gravity", target_env.name);
  s.add("simulated_apex", traj.apex_height_m, "m");
  s.add("simulated_flight_time", traj.flight_time_s, "s");
  s.add("launch_speed", traj.launch_speed_mps, "m/s");
  return s;
}

ReportSection mass_section(const MassBudgetFixture& fixture) {
  ReportSection s;
  s.title = "mass budget";
  const MassReport r = mass_budget(fixture.lines, fixture.limit_g);
  for (const auto& sh : r.shares) s.add("mass " + sh.unit, sh.mass_g, "g");
  s.add("total_mass", r.total_g, "g");
  s.add("mass_limit", r.limit_g, "g");
  s.add("mass_margin", r.margin_fraction * 100.0, "%");
  if (fixture.printed_total_g && std::abs(*fixture.printed_total_g - r.total_g) > 0.5) {
    s.flags.push_back("mass budget fixture: listed total differs from the sum of its lines");
  }
  if (fixture.printed_margin_pct && std::abs(*fixture.printed_margin_pct - r.margin_fraction * 100.0) > 0.5) {
    s.flags.push_back("mass budget fixture: listed margin differs from (limit - total) / limit");
  }
  return s;
}

ReportSection power_section(const PowerBudgetFixture& fixture) {
  ReportSection s;
  s.title = "power budget";
  const PowerReport r = power_budget(fixture.lines, fixture.store);
  for (std::size_t i = 0; i < r.lines.size(); ++i) {
    const auto& l = r.lines[i];
    if (l.margin_pct) {
      s.add("margin " + l.unit, *l.margin_pct, "%");
    } else {
      s.add("margin " + l.unit, std::string("undefined"));
    }
    s.add("energy " + l.unit, l.energy_Wh_per_hour, "Wh/h");
    if (l.margin_mismatch) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "power budget: %s margin cell %.2f%% differs from formula %.2f%%",
                    l.unit.c_str(), fixture.lines[i].printed_margin_pct.value_or(0.0), l.margin_pct.value_or(0.0));
      s.flags.push_back(buf);
    }
  }
  s.add("total_wh_per_hour", r.total_Wh_per_hour, "Wh/h");
  s.add("battery_usable", fixture.store.usable_Wh, "Wh");
  if (r.operation_minutes) {
    s.add("operation_time", *r.operation_minutes, "min");
    s.add("operation_min", *r.operation_minutes_display(), "min");
  } else {
    s.add("operation_min", std::string("unbounded"));
  }
  return s;
}

ReportSection hops_section(const EnergyStore& store, const RobotParams& robot) {
  ReportSection s;
  s.title = "hop endurance";
  const HopEndurance e = hop_endurance(store, robot.hop_power_W, robot.hop_cycle_s);
  s.add("battery_usable", store.usable_Wh, "Wh");
  s.add("hop_power", robot.hop_power_W, "W");
  s.add("hop_cycle", robot.hop_cycle_s, "s");
  s.add("energy_per_hop", e.energy_per_hop_Wh, "Wh");
  s.add("hop_count", e.hop_count, "hops");
  s.add("continuous_hopping", e.continuous_minutes, "min");
  s.add("published_hop_count", 208L, "hops");
  s.add("published_continuous_hopping", 35.0, "min");
  s.add("energy_implied_by_published_hops", 208.0 * e.energy_per_hop_Wh, "Wh");
  s.flags.push_back(
      "endurance claim: 208 hops / 35 min are not derivable from the stated battery and 16 W x 3 s hop cycle "
      "(208 x 3 s is 10.4 min)");
  return s;
}

ReportSection traverse_section(const TraverseSummary& summary, const Course& course, const GravityEnvironment& env,
                               double set_speed_m_per_min, std::uint64_t seed) {
  ReportSection s;
  s.title = "traverse";
  s.add("terrain", course.terrain.name);
  s.add("gravity", env.name);
  s.add("seed", static_cast<long>(seed), "1");
  s.add("course_length", course.length_m, "m");
  s.add("set_speed", set_speed_m_per_min, "m/min");
  s.add("elapsed", summary.elapsed_s, "s");
  s.add("average_speed", summary.avg_speed_m_per_min, "m/min");
  s.add("average_slip", summary.avg_slip, "1");
  s.add("average_power", summary.avg_power_W, "W");
  s.add("energy", summary.energy_Wh, "Wh");
  return s;
}

ReportSection replication_section(const ReplicationReport& r) {
  ReportSection s;
  s.title = "replicate " + r.experiment;
  s.add("runs", static_cast<long>(r.runs), "1");
  s.add("base_seed", static_cast<long>(r.base_seed), "1");
  s.add("calibrated_motion_power", r.motion_power_W, "W");
  for (const auto& c : r.comparisons) {
    s.add(c.quantity + " mean", c.simulated.mean, c.unit);
    s.add(c.quantity + " sd", c.simulated.sd, c.unit);
    if (c.published) s.add(c.quantity + " published", *c.published, c.unit);
    if (c.relative_error) s.add(c.quantity + " relative_error", *c.relative_error, "1");
  }
  s.flags = r.flags;
  return s;
}

}  // namespace sphere
