#include "sphere/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sphere/budgets.hpp"
#include "sphere/core_model.hpp"
#include "sphere/hopper.hpp"
#include "sphere/replicate.hpp"
#include "sphere/report.hpp"
#include "sphere/traverse_sim.hpp"

namespace sphere {

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string mode = "corrected";
  std::string gravity = "paper-lunar";
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::optional<std::string> format;
  bool lomass = false;
};

struct TraverseOptions {
  std::string terrain;
  double length_m = 1.4;
  double set_speed_m_per_min = 1.5;
  double dt_s = 0.1;
};

struct HopCliOptions {
  double angle_deg = 90.0;
  double dt_s = 1e-4;
  std::optional<double> efficiency;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

// Writes `content` to stdout (`--out -`) or to a fresh file in the output directory.
void deliver(const GlobalOptions& g, const std::string& name, std::string_view ext, const std::string& content,
             std::ostream& out, std::ostream& err) {
  if (g.out_dir == "-") {
    out << content;
    return;
  }
  const std::filesystem::path dir(g.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string stem = name + "-" + timestamp();
  std::filesystem::path path = dir / (stem + "." + std::string(ext));
  for (int i = 1; std::filesystem::exists(path); ++i) {
    path = dir / (stem + "-" + std::to_string(i) + "." + std::string(ext));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write output file '" + path.string() + "'");
  file << content;
  if (!file) throw std::runtime_error("failed while writing '" + path.string() + "'");
  err << "wrote " << path.string() << "\n";
}

class Session {
 public:
  Session(const GlobalOptions& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {
    std::string path = g.config_path;
    if (path.empty()) {
      if (const char* env = std::getenv("SPHERE_TOOLKIT_CONFIG")) path = env;
    }
    if (path.empty()) throw ConfigError("no config given (use --config or SPHERE_TOOLKIT_CONFIG)");
    config_path_ = path;
    config_ = load_config(path);
    mode_ = parse_formula_mode(g.mode);
    env_ = gravity_env(g.gravity, config_.gravity);
  }

  const Config& config() const { return config_; }
  const GravityEnvironment& env() const { return env_; }
  FormulaMode mode() const { return mode_; }

  ReportFormat format(ReportFormat fallback = ReportFormat::Text) const {
    return g_.format ? parse_report_format(*g_.format) : fallback;
  }

  ReportDocument document() const {
    ReportDocument doc;
    doc.provenance = {config_path_, std::string(toolkit_version()), mode_};
    return doc;
  }

  const TerrainSpec& terrain(const std::string& name) const {
    if (!name.empty()) return find_terrain(config_, name);
    if (config_.terrains.empty()) throw ConfigError("config defines no terrains");
    return config_.terrains.front();
  }

  MassBudgetFixture mass_fixture() const {
    if (!config_.mass_budget_path) throw ConfigError("config has no budgets.mass fixture");
    return load_mass_fixture(*config_.mass_budget_path);
  }

  PowerBudgetFixture power_fixture() const {
    if (!config_.power_budget_path) throw ConfigError("config has no budgets.power fixture");
    return load_power_fixture(*config_.power_budget_path);
  }

  void emit(const std::string& name, const ReportDocument& doc) const {
    const ReportFormat f = format();
    deliver(g_, name, extension(f), render_report(doc, f), out_, err_);
  }

  void emit_raw(const std::string& name, std::string_view ext, const std::string& content) const {
    deliver(g_, name, ext, content, out_, err_);
  }

 private:
  const GlobalOptions& g_;
  std::ostream& out_;
  std::ostream& err_;
  std::string config_path_;
  Config config_;
  FormulaMode mode_ = FormulaMode::Corrected;
  GravityEnvironment env_;
};

std::string hop_csv(const HopTrajectory& traj) {
  std::ostringstream os;
  os << "t_s,horizontal_m,height_m,vertical_velocity_mps\n";
  char line[160];
  for (const auto& s : traj.samples) {
    std::snprintf(line, sizeof line, "%.6g,%.6g,%.6g,%.6g\n", s.t_s, s.horizontal_m, s.height_m,
                  s.vertical_velocity_mps);
    os << line;
  }
  return os.str();
}

int cmd_size_drivetrain(const Session& s, const std::string& terrain_name) {
  auto doc = s.document();
  DrivetrainSolution sol;
  doc.sections.push_back(drivetrain_section(s.config(), s.terrain(terrain_name), s.env(), s.mode(), &sol));
  s.emit("size-drivetrain", doc);
  if (!s.config().drivetrain.motors.empty() && !sol.feasible) return kExitInfeasible;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sizing, budgets and mobility simulation for small spherical hopping rovers", "sphere-toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "Config file (JSON); falls back to $SPHERE_TOOLKIT_CONFIG");
  app.add_option("--mode", g.mode, "Formula mode")->check(CLI::IsMember({"paper-literal", "corrected"}));
  app.add_option("--gravity", g.gravity, "Gravity environment name");
  app.add_option("--seed", g.seed, "Random seed (base seed for batches)");
  app.add_option("--out", g.out_dir, "Output directory, or - for stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_flag("--lomass", g.lomass, "Enforce testbed travel and gantry-speed limits");

  std::string terrain_name;
  auto* drivetrain = app.add_subcommand("size-drivetrain", "Tractive forces, torque and gear-train selection");
  drivetrain->add_option("--terrain", terrain_name, "Terrain name (default: first in config)");
  auto* grousers = app.add_subcommand("size-grousers", "Grouser spacing bound and count");
  auto* hopper = app.add_subcommand("size-hopper", "Spring stiffness, loads, count and hop heights");

  std::optional<double> battery_wh;
  auto* budget = app.add_subcommand("budget", "Mass, power and hop-endurance budgets");
  budget->require_subcommand(1);
  auto* budget_mass = budget->add_subcommand("mass", "Mass budget against the limit");
  auto* budget_power = budget->add_subcommand("power", "Power budget and operation time");
  auto* budget_hops = budget->add_subcommand("hops", "Hops per charge");
  budget_hops->add_option("--battery-wh", battery_wh, "Usable battery energy (default: power fixture)");

  TraverseOptions trav;
  HopCliOptions hop;
  auto* simulate = app.add_subcommand("simulate", "Seeded traverse or ballistic hop simulation");
  simulate->require_subcommand(1);
  auto* sim_traverse = simulate->add_subcommand("traverse", "Kinematic traverse with stochastic slip");
  sim_traverse->add_option("--terrain", trav.terrain, "Terrain name (default: first in config)");
  sim_traverse->add_option("--length", trav.length_m, "Course length [m]");
  sim_traverse->add_option("--set-speed", trav.set_speed_m_per_min, "Set speed [m/min]");
  sim_traverse->add_option("--dt", trav.dt_s, "Time step [s]");
  auto* sim_hop = simulate->add_subcommand("hop", "Ballistic hop with the designed spring energy");
  sim_hop->add_option("--angle-deg", hop.angle_deg, "Launch angle from horizontal [deg]");
  sim_hop->add_option("--dt", hop.dt_s, "Time step [s]");
  sim_hop->add_option("--efficiency", hop.efficiency, "Launch efficiency (default: config)");

  std::string experiment;
  std::size_t runs = 100;
  bool serial = false;
  auto* replicate = app.add_subcommand("replicate", "Re-run a testbed experiment over seeded traverses");
  replicate->add_option("experiment", experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember({"lunar-sand", "lunar-sand-slope10", "lunar-rocky", "lunar-sand-7mm", "mars-sand"}));
  replicate->add_option("--runs", runs, "Number of seeded runs");
  replicate->add_flag("--serial", serial, "Run the batch on one thread");

  auto* report = app.add_subcommand("report", "Every sizing, budget and replication section in one document");

  for (auto* sub : {drivetrain, grousers, hopper, budget, budget_mass, budget_power, budget_hops, simulate,
                    sim_traverse, sim_hop, replicate, report}) {
    sub->fallthrough();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const Session s(g, out, err);

    if (drivetrain->parsed()) return cmd_size_drivetrain(s, terrain_name);

    if (grousers->parsed()) {
      auto doc = s.document();
      doc.sections.push_back(grouser_section(s.config()));
      s.emit("size-grousers", doc);
      return kExitOk;
    }

    if (hopper->parsed()) {
      auto doc = s.document();
      doc.sections.push_back(hopper_section(s.config(), s.env()));
      s.emit("size-hopper", doc);
      return kExitOk;
    }

    if (budget->parsed()) {
      auto doc = s.document();
      if (budget_mass->parsed()) {
        doc.sections.push_back(mass_section(s.mass_fixture()));
        s.emit("budget-mass", doc);
      } else if (budget_power->parsed()) {
        doc.sections.push_back(power_section(s.power_fixture()));
        s.emit("budget-power", doc);
      } else {
        EnergyStore store = battery_wh ? EnergyStore{*battery_wh, "command line"} : s.power_fixture().store;
        doc.sections.push_back(hops_section(store, s.config().robot));
        s.emit("budget-hops", doc);
      }
      return kExitOk;
    }

    if (simulate->parsed()) {
      if (sim_traverse->parsed()) {
        Course course;
        course.length_m = trav.length_m;
        course.terrain = s.terrain(trav.terrain);
        const SimTrace trace = simulate_traverse(s.config().robot, course, s.env(), trav.set_speed_m_per_min,
                                                 trav.dt_s, g.seed, SlipModel::measured(), TraverseLimits{g.lomass});
        const ReportFormat f = s.format(ReportFormat::Csv);
        if (f == ReportFormat::Csv) {
          s.emit_raw("simulate-traverse", "csv", trace_csv(trace));
        } else {
          auto doc = s.document();
          doc.sections.push_back(traverse_section(trace_summary(trace, trav.set_speed_m_per_min), course, s.env(),
                                                  trav.set_speed_m_per_min, g.seed));
          s.emit("simulate-traverse", doc);
        }
        return kExitOk;
      }
      const HopperDesign d = design_hopper(s.config().robot, gravity_env("earth"), s.config().hopper.spring);
      HopOptions opts;
      opts.launch_angle_rad = deg_to_rad(hop.angle_deg);
      opts.dt_s = hop.dt_s;
      opts.efficiency = hop.efficiency.value_or(s.config().hopper.efficiency);
      const HopTrajectory traj = simulate_hop(d.stored_energy_J, s.config().robot.mass_kg, s.env(), opts);
      const ReportFormat f = s.format(ReportFormat::Csv);
      if (f == ReportFormat::Csv) {
        s.emit_raw("simulate-hop", "csv", hop_csv(traj));
      } else {
        auto doc = s.document();
        ReportSection sec;
        sec.title = "hop";
        sec.add("gravity", s.env().name);
        sec.add("launch_energy", d.stored_energy_J, "J");
        sec.add("efficiency", traj.efficiency, "1");
        sec.add("launch_speed", traj.launch_speed_mps, "m/s");
        sec.add("launch_angle", rad_to_deg(traj.launch_angle_rad), "deg");
        sec.add("apex", traj.apex_height_m, "m");
        sec.add("flight_time", traj.flight_time_s, "s");
        sec.add("range", traj.range_m, "m");
        doc.sections.push_back(sec);
        s.emit("simulate-hop", doc);
      }
      return kExitOk;
    }

    if (replicate->parsed()) {
      ReplicateOptions opts;
      opts.runs = runs;
      opts.base_seed = g.seed;
      opts.parallel = !serial;
      auto doc = s.document();
      doc.sections.push_back(replication_section(replicate_experiment(experiment, s.config().robot, opts)));
      s.emit("replicate-" + experiment, doc);
      return kExitOk;
    }

    if (report->parsed()) {
      auto doc = s.document();
      DrivetrainSolution sol;
      doc.sections.push_back(drivetrain_section(s.config(), s.terrain(""), s.env(), s.mode(), &sol));
      doc.sections.push_back(grouser_section(s.config()));
      doc.sections.push_back(hopper_section(s.config(), gravity_env("mars")));
      if (s.config().mass_budget_path) doc.sections.push_back(mass_section(s.mass_fixture()));
      if (s.config().power_budget_path) {
        const PowerBudgetFixture power = s.power_fixture();
        doc.sections.push_back(power_section(power));
        doc.sections.push_back(hops_section(power.store, s.config().robot));
      }
      ReplicateOptions opts;
      opts.base_seed = g.seed;
      for (const auto& f : experiment_fixtures()) {
        doc.sections.push_back(replication_section(replicate_experiment(f.name, s.config().robot, opts)));
      }
      s.emit("report", doc);
      if (!s.config().drivetrain.motors.empty() && !sol.feasible) return kExitInfeasible;
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvariantError& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace sphere
