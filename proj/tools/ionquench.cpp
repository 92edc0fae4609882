// Command-line driver: ground-state caching, single quench realizations,
// ensemble sweeps, closed-form predictors, and re-fitting of existing CSVs.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ionquench/config.hpp"
#include "ionquench/driver.hpp"
#include "ionquench/field.hpp"
#include "ionquench/io.hpp"
#include "ionquench/predict.hpp"
#include "ionquench/sweep.hpp"

namespace {

constexpr const char* kVersion = "ionquench 1.0";

void add_config_flags(CLI::App* cmd, ionq::AppConfig& cfg,
                      std::string& config_path) {
  cmd->add_option("--config", config_path, "flat key=value config file");
  cmd->add_option("--N", cfg.N);
  cmd->add_option("--N_C", cfg.N_C);
  cmd->add_option("--delta0", cfg.delta0);
  cmd->add_option("--delta0_frac", cfg.delta0_frac);
  cmd->add_option("--tau_Q", cfg.tau_Q);
  cmd->add_option("--eta", cfg.eta);
  cmd->add_option("--noise_amp", cfg.noise_amp);
  cmd->add_option("--dt", cfg.dt);
  cmd->add_option("--max_hold_time", cfg.max_hold_time);
  cmd->add_option("--snapshot_stride", cfg.snapshot_stride);
  cmd->add_option("--seed", cfg.seed);
  cmd->add_option("--tau_grid", cfg.tau_grid);
  cmd->add_option("--realizations", cfg.realizations);
  cmd->add_option("--master_seed", cfg.master_seed)
      ->each([&cfg](const std::string&) { cfg.master_seed_set = true; });
  cmd->add_option("--model", cfg.model);
  cmd->add_option("--workers", cfg.workers);
  cmd->add_option("--fit_min_tau", cfg.fit_min_tau);
  cmd->add_option("--fit_max_tau", cfg.fit_max_tau);
  cmd->add_option("--ring_nodes", cfg.ring_nodes);
  cmd->add_option("--ring_spacing", cfg.ring_spacing);
  cmd->add_option("--field_dx", cfg.field_dx);
  cmd->add_option("--field_dt", cfg.field_dt);
  cmd->add_option("--regime", cfg.regime);
  cmd->add_option("--geometry", cfg.geometry);
}

double central_nu_c_sq(const ionq::AppConfig& cfg) {
  if (cfg.model == "field" && cfg.ring_nodes > 0) {
    const double nu_c = ionq::thermodynamic_critical_frequency(cfg.ring_spacing);
    return nu_c * nu_c;
  }
  return ionq::solve_ground_state(cfg.N).nu_c0_sq;
}

ionq::Regime parse_regime(const std::string& s) {
  if (s == "overdamped") return ionq::Regime::overdamped;
  if (s == "underdamped") return ionq::Regime::underdamped;
  throw ionq::ConfigError("regime must be overdamped or underdamped");
}

ionq::Geometry parse_geometry(const std::string& s) {
  if (s == "trapped") return ionq::Geometry::trapped;
  if (s == "homogeneous") return ionq::Geometry::homogeneous;
  throw ionq::ConfigError("geometry must be trapped or homogeneous");
}

int cmd_ground_state(const ionq::AppConfig& cfg, const std::string& out_path) {
  const auto profile = ionq::solve_ground_state(cfg.N);
  const auto j = ionq::profile_to_json(profile);
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_quench(const ionq::AppConfig& cfg, const std::string& out_prefix) {
  const double nu_c0_sq = ionq::solve_ground_state(cfg.N).nu_c0_sq;
  const auto setup =
      ionq::build_quench_setup(cfg.trap_config(nu_c0_sq), cfg.langevin_params());
  ionq::RunOptions opts;
  opts.max_hold_time = cfg.max_hold_time;
  opts.snapshot_stride = cfg.snapshot_stride;
  const auto run = ionq::run_quench(setup, cfg.seed, opts);
  const auto census = ionq::census_of_run(setup, run);

  if (!out_prefix.empty()) {
    std::ofstream snap(out_prefix + "_snapshots.txt");
    ionq::write_snapshot_header(snap, std::size_t(cfg.N));
    for (const auto& s : run.snapshots) ionq::write_snapshot_row(snap, s);
    ionq::write_snapshot_row(snap, run.final_state);
  }
  nlohmann::json j = {{"tau_Q", setup.schedule.tau_q},
                      {"stop_time", run.stop_time},
                      {"steps", run.steps},
                      {"n_defects", census.defects.size()},
                      {"density", census.density},
                      {"charges", census.charge_string()},
                      {"window_begin", census.window.begin},
                      {"window_end", census.window.end}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const ionq::AppConfig& cfg, const std::string& out_prefix) {
  if (!cfg.master_seed_set)
    throw ionq::ConfigError("sweep requires an explicit master_seed");
  const auto sweep_cfg = cfg.sweep_config(central_nu_c_sq(cfg));
  const auto result = ionq::run_sweep(sweep_cfg);

  const std::string prefix = out_prefix.empty() ? "sweep" : out_prefix;
  {
    std::ofstream raw(prefix + "_raw.csv");
    ionq::write_raw_csv(raw, result);
    std::ofstream agg(prefix + "_aggregate.csv");
    ionq::write_aggregate_csv(agg, result);
  }
  nlohmann::json summary = {
      {"version", kVersion},
      {"master_seed", cfg.master_seed},
      {"model", cfg.model},
      {"eta", cfg.eta},
      {"delta0", sweep_cfg.trap.delta0},
      {"realizations", cfg.realizations},
      {"tau_grid", sweep_cfg.tau_grid},
      {"fit_ok", result.fit_ok},
      {"saturation_flagged_rows", result.saturation_flags}};
  if (result.fit_ok) {
    summary["exponent"] = result.fit.exponent;
    summary["intercept"] = result.fit.intercept;
    summary["regression_coefficient"] = result.fit.r;
    summary["rows_used"] = result.fit.n_used;
    summary["zero_rows_excluded"] = result.fit.n_excluded_zero;
  } else {
    summary["fit_error"] = result.fit_error;
  }
  {
    std::ofstream js(prefix + "_summary.json");
    js << summary.dump(2) << "\n";
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_predict(const ionq::AppConfig& cfg) {
  ionq::IkzmParams p;
  const auto regime = parse_regime(cfg.regime);
  const auto geometry = parse_geometry(cfg.geometry);
  if (geometry == ionq::Geometry::trapped) {
    const auto profile = ionq::solve_ground_state(cfg.N);
    p.spacing = profile.central_spacing;
    p.omega0 = profile.omega0;
    p.half_length = profile.half_length;
    p.nu_c0_sq = profile.nu_c0_sq;
    p.delta0 = cfg.resolved_delta0(profile.nu_c0_sq);
  } else {
    p.spacing = cfg.ring_spacing;
    p.omega0 = std::pow(cfg.ring_spacing, -1.5);
    const double nu_c = ionq::thermodynamic_critical_frequency(cfg.ring_spacing);
    p.nu_c0_sq = nu_c * nu_c;
    p.delta0 = cfg.resolved_delta0(p.nu_c0_sq);
  }
  p.tau_q = cfg.tau_Q;
  p.eta = cfg.eta;

  const auto freeze = ionq::freeze_out(regime, p);
  const auto density = ionq::predicted_density(regime, geometry, p);
  std::cout << "regime                = " << cfg.regime << "\n"
            << "geometry              = " << cfg.geometry << "\n"
            << "spacing a             = " << p.spacing << "\n"
            << "omega0                = " << p.omega0 << "\n"
            << "nu_c0_sq              = " << p.nu_c0_sq << "\n"
            << "delta0                = " << p.delta0 << "\n"
            << "tau_Q                 = " << p.tau_q << "\n"
            << "eta                   = " << p.eta << "\n"
            << "t_hat                 = " << freeze.t_hat << "\n"
            << "xi_hat                = " << freeze.xi_hat << "\n"
            << "v_hat                 = " << freeze.v_hat << "\n"
            << "predicted_density     = " << density.density << "\n"
            << "predicted_exponent    = " << density.exponent << "\n";
  if (geometry == ionq::Geometry::trapped)
    std::cout << "x_star                = " << density.x_star << "\n";
  if (freeze.marginal)
    std::cout << "warning: regime inequality holds by less than a factor 3 ("
              << freeze.diagnostics << ")\n";
  if (density.validity_warning)
    std::cout << "warning: X* is not << 1; the trapped scaling may not apply\n";
  return 0;
}

int cmd_fit(const ionq::AppConfig& cfg, const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ionq::ConfigError("cannot open " + csv_path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<ionq::ScalingRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ionq::ScalingRow row;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    row.tau_q = std::stod(field);
    std::getline(ss, field, ',');
    row.mean_density = std::stod(field);
    std::getline(ss, field, ',');
    row.std_error = std::stod(field);
    if (std::getline(ss, field, ',')) row.n_valid = std::stoi(field);
    rows.push_back(row);
  }
  ionq::FitWindow window;
  if (cfg.fit_min_tau > 0.0) window.min_tau = cfg.fit_min_tau;
  if (cfg.fit_max_tau > 0.0) window.max_tau = cfg.fit_max_tau;
  const auto fit = ionq::fit_power_law(rows, window);
  nlohmann::json j = {{"exponent", fit.exponent},
                      {"intercept", fit.intercept},
                      {"regression_coefficient", fit.r},
                      {"rows_used", fit.n_used},
                      {"zero_rows_excluded", fit.n_excluded_zero}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ion-chain quench simulator and scaling harness"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ionq::AppConfig cfg;
  std::string config_path, out_path, csv_path;

  auto* ground = app.add_subcommand("ground-state", "solve and emit the chain profile");
  auto* quench = app.add_subcommand("quench", "run a single quench realization");
  auto* sweep = app.add_subcommand("sweep", "ensemble sweep over a tau_Q grid");
  auto* predict = app.add_subcommand("predict", "closed-form IKZM quantities");
  auto* fit = app.add_subcommand("fit", "re-fit an existing aggregate CSV");
  for (auto* cmd : {ground, quench, sweep, predict, fit})
    add_config_flags(cmd, cfg, config_path);
  ground->add_option("-o,--output", out_path);
  quench->add_option("-o,--output", out_path, "output prefix for snapshots");
  sweep->add_option("-o,--output", out_path, "output prefix for CSV/JSON");
  fit->add_option("csv", csv_path, "aggregate CSV to fit")->required();

  // Two-pass parse so the config file loads first and flags override it.
  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      ionq::AppConfig from_file;
      from_file.load_file(config_path);
      cfg = from_file;
      app.clear();
      app.parse(argc, argv);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ionq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*ground) return cmd_ground_state(cfg, out_path);
    if (*quench) return cmd_quench(cfg, out_path);
    if (*sweep) return cmd_sweep(cfg, out_path);
    if (*predict) return cmd_predict(cfg);
    if (*fit) return cmd_fit(cfg, csv_path);
  } catch (const ionq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ionq::DataQualityError& e) {
    std::cerr << "data-quality error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
