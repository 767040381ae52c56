#include "bfsi/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "bfsi/config.hpp"
#include "bfsi/diagnostics.hpp"
#include "bfsi/mms.hpp"
#include "bfsi/snapshot.hpp"
#include "bfsi/timeseries.hpp"

namespace bfsi {
namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

fs::path output_dir(const Config& cfg, const std::string& override_dir) {
  fs::path dir = override_dir.empty() ? fs::path(cfg.output.directory) : fs::path(override_dir);
  if (dir.empty()) dir = ".";
  fs::create_directories(dir);
  return dir;
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06d.bfsi", step);
  return buf;
}

int cmd_run(const Config& cfg, const std::string& out_override, std::ostream& out) {
  const Grid g = build_grid(cfg.domain);
  const fs::path dir = output_dir(cfg, out_override);
  const std::string energy_csv = (dir / "energy.csv").string(), reg_csv = (dir / "regularity.csv").string();
  fs::remove(energy_csv);
  fs::remove(reg_csv);

  const State s0 = build_initial_state(cfg, g);
  const Forcing forcing = build_forcing(cfg, g);
  const int steps = step_count(cfg.scheme);
  out << "projection correction " << fmt(cfg.projection_correction) << "\n";

  write_snapshot(s0, g, (dir / snapshot_name(0)).string());
  if (steps == 0) {
    out << "T_end = 0: wrote the initial snapshot only\n";
    return 0;
  }

  EnergyReport energy = energy_report(s0, forcing, cfg.params, g);
  write_timeseries_row(energy, energy_csv);
  State prev = s0;
  std::vector<Observer> obs;
  // Every step: keep the previous state for the time-derivative monitors.
  obs.push_back({1, [&](int step, const State& s, const StepReport&) {
                   if (step > 0 && step % cfg.output.series_every == 0) {
                     energy = energy_report(s, forcing, cfg.params, g, &energy);
                     write_timeseries_row(energy, energy_csv);
                     write_timeseries_row(regularity_report(s, prev, cfg.scheme, cfg.params, g), reg_csv);
                   }
                   if (step > 0 && cfg.output.snapshot_every > 0 && step % cfg.output.snapshot_every == 0)
                     write_snapshot(s, g, (dir / snapshot_name(step)).string());
                   prev = s;
                 }});
  const RunResult res = run_simulation(s0, forcing, cfg.params, cfg.scheme, g, obs);
  double max_div = 0.0;
  for (const auto& r : res.reports) max_div = std::max(max_div, r.div_residual);
  const EnergyReport last = energy_report(res.final_state, forcing, cfg.params, g);
  out << "steps " << steps << "  t " << fmt(res.final_state.t) << "  max div " << fmt(max_div) << "  energy "
      << fmt(last.energy()) << "\n";
  return 0;
}

int cmd_mms(const Config& cfg, int levels, std::ostream& out) {
  const MmsStudy st = run_mms_study(cfg, levels);
  bool ok = true;
  auto table = [&](const char* title, const std::vector<MmsRow>& rows, double threshold) {
    out << title << "\n  Nx  Ny_f  Ny_s  dt            err_u         err_d         err_w         max_div\n";
    for (const auto& r : rows) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "  %-3d %-5d %-5d %-13.6e %-13.6e %-13.6e %-13.6e %.2e\n", r.domain.Nx,
                    r.domain.Ny_f, r.domain.Ny_s, r.dt, r.err_u, r.err_d, r.err_w, r.max_div);
      out << buf;
    }
    const std::pair<const char*, double MmsRow::*> errs[] = {
        {"u", &MmsRow::err_u}, {"d", &MmsRow::err_d}, {"w", &MmsRow::err_w}};
    for (const auto& [name, m] : errs) {
      out << "  order " << name << ":";
      for (double o : observed_orders(rows, m)) {
        char buf[16];
        std::snprintf(buf, sizeof buf, " %.3f", o);
        out << buf;
        ok = ok && o >= threshold;
      }
      out << "\n";
    }
  };
  table("spatial (y and dt refined together)", st.spatial, 1.8);
  table("temporal (finest grid, dt halved)", st.temporal, 0.9);
  out << (ok ? "orders meet the thresholds (space >= 1.8, time >= 0.9)\n" : "orders below threshold\n");
  return ok ? 0 : 1;
}

int cmd_stability(const Config& cfg, double delta, const std::string& out_override, std::ostream& out) {
  const Grid g = build_grid(cfg.domain);
  const fs::path dir = output_dir(cfg, out_override);
  const std::string csv = (dir / "stability.csv").string();
  fs::remove(csv);
  const StabilityRun run =
      stability_experiment(build_initial_state(cfg, g), delta, build_forcing(cfg, g), cfg.params, cfg.scheme, g);
  bool inside = true;
  for (const auto& r : run.series) {
    if (r.chi_norm * r.chi_norm + r.psi_norm * r.psi_norm > r.gronwall_envelope * run.fit_slack) inside = false;
    write_timeseries_row(r, csv);
  }
  const auto& last = run.series.back();
  double max_div = 0.0;
  for (double d : run.div_residuals) max_div = std::max(max_div, d);
  out << "C' " << fmt(run.C_prime) << "  fitted C " << fmt(run.C_fit) << "\n"
      << "initial distance " << fmt(std::hypot(run.series.front().chi_norm, run.series.front().psi_norm))
      << "  final distance " << fmt(std::hypot(last.chi_norm, last.psi_norm)) << "  max div " << fmt(max_div) << "\n"
      << (inside ? "distance stays inside the Gronwall envelope\n" : "distance leaves the Gronwall envelope\n");
  return inside ? 0 : 1;
}

int cmd_check_compat(const Config& cfg, std::ostream& out) {
  const Grid g = build_grid(cfg.domain);
  const State s = exact_state(cfg, g, 0.0);
  const CompatibilityReport rep =
      check_compatibility(restrict_to(s.v, Region::Fluid, g), restrict_to(s.d, Region::Fluid, g), s.w,
                          restrict_to(s.d, Region::Solid, g), cfg.params, g, 1e-8);
  out << "tangential_stress_residual " << fmt(rep.tangential_stress_residual) << "\n"
      << "thermal_flux_residual " << fmt(rep.thermal_flux_residual) << "\n"
      << "passed " << (rep.passed ? "true" : "false") << "\n";
  return rep.passed ? 0 : 1;
}

int cmd_check_identities(const Config& cfg, std::ostream& out) {
  const Grid g = build_grid(cfg.domain);
  bool ok = true;
  for (const auto& r : run_identity_suite(g, cfg.seed)) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << fmt(r.value) << " (tol " << fmt(r.tolerance) << ")\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boussinesq fluid-structure interaction simulator on a periodic strip", "bfsi"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int levels = 3;
  double delta = 1e-6;

  auto* run = app.add_subcommand("run", "full simulation with energy/regularity series and snapshots");
  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  auto* stab = app.add_subcommand("stability", "two-run perturbation experiment");
  auto* compat = app.add_subcommand("check-compat", "interface compatibility of the initial data");
  auto* ident = app.add_subcommand("check-identities", "operator identity suite");
  for (auto* sc : {run, mms, stab, compat, ident}) sc->add_option("config", config_path, "config file")->required();
  for (auto* sc : {run, stab}) sc->add_option("--output", out_dir, "output directory (overrides [output].directory)");
  mms->add_option("--levels", levels, "number of refinement levels")->check(CLI::Range(2, 8));
  stab->add_option("--delta", delta, "perturbation size")->check(CLI::NonNegativeNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    const Config cfg = load_config(config_path);
    if (*run) return cmd_run(cfg, out_dir, out);
    if (*mms) return cmd_mms(cfg, levels, out);
    if (*stab) return cmd_stability(cfg, delta, out_dir, out);
    if (*compat) return cmd_check_compat(cfg, out);
    return cmd_check_identities(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace bfsi
