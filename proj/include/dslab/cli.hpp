#pragma once

// Subcommand drivers behind tools/dslab_cli. Each driver reads a flat config, runs one
// experiment, and leaves CSVs plus exactly one manifest.json in the output directory.
//
// exit 0 ok, 1 I/O failure, 2 config error, 3 numerical abort.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dslab/attractor.hpp"
#include "dslab/config.hpp"
#include "dslab/ds_solver.hpp"
#include "dslab/multiplier_norm.hpp"
#include "dslab/parallel.hpp"
#include "dslab/smoothing.hpp"
#include "dslab/xsb.hpp"

namespace dslab::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kConfigError = 2, kNumericalError = 3 };

struct Options {
  std::string command;
  std::filesystem::path config;
  std::filesystem::path out = "out";
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

/// CSVs keyed by file name plus everything the manifest needs.
struct RunResult {
  std::map<std::string, CsvTable> tables;
  RunManifest manifest;
};

namespace detail {

inline const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s{
      {"run", {"seed"}},
      {"grid", {"modes", "length"}},
      {"solver", {"c1", "c2", "delta", "dt", "t_end", "dealias", "sample_every"}},
      {"data", {"kind", "s", "amplitude", "envelope_width", "width", "h1_norm"}},
      {"forcing", {"amplitude", "width"}},
      {"output", {"checkpoints"}},
      {"smoothing", {"s", "a", "horizon", "probes", "t_probe", "resolutions"}},
      {"knapp", {"N", "s", "a", "b", "points_per_box", "xi1_step", "xi2_step", "tau_step", "c1", "c2"}},
      {"blocks", {"per_case", "values", "spec_file", "restarts", "max_iters", "tol", "factor", "dxi", "dtau"}},
      {"attractor",
       {"mode", "members", "member_kind", "h1_lo", "h1_hi", "s", "amplitude", "envelope_width", "horizon", "a",
        "late_probes", "balance"}},
  };
  return s;
}

inline void check_schema(const Config& cfg) {
  for (const auto& [name, sec] : cfg.sections()) {
    auto it = schema().find(name);
    if (it == schema().end()) throw ConfigError("config: unknown section [" + name + "]");
    for (const auto& k : cfg.unknown_keys(name, it->second))
      throw ConfigError("config: unknown key '" + k + "' in [" + name + "]");
  }
}

inline std::uint64_t root_seed(const Config& cfg) { return cfg.get_u64("run", "seed", 1); }

inline GridSpec read_grid(const Config& cfg, int modes = 64) {
  return GridSpec::make(static_cast<int>(cfg.get_int("grid", "modes", modes)),
                        cfg.get_double("grid", "length", 2.0 * std::numbers::pi * 4.0));
}

inline SolverConfig read_solver(const Config& cfg, double default_delta = 0.0) {
  SolverConfig s;
  s.c1 = cfg.get_double("solver", "c1", 1.0);
  s.c2 = cfg.get_double("solver", "c2", 1.0);
  s.delta = cfg.get_double("solver", "delta", default_delta);
  s.dt = cfg.get_double("solver", "dt", 1e-3);
  s.t_end = cfg.get_double("solver", "t_end", 1.0);
  s.dealias = cfg.get_bool("solver", "dealias", true);
  const long long every = cfg.get_int("solver", "sample_every", 100);
  if (every < 1 || every > 1'000'000'000) throw ConfigError("solver: sample_every must lie in [1, 1e9]");
  s.sample_every = static_cast<int>(every);
  return s;
}

inline ForcingSpec read_forcing(const Config& cfg, double default_amplitude) {
  ForcingSpec f;
  f.amplitude = cfg.get_double("forcing", "amplitude", default_amplitude);
  f.width = cfg.get_double("forcing", "width", 2.0);
  f.validate();
  return f;
}

inline RoughDataSpec read_rough(const Config& cfg, double s, std::uint64_t seed) {
  RoughDataSpec r;
  r.s = s;
  r.amplitude = cfg.get_double("data", "amplitude", 0.05);
  r.envelope_width = cfg.get_double("data", "envelope_width", 0.0);
  r.seed = seed;
  r.validate();
  return r;
}

inline SpectralField read_datum(const Config& cfg, const GridSpec& grid, std::uint64_t seed) {
  const std::string kind = cfg.get_string("data", "kind", "rough");
  SpectralField u = SpectralField::zeros(grid);
  if (kind == "zero") {
  } else if (kind == "rough") {
    MemberSpec m;
    m.data = read_rough(cfg, cfg.get_double("data", "s", 0.6), seed);
    m.h1_norm = cfg.get_double("data", "h1_norm", 0.0);
    u = make_member_data(m, grid);
  } else if (kind == "gaussian") {
    const double amp = cfg.get_double("data", "amplitude", 1.0);
    const double w = cfg.get_double("data", "width", 2.0);
    if (!(w > 0.0)) throw ConfigError("data: width must be positive");
    const double c = 0.5 * grid.length;
    u = SpectralField::from_function(grid, [&](double x, double y) {
      return Complex(amp * std::exp(-((x - c) * (x - c) + (y - c) * (y - c)) / (2.0 * w * w)), 0.0);
    });
  } else {
    throw ConfigError("data: kind must be zero, rough or gaussian, got '" + kind + "'");
  }
  u.make_physical();
  return u;
}

inline std::size_t sample_count(const SolverConfig& s) {
  const std::size_t n = s.step_count(), e = static_cast<std::size_t>(s.sample_every);
  return n / e + 1 + (n % e ? 1 : 0);
}

inline void fill_grid(RunManifest& m, const GridSpec& g) {
  m.grid_modes = g.modes;
  m.grid_length = g.length;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------

inline RunResult cmd_simulate(const Config& cfg, const std::filesystem::path& out, std::ostream&) {
  const GridSpec grid = detail::read_grid(cfg);
  SolverConfig sc = detail::read_solver(cfg);
  const ForcingSpec fs = detail::read_forcing(cfg, 0.0);
  sc.forcing = make_forcing(fs, grid);
  const std::string ck = cfg.get_string("output", "checkpoints", "final");
  if (ck != "final" && ck != "all" && ck != "none")
    throw ConfigError("output: checkpoints must be final, all or none, got '" + ck + "'");
  sc.store_fields = false;
  sc.validate();
  const SpectralField u0 = detail::read_datum(cfg, grid, detail::root_seed(cfg));

  RunResult r;
  CsvTable diag({"step", "t", "mass", "h1", "energy"});
  const std::size_t n = sc.step_count();
  Observer obs = [&](std::size_t k, double t, const SpectralField& u) {
    if (ck == "all" || (ck == "final" && k == n)) {
      char name[64];
      std::snprintf(name, sizeof name, "checkpoint_%08zu.bin", k);
      save_checkpoint((out / name).string(), u, t);
    }
  };
  const Trajectory traj = evolve(u0, sc, {obs});
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& d = traj.diagnostics[i];
    diag.add(traj.steps[i], traj.times[i], d.mass, d.h1, d.energy);
  }
  r.manifest.steps = n;
  r.manifest.outputs["diagnostics.csv"] = detail::sample_count(sc);
  r.manifest.summary = {{"final_mass", traj.diagnostics.back().mass},
                        {"final_h1", traj.diagnostics.back().h1},
                        {"final_energy", traj.diagnostics.back().energy},
                        {"samples", traj.size()}};
  detail::fill_grid(r.manifest, grid);
  r.tables.emplace("diagnostics.csv", std::move(diag));
  return r;
}

inline RunResult cmd_smoothing(const Config& cfg, const std::filesystem::path&, std::ostream& err) {
  const GridSpec grid = detail::read_grid(cfg);
  SolverConfig sc = detail::read_solver(cfg);
  if (sc.delta != 0.0) throw ConfigError("smoothing: conservative flow required (delta = 0)");
  const double s = cfg.get_double("smoothing", "s", 0.6);
  const double a = cfg.get_double("smoothing", "a", 0.3);
  if (!(a > 0.0)) throw ConfigError("smoothing: a must be positive");
  const double horizon = cfg.get_double("smoothing", "horizon", 2.0);
  const long long probes = cfg.get_int("smoothing", "probes", 8);
  if (probes < 1) throw ConfigError("smoothing: probes must be >= 1");
  const RoughDataSpec rough = detail::read_rough(cfg, s, detail::root_seed(cfg));

  RunResult r;
  if (!in_theorem_regime(s, a)) {
    char w[160];
    std::snprintf(w, sizeof w, "a = %g >= min(1/2, s - 1/2) = %g; run is exploratory", a, std::min(0.5, s - 0.5));
    err << "warning: " << w << "\n";
    r.manifest.warnings.push_back(w);
  }

  sc.t_end = horizon;
  const std::size_t n = sc.step_count();
  if (n % static_cast<std::size_t>(probes) != 0)
    throw ConfigError("smoothing: horizon / dt = " + std::to_string(n) + " steps is not a multiple of probes = " +
                      std::to_string(probes));
  sc.sample_every = static_cast<int>(n / static_cast<std::size_t>(probes));
  sc.store_fields = true;
  const SpectralField u0 = make_rough_data(rough, grid);
  const Trajectory traj = evolve(u0, sc);
  const SmoothingReport rep = smoothing_report(traj, u0, s, a);

  CsvTable series({"t", "nonlinear_norm", "linear_norm", "data_norm", "envelope", "violation"});
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    series.add(rep.times[i], rep.nonlinear_norm[i], rep.linear_norm[i], rep.data_norm[i], rep.envelope[i],
               static_cast<bool>(rep.violation[i]));
  r.manifest.outputs["smoothing.csv"] = static_cast<std::size_t>(probes);
  r.manifest.steps = n;
  r.manifest.summary = {{"s", s},
                        {"a", a},
                        {"exploratory", !rep.in_theorem_regime},
                        {"beta", rep.beta},
                        {"beta_measured", rep.beta_measured},
                        {"envelope_exponent", rep.exponent},
                        {"envelope_constant", rep.constant},
                        {"violations", rep.violations()}};
  r.tables.emplace("smoothing.csv", std::move(series));

  if (cfg.has("smoothing", "resolutions")) {
    std::vector<int> res;
    for (double m : cfg.get_list("smoothing", "resolutions", {})) {
      if (m != std::floor(m) || m < 4 || m > 8192) throw ConfigError("smoothing: resolutions must be integers in [4, 8192]");
      res.push_back(static_cast<int>(m));
    }
    const double t_probe = cfg.get_double("smoothing", "t_probe", horizon);
    const RefinementTable t = refinement_study(rough, res, grid.length, t_probe, s, a, sc);
    CsvTable ref({"modes", "linear_norm", "nonlinear_norm"});
    for (const auto& row : t.rows) ref.add(row.modes, row.linear, row.nonlinear);
    r.manifest.outputs["refinement.csv"] = res.size();
    r.manifest.summary["refinement"] = {{"t_probe", t_probe},
                                        {"linear_slope", t.linear_slope},
                                        {"nonlinear_slope", t.nonlinear_slope},
                                        {"nonlinear_change", t.nonlinear_change()}};
    r.tables.emplace("refinement.csv", std::move(ref));
  }
  detail::fill_grid(r.manifest, grid);
  return r;
}

inline RunResult cmd_knapp(const Config& cfg, const std::filesystem::path&, std::ostream&) {
  KnappConfig k;
  k.s = cfg.get_double("knapp", "s", 0.6);
  k.a = cfg.get_double("knapp", "a", 0.3);
  k.b = cfg.get_double("knapp", "b", 0.51);
  k.points_per_box = static_cast<int>(cfg.get_int("knapp", "points_per_box", k.points_per_box));
  k.xi1_step = cfg.get_double("knapp", "xi1_step", k.xi1_step);
  k.xi2_step = cfg.get_double("knapp", "xi2_step", k.xi2_step);
  k.tau_step = cfg.get_double("knapp", "tau_step", k.tau_step);
  const double c1 = cfg.get_double("knapp", "c1", 1.0), c2 = cfg.get_double("knapp", "c2", 1.0);
  const std::vector<double> Ns = cfg.get_list("knapp", "N", {8, 16, 32, 64});
  for (double N : Ns) {
    KnappConfig c = k;
    c.N = N;
    c.validate();
  }
  const KnappSweep sw = knapp_sweep(Ns, k, c1, c2);

  RunResult r;
  CsvTable t({"N", "norm_u", "norm_v", "norm_w", "volume_q1", "volume_q2", "numerator", "ratio"});
  for (const auto& row : sw.rows)
    t.add(row.N, row.norm_u, row.norm_v, row.norm_w, row.volume_q1, row.volume_q2, row.numerator, row.ratio);
  r.manifest.outputs["knapp.csv"] = Ns.size();
  r.manifest.summary = {{"s", k.s},
                        {"a", k.a},
                        {"b", k.b},
                        {"slope_u", sw.slope_u},
                        {"slope_v", sw.slope_v},
                        {"slope_numerator", sw.slope_numerator},
                        {"slope_ratio", sw.slope_ratio},
                        {"expected_slope_u", k.s - 0.5},
                        {"expected_slope_v", -0.25},
                        {"expected_slope_ratio", k.a - 0.5}};
  r.tables.emplace("knapp.csv", std::move(t));
  return r;
}

inline RunResult cmd_blocks(const Config& cfg, const std::filesystem::path& config_path, std::ostream&) {
  const std::uint64_t seed = detail::root_seed(cfg);
  BlockLattice g;
  g.dxi = cfg.get_double("blocks", "dxi", g.dxi);
  g.dtau = cfg.get_double("blocks", "dtau", g.dtau);
  g.validate();
  KzOptions opt;
  opt.restarts = static_cast<int>(cfg.get_int("blocks", "restarts", opt.restarts));
  opt.max_iters = static_cast<int>(cfg.get_int("blocks", "max_iters", opt.max_iters));
  opt.tol = cfg.get_double("blocks", "tol", opt.tol);
  opt.seed = seed;
  const double factor = cfg.get_double("blocks", "factor", 1.3);

  std::vector<DyadicBlockSpec> specs;
  if (auto file = cfg.raw("blocks", "spec_file")) {
    std::filesystem::path p(*file);
    if (p.is_relative()) p = config_path.parent_path() / p;
    std::ifstream in(p);
    if (!in) throw ConfigError("blocks: cannot open spec file: " + p.string());
    specs = read_block_specs(in);
    if (specs.empty()) throw ConfigError("blocks: spec file lists no blocks: " + p.string());
  } else {
    const long long per_case = cfg.get_int("blocks", "per_case", 20);
    if (per_case < 1 || per_case > 100000) throw ConfigError("blocks: per_case must lie in [1, 100000]");
    specs = sample_block_specs(static_cast<int>(per_case), seed, cfg.get_list("blocks", "values", {1, 2, 4}), g);
  }
  const BlockReport rep = check_block_bounds(specs, g, opt);

  RunResult r;
  CsvTable t({"N1", "N2", "N3", "L1", "L2", "L3", "H", "signs", "case", "support", "estimate", "bound", "ratio",
              "calibration"});
  for (const auto& row : rep.rows) {
    const auto& s = row.spec;
    t.add(s.N[0], s.N[1], s.N[2], s.L[0], s.L[1], s.L[2], s.H, to_string(s.signs), case_name(row.kind), row.support,
          row.estimate, row.bound, row.ratio, row.calibration);
  }
  r.manifest.outputs["blocks.csv"] = specs.size();
  r.manifest.summary = {{"c_star", rep.c_star},
                        {"worst", rep.worst},
                        {"factor", factor},
                        {"within", rep.within(factor)},
                        {"empty", rep.empty},
                        {"lattice", {{"dxi", g.dxi}, {"dtau", g.dtau}}}};
  r.tables.emplace("blocks.csv", std::move(t));
  return r;
}

inline RunResult cmd_attractor(const Config& cfg, const std::filesystem::path&, std::ostream&) {
  EnsembleConfig ens;
  ens.grid = detail::read_grid(cfg);
  const SolverConfig sc = detail::read_solver(cfg, 0.2);
  ens.c1 = sc.c1;
  ens.c2 = sc.c2;
  ens.delta = sc.delta;
  if (!(ens.delta > 0.0)) throw ConfigError("dissipative mode requires delta > 0");
  ens.dt = cfg.has("solver", "dt") ? sc.dt : ens.dt;
  ens.sample_every = cfg.has("solver", "sample_every") ? sc.sample_every : ens.sample_every;
  ens.dealias = sc.dealias;
  ens.forcing = detail::read_forcing(cfg, 0.1);
  ens.horizon = cfg.get_double("attractor", "horizon", ens.horizon);
  ens.a = cfg.get_double("attractor", "a", ens.a);
  ens.late_probes = cfg.get_list("attractor", "late_probes", ens.late_probes);

  const std::uint64_t seed = detail::root_seed(cfg);
  const long long count = cfg.get_int("attractor", "members", 8);
  if (count < 1 || count > 10000) throw ConfigError("attractor: members must lie in [1, 10000]");
  const std::string kind = cfg.get_string("attractor", "member_kind", "spread");
  if (kind == "spread") {
    ens.members = EnsembleConfig::spread_members(static_cast<int>(count), cfg.get_double("attractor", "h1_lo", 0.5),
                                                 cfg.get_double("attractor", "h1_hi", 5.0),
                                                 cfg.get_double("attractor", "s", 2.0), seed,
                                                 cfg.get_double("attractor", "envelope_width", 3.0));
  } else if (kind == "rough") {
    for (long long i = 0; i < count; ++i) {
      MemberSpec m;
      m.data.s = cfg.get_double("attractor", "s", 1.0);
      m.data.amplitude = cfg.get_double("attractor", "amplitude", 0.05);
      m.data.envelope_width = cfg.get_double("attractor", "envelope_width", 3.0);
      m.data.seed = seed + static_cast<std::uint64_t>(i);
      ens.members.push_back(m);
    }
  } else {
    throw ConfigError("attractor: member_kind must be spread or rough, got '" + kind + "'");
  }
  const std::string mode = cfg.get_string("attractor", "mode", "absorbing");
  if (mode != "absorbing" && mode != "compactness" && mode != "both")
    throw ConfigError("attractor: mode must be absorbing, compactness or both, got '" + mode + "'");
  ens.validate();

  RunResult r;
  const SolverConfig solver = ens.solver();
  const std::size_t samples = detail::sample_count(solver);
  r.manifest.steps = solver.step_count() * ens.members.size();
  nlohmann::json summary = {{"a", ens.a}, {"delta", ens.delta}, {"members", ens.members.size()}};

  if (mode != "compactness") {
    const AbsorbingReport rep = absorbing_experiment(ens);
    CsvTable series({"member", "t", "h1", "energy"});
    CsvTable fits({"member", "h1_data", "A", "B", "C", "rms", "ok", "entry_time", "contained"});
    for (std::size_t i = 0; i < rep.members.size(); ++i) {
      const auto& m = rep.members[i];
      for (std::size_t j = 0; j < m.times.size(); ++j) series.add(i, m.times[j], m.h1[j], m.energy[j]);
      const auto& f = rep.fits[i];
      fits.add(i, m.h1.front(), f.A, f.B, f.C, f.rms, f.ok, f.entry_time, static_cast<bool>(rep.contained[i]));
    }
    r.manifest.outputs["absorbing_series.csv"] = samples * ens.members.size();
    r.manifest.outputs["absorbing_fits.csv"] = ens.members.size();
    r.tables.emplace("absorbing_series.csv", std::move(series));
    r.tables.emplace("absorbing_fits.csv", std::move(fits));
    summary["forcing_l2"] = rep.forcing_l2;
    summary["absorbing"] = {{"c_min", rep.c_min},         {"c_max", rep.c_max},
                            {"c_mean", rep.c_mean},       {"c_spread", rep.c_spread()},
                            {"b_min", rep.b_min},         {"all_fits_ok", rep.all_fits_ok()},
                            {"all_contained", rep.all_contained()}};
  }
  if (mode != "absorbing") {
    const CompactnessReport rep = compactness_probe(ens);
    CsvTable series({"member", "t", "h1", "n_norm", "w_norm"});
    CsvTable rows({"member", "sup_n", "w0", "h1_data", "h1_final"});
    for (std::size_t i = 0; i < rep.members.size(); ++i) {
      const auto& m = rep.members[i];
      for (std::size_t j = 0; j < m.times.size(); ++j) series.add(i, m.times[j], m.h1[j], m.n_norm[j], m.w_norm[j]);
      const auto& row = rep.rows[i];
      rows.add(i, row.sup_n, row.w0, row.h1_data, row.h1_final);
    }
    CsvTable dist({"t", "median", "max"});
    for (const auto& d : rep.distances) dist.add(d.t, d.median, d.max);
    r.manifest.outputs["compactness_series.csv"] = samples * ens.members.size();
    r.manifest.outputs["compactness.csv"] = ens.members.size();
    r.manifest.outputs["late_distances.csv"] = rep.distances.size();
    r.tables.emplace("compactness_series.csv", std::move(series));
    r.tables.emplace("compactness.csv", std::move(rows));
    r.tables.emplace("late_distances.csv", std::move(dist));
    summary["forcing_l2"] = rep.forcing_l2;
    summary["compactness"] = {{"max_sup_n", rep.max_sup_n()}, {"max_w0", rep.max_w0()}};
  }

  if (cfg.get_bool("attractor", "balance", false)) {
    SolverConfig bc = solver;
    bc.store_fields = true;
    const Trajectory traj = evolve(make_member_data(ens.members.front(), ens.grid), bc);
    const EnergyReport er = energy_balance_residual(traj, bc);
    CsvTable bal({"t", "energy", "source", "residual"});
    for (std::size_t i = 0; i < er.times.size(); ++i) bal.add(er.times[i], er.energy[i], er.source[i], er.residual[i]);
    r.manifest.outputs["energy_balance.csv"] = er.times.size();
    r.tables.emplace("energy_balance.csv", std::move(bal));
    summary["energy_balance"] = {{"max_residual", er.max_residual}, {"max_energy", er.max_energy}};
  }
  r.manifest.summary = summary;
  detail::fill_grid(r.manifest, ens.grid);
  return r;
}

// ---------------------------------------------------------------------------------------------

inline int run(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    Config cfg = Config::load(opt.config);
    detail::check_schema(cfg);
    if (opt.seed) cfg.set("run", "seed", std::to_string(*opt.seed));
    if (!cfg.has("run", "seed")) cfg.set("run", "seed", "1");
    if (opt.threads) set_max_threads(*opt.threads);

    std::filesystem::create_directories(opt.out);
    RunResult r;
    if (opt.command == "simulate") {
      r = cmd_simulate(cfg, opt.out, err);
    } else if (opt.command == "smoothing") {
      r = cmd_smoothing(cfg, opt.out, err);
    } else if (opt.command == "knapp") {
      r = cmd_knapp(cfg, opt.out, err);
    } else if (opt.command == "blocks") {
      r = cmd_blocks(cfg, opt.config, err);
    } else if (opt.command == "attractor") {
      r = cmd_attractor(cfg, opt.out, err);
    } else {
      throw ConfigError("unknown command '" + opt.command + "'");
    }

    for (const auto& [name, table] : r.tables) {
      auto declared = r.manifest.outputs.find(name);
      if (declared == r.manifest.outputs.end() || declared->second != table.rows())
        throw std::logic_error("row count of " + name + " does not match its declared probe count");
      table.write(opt.out / name);
    }
    r.manifest.command = opt.command;
    r.manifest.config = cfg.serialize();
    r.manifest.seed = detail::root_seed(cfg);
    r.manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.manifest.write(opt.out);
    out << opt.command << ": wrote " << r.tables.size() << " table(s) to " << opt.out.string() << " (hash "
        << r.manifest.input_hash() << ")\n";
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical abort: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
}

/// Parses argv with CLI11 and dispatches to run().
inline int main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"dslab: experiments for the damped, forced Davey-Stewartson system"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  for (const char* name : {"simulate", "smoothing", "knapp", "blocks", "attractor"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "config file (flat INI)")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--threads", threads, "worker thread cap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "root seed, overrides [run] seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  auto* sub = app.get_subcommands().front();
  opt.command = sub->get_name();
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--threads")) opt.threads = threads;
  return run(opt, out, err);
}

}  // namespace dslab::cli
