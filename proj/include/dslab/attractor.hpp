#pragma once

// Long-time experiments for the damped, forced flow: the energy balance law, absorbing-ball
// envelopes |u(t)|_{H^1} <= A e^{-Bt} + C, and the H^{1+a} bound on the nonlinear part n = v - w
// of the shifted variable v = u + (1 - Lap)^{-1} f.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dslab/ds_solver.hpp"
#include "dslab/energy.hpp"
#include "dslab/parallel.hpp"
#include "dslab/smoothing.hpp"
#include "dslab/spectral_core.hpp"

namespace dslab {

/// Real Gaussian bump f(x) = amplitude exp(-|x - c|^2 / (2 width^2)) centred in the box.
struct ForcingSpec {
  double amplitude = 0.1;
  double width = 2.0;

  void validate() const {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ConfigError("forcing: amplitude must be >= 0");
    if (!(width > 0.0) || !std::isfinite(width)) throw ConfigError("forcing: width must be positive");
  }
};

inline std::optional<SpectralField> make_forcing(const ForcingSpec& spec, const GridSpec& grid) {
  spec.validate();
  if (spec.amplitude == 0.0) return std::nullopt;
  const double c = 0.5 * grid.length, w2 = 2.0 * spec.width * spec.width;
  SpectralField f = SpectralField::from_function(grid, [&](double x, double y) {
    return spec.amplitude * std::exp(-((x - c) * (x - c) + (y - c) * (y - c)) / w2);
  });
  return dealias(std::move(f));
}

/// g = (1 - Lap)^{-1} f, i.e. g_hat = f_hat / <xi>^2 (physical representation).
inline SpectralField forcing_corrector(const SpectralField& f) {
  SpectralField g = apply_symbol(to_fourier(f), [](double a, double b) { return 1.0 / (1.0 + a * a + b * b); });
  g.make_physical();
  return g;
}

/// One ensemble member: rough data at regularity data.s, optionally rescaled to a target H^1 norm.
struct MemberSpec {
  RoughDataSpec data{};
  double h1_norm = 0.0;  ///< 0 keeps data.amplitude as given

  void validate() const {
    data.validate();
    if (!(h1_norm >= 0.0)) throw ConfigError("member: h1_norm must be >= 0");
  }
};

inline SpectralField make_member_data(const MemberSpec& m, const GridSpec& grid) {
  m.validate();
  SpectralField u = make_rough_data(m.data, grid);
  if (m.h1_norm > 0.0) {
    const double n = sobolev_norm(u, 1.0);
    if (!(n > 0.0)) throw ConfigError("member: cannot rescale a zero datum to a positive H^1 norm");
    for (auto& z : u.values()) z *= m.h1_norm / n;
  }
  return u;
}

struct EnsembleConfig {
  GridSpec grid = GridSpec::make(64, 2.0 * std::numbers::pi * 4.0);
  double c1 = 1.0, c2 = 1.0;
  double delta = 0.2;
  ForcingSpec forcing{};
  std::vector<MemberSpec> members;
  double horizon = 40.0;
  double dt = 0.01;
  int sample_every = 10;
  double a = 0.4;  ///< smoothing exponent for the compactness probe
  bool dealias = true;
  std::vector<double> late_probes{10.0, 20.0, 40.0};

  /// `count` members with H^1 norms spaced geometrically over [lo, hi] and seeds 1..count.
  static std::vector<MemberSpec> spread_members(int count = 8, double lo = 0.5, double hi = 5.0, double s = 2.0,
                                                std::uint64_t seed = 1, double envelope_width = 3.0) {
    if (count < 1) throw ConfigError("ensemble: member count must be >= 1");
    std::vector<MemberSpec> out;
    for (int i = 0; i < count; ++i) {
      MemberSpec m;
      m.data.s = s;
      m.data.amplitude = 1.0;
      m.data.seed = seed + static_cast<std::uint64_t>(i);
      m.data.envelope_width = envelope_width;
      m.h1_norm = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
      out.push_back(m);
    }
    return out;
  }

  void validate() const {
    grid.validate();
    if (!(delta > 0.0)) throw ConfigError("dissipative mode requires delta > 0");
    if (!(a > 0.0 && a < 0.5)) throw ConfigError("ensemble: smoothing exponent a must lie in (0, 1/2)");
    if (members.empty()) throw ConfigError("ensemble: no members");
    for (const auto& m : members) m.validate();
    forcing.validate();
    if (!(horizon > 0.0)) throw ConfigError("ensemble: horizon must be positive");
    for (double t : late_probes)
      if (!(t > 0.0)) throw ConfigError("ensemble: late probes must be positive");
    solver().validate();
  }

  SolverConfig solver() const {
    SolverConfig cfg;
    cfg.c1 = c1;
    cfg.c2 = c2;
    cfg.delta = delta;
    cfg.forcing = make_forcing(forcing, grid);
    cfg.dt = dt;
    cfg.t_end = horizon;
    cfg.dealias = dealias;
    cfg.sample_every = sample_every;
    cfg.store_fields = false;
    return cfg;
  }
};

// ---------------------------------------------------------------------------------------------
// Energy balance

struct EnvelopeFit {
  double A = 0.0, B = 0.0, C = 0.0;
  double rms = 0.0;  ///< root-mean-square residual of the fit
  bool ok = false;
  double entry_time = 0.0;  ///< first t with |A| e^{-Bt} <= 0.1 C
};

struct EnergyReport {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> source;    ///< F
  std::vector<double> residual;  ///< dE/dt + 2 delta E - F at interior samples (NaN at the ends)
  double max_residual = 0.0;
  double max_energy = 0.0;
  std::optional<EnvelopeFit> fit;
};

/// Residual of dE/dt = -2 delta E + F with three-point differences on the stored samples.
inline EnergyReport energy_balance_residual(const Trajectory& traj, const SolverConfig& cfg) {
  cfg.validate();
  if (traj.size() < 3) throw ConfigError("energy balance: need at least 3 samples");
  if (traj.fields.size() != traj.size()) throw ConfigError("energy balance: trajectory has no stored fields");
  for (std::size_t i = 1; i < traj.size(); ++i)
    if (traj.times[i] - traj.times[i - 1] > 10.0 * cfg.dt * (1.0 + 1e-9))
      throw ConfigError("energy balance: sampling too sparse (spacing exceeds 10 dt)");

  const SpectralField* f = cfg.forcing ? &*cfg.forcing : nullptr;
  EnergyReport r;
  r.times = traj.times;
  for (const auto& u : traj.fields) {
    r.energy.push_back(energy_functional(u, f, cfg.c1, cfg.c2));
    r.source.push_back(energy_source(u, f, cfg.c1, cfg.c2, cfg.delta));
    r.max_energy = std::max(r.max_energy, std::abs(r.energy.back()));
  }
  const std::size_t n = traj.size();
  r.residual.assign(n, std::nan(""));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = r.times[i] - r.times[i - 1], h1 = r.times[i + 1] - r.times[i];
    const double d = -h1 / (h0 * (h0 + h1)) * r.energy[i - 1] + (h1 - h0) / (h0 * h1) * r.energy[i] +
                     h0 / (h1 * (h0 + h1)) * r.energy[i + 1];
    r.residual[i] = d + 2.0 * cfg.delta * r.energy[i] - r.source[i];
    r.max_residual = std::max(r.max_residual, std::abs(r.residual[i]));
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Absorbing ball

namespace detail {
/// Linear least squares for y ~ C + A e^{-Bt} at fixed B; returns the residual sum of squares.
inline double envelope_ls(const std::vector<double>& t, const std::vector<double>& y, double B, double& A,
                          double& C) {
  double s1 = 0, se = 0, see = 0, sy = 0, sey = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::exp(-B * t[i]);
    se += e;
    see += e * e;
    sy += y[i];
    sey += e * y[i];
  }
  s1 = n;
  const double det = s1 * see - se * se;
  if (!(std::abs(det) > 1e-14 * s1 * see)) {
    A = 0.0;
    C = sy / n;
  } else {
    C = (see * sy - se * sey) / det;
    A = (s1 * sey - se * sy) / det;
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - C - A * std::exp(-B * t[i]);
    rss += r * r;
  }
  return rss;
}
}  // namespace detail

/// Fits y(t) ~ C + A e^{-Bt} by variable projection: (A, C) solve a linear least-squares problem
/// for each B, and B minimizes the projected residual (log-spaced scan, then golden section).
/// The fit fails (ok = false) for non-decaying series or a rate pinned to the scan boundary.
inline EnvelopeFit fit_absorbing_envelope(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 4) throw ConfigError("envelope fit: need >= 4 matching samples");
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw ConfigError("envelope fit: times must increase");
  const double lo = std::log(1e-2 / span), hi = std::log(200.0 / span);
  const int scan = 200;
  double bestB = 0.0, best = INFINITY;
  int best_k = 0;
  double A = 0, C = 0;
  for (int k = 0; k <= scan; ++k) {
    const double B = std::exp(lo + (hi - lo) * k / scan);
    const double rss = detail::envelope_ls(t, y, B, A, C);
    if (rss < best) {
      best = rss;
      bestB = B;
      best_k = k;
    }
  }
  double a = std::exp(lo + (hi - lo) * std::max(0, best_k - 1) / scan);
  double b = std::exp(lo + (hi - lo) * std::min(scan, best_k + 1) / scan);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100 && b - a > 1e-12 * b; ++it) {
    const double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    if (detail::envelope_ls(t, y, x1, A, C) < detail::envelope_ls(t, y, x2, A, C))
      b = x2;
    else
      a = x1;
  }
  const double B = 0.5 * (a + b);
  if (detail::envelope_ls(t, y, B, A, C) > best) detail::envelope_ls(t, y, bestB, A, C);
  else bestB = B;

  EnvelopeFit fit;
  fit.B = bestB;
  fit.rms = std::sqrt(detail::envelope_ls(t, y, bestB, fit.A, fit.C) / static_cast<double>(t.size()));
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::abs(v));
  // A < 0 is an approach from inside the ball; it is still a converging envelope.
  fit.ok = best_k > 0 && best_k < scan && std::abs(fit.A) > 1e-9 * ymax && std::isfinite(fit.C);
  if (std::abs(fit.A) <= 0.1 * fit.C)
    fit.entry_time = 0.0;
  else if (fit.C > 0.0)
    fit.entry_time = std::log(std::abs(fit.A) / (0.1 * fit.C)) / fit.B;
  else
    fit.entry_time = INFINITY;
  return fit;
}

struct MemberSeries {
  std::vector<double> times;
  std::vector<double> h1;
  std::vector<double> energy;
  std::vector<double> n_norm;  ///< |n(t)|_{H^{1+a}}
  std::vector<double> w_norm;  ///< |w(t)|_{H^{1+a}}
  std::vector<std::pair<double, SpectralField>> snapshots;  ///< u at the late probes
};

namespace detail {
inline MemberSeries run_member(const EnsembleConfig& ens, const SolverConfig& cfg, const MemberSpec& spec,
                               bool compactness) {
  const SpectralField u0 = make_member_data(spec, ens.grid);
  const SpectralField* f = cfg.forcing ? &*cfg.forcing : nullptr;
  std::optional<SpectralField> g, v0;
  if (compactness) {
    g = f ? forcing_corrector(*f) : SpectralField::zeros(ens.grid);
    v0 = u0;
    *v0 += *g;
  }
  MemberSeries out;
  Observer obs = [&](std::size_t, double t, const SpectralField& u) {
    out.times.push_back(t);
    out.h1.push_back(sobolev_norm(u, 1.0));
    out.energy.push_back(energy_functional(u, f, cfg.c1, cfg.c2));
    if (compactness) {
      SpectralField w = free_evolve(*v0, t, cfg.delta);
      w.make_physical();
      SpectralField n = u;
      n += *g;
      n -= w;
      out.n_norm.push_back(sobolev_norm(n, 1.0 + ens.a));
      out.w_norm.push_back(sobolev_norm(w, 1.0 + ens.a));
    }
    for (double p : ens.late_probes)
      if (std::abs(t - p) <= 1e-9 * std::max(1.0, p)) out.snapshots.emplace_back(t, u);
  };
  evolve(u0, cfg, {obs});
  return out;
}

inline std::vector<MemberSeries> run_ensemble(const EnsembleConfig& ens, bool compactness) {
  ens.validate();
  const SolverConfig cfg = ens.solver();
  std::vector<MemberSeries> runs(ens.members.size());
  parallel_for(ens.members.size(), [&](std::size_t i) { runs[i] = run_member(ens, cfg, ens.members[i], compactness); });
  return runs;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}
}  // namespace detail

struct AbsorbingReport {
  std::vector<MemberSeries> members;
  std::vector<EnvelopeFit> fits;
  std::vector<bool> contained;  ///< stays within 1.1 C after its fitted entry time
  double c_min = 0.0, c_max = 0.0, c_mean = 0.0;
  double b_min = 0.0;
  double forcing_l2 = 0.0;

  /// (max C - min C) / min C over members.
  double c_spread() const { return c_min > 0.0 ? (c_max - c_min) / c_min : INFINITY; }
  bool all_fits_ok() const {
    return std::all_of(fits.begin(), fits.end(), [](const EnvelopeFit& f) { return f.ok; });
  }
  bool all_contained() const { return std::all_of(contained.begin(), contained.end(), [](bool b) { return b; }); }
};

/// Integrates every member, fits the H^1 envelope per member and checks containment in the
/// ball of radius 1.1 C after the fitted entry time.
inline AbsorbingReport absorbing_experiment(const EnsembleConfig& ens) {
  AbsorbingReport rep;
  rep.members = detail::run_ensemble(ens, false);
  if (auto f = make_forcing(ens.forcing, ens.grid)) rep.forcing_l2 = sobolev_norm(*f, 0.0);
  rep.c_min = INFINITY;
  rep.c_max = -INFINITY;
  rep.b_min = INFINITY;
  for (const auto& m : rep.members) {
    const EnvelopeFit fit = fit_absorbing_envelope(m.times, m.h1);
    bool inside = std::isfinite(fit.entry_time) && fit.C > 0.0;
    for (std::size_t i = 0; inside && i < m.times.size(); ++i)
      if (m.times[i] >= fit.entry_time && m.h1[i] > 1.1 * fit.C) inside = false;
    rep.fits.push_back(fit);
    rep.contained.push_back(inside);
    rep.c_min = std::min(rep.c_min, fit.C);
    rep.c_max = std::max(rep.c_max, fit.C);
    rep.c_mean += fit.C / static_cast<double>(rep.members.size());
    rep.b_min = std::min(rep.b_min, fit.B);
  }
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Compactness

struct CompactnessRow {
  double sup_n = 0.0;   ///< sup_t |n(t)|_{H^{1+a}}
  double w0 = 0.0;      ///< |v(0)|_{H^{1+a}} = sup_t |w(t)|_{H^{1+a}}
  double h1_data = 0.0; ///< |u0|_{H^1}
  double h1_final = 0.0;
};

struct LateDistance {
  double t = 0.0;
  double median = 0.0;  ///< median pairwise |u_i(t) - u_j(t)|_{H^1}
  double max = 0.0;
};

struct CompactnessReport {
  double a = 0.0, delta = 0.0, forcing_l2 = 0.0;
  std::vector<CompactnessRow> rows;
  std::vector<LateDistance> distances;
  std::vector<MemberSeries> members;

  double max_sup_n() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.sup_n);
    return m;
  }
  double max_w0() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.w0);
    return m;
  }
};

inline CompactnessReport compactness_probe(const EnsembleConfig& ens) {
  CompactnessReport rep;
  rep.a = ens.a;
  rep.delta = ens.delta;
  if (auto f = make_forcing(ens.forcing, ens.grid)) rep.forcing_l2 = sobolev_norm(*f, 0.0);
  rep.members = detail::run_ensemble(ens, true);
  for (std::size_t i = 0; i < rep.members.size(); ++i) {
    const auto& m = rep.members[i];
    CompactnessRow row;
    row.sup_n = *std::max_element(m.n_norm.begin(), m.n_norm.end());
    row.w0 = m.w_norm.front();
    row.h1_data = m.h1.front();
    row.h1_final = m.h1.back();
    rep.rows.push_back(row);
  }
  for (double p : ens.late_probes) {
    std::vector<const SpectralField*> at;
    for (const auto& m : rep.members)
      for (const auto& [t, u] : m.snapshots)
        if (t == p || std::abs(t - p) <= 1e-9 * std::max(1.0, p)) at.push_back(&u);
    if (at.size() != rep.members.size() || at.size() < 2) continue;
    std::vector<double> d;
    for (std::size_t i = 0; i < at.size(); ++i)
      for (std::size_t j = i + 1; j < at.size(); ++j) {
        SpectralField diff = *at[i];
        diff -= *at[j];
        d.push_back(sobolev_norm(diff, 1.0));
      }
    rep.distances.push_back({p, detail::median(d), *std::max_element(d.begin(), d.end())});
  }
  return rep;
}

}  // namespace dslab
