#pragma once

// Nonlinear smoothing diagnostics: rough data at a prescribed Sobolev regularity,
// the Duhamel split u(t) = e^{it Lap}u0 + N(t), and refinement studies of |N(t)|_{H^{s+a}}.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dslab/ds_solver.hpp"
#include "dslab/parallel.hpp"
#include "dslab/spectral_core.hpp"
#include "dslab/stats.hpp"

namespace dslab {

struct RoughDataSpec {
  double s = 0.6;
  double amplitude = 0.05;
  std::uint64_t seed = 1;
  /// Width of a Gaussian envelope centred in the box; 0 keeps the data statistically homogeneous.
  double envelope_width = 0.0;

  void validate() const {
    if (!(s > 0.5)) throw ConfigError("rough data: s must exceed 1/2");
    if (!(amplitude >= 0.0)) throw ConfigError("rough data: amplitude must be >= 0");
    if (!(envelope_width >= 0.0)) throw ConfigError("rough data: envelope_width must be >= 0");
  }
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Uniform phase in [0, 2 pi) attached to the signed lattice mode (k1, k2); independent of M.
inline double mode_phase(std::uint64_t seed, int k1, int k2) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint32_t>(k1));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k2)) << 32));
  return 2.0 * std::numbers::pi * static_cast<double>(h >> 11) * 0x1.0p-53;
}
}  // namespace detail

/// |u0_hat(xi)| = amplitude <xi>^{-s-1} with seeded uniform phases on the 2/3-rule band,
/// optionally localized by a Gaussian envelope and re-band-limited.
inline SpectralField make_rough_data(const RoughDataSpec& spec, const GridSpec& grid) {
  spec.validate();
  grid.validate();
  SpectralField u(grid, Representation::fourier);
  if (spec.amplitude == 0.0) {
    u.make_physical();
    return u;
  }
  for (int i1 = 0; i1 < grid.modes; ++i1)
    for (int i2 = 0; i2 < grid.modes; ++i2) {
      if (!grid.retained(i1, i2)) continue;
      const double mag = spec.amplitude * std::pow(1.0 + grid.xi_sq(i1, i2), -0.5 * (spec.s + 1.0));
      const double ph = detail::mode_phase(spec.seed, fft::signed_index(i1, grid.modes),
                                           fft::signed_index(i2, grid.modes));
      u(i1, i2) = std::polar(mag, ph);
    }
  u.make_physical();
  if (spec.envelope_width > 0.0) {
    const double c = 0.5 * grid.length, w2 = 2.0 * spec.envelope_width * spec.envelope_width;
    const double dx = grid.dx();
    for (int i1 = 0; i1 < grid.modes; ++i1)
      for (int i2 = 0; i2 < grid.modes; ++i2) {
        const double x = i1 * dx - c, y = i2 * dx - c;
        u(i1, i2) *= std::exp(-(x * x + y * y) / w2);
      }
    u = dealias(std::move(u));
  }
  return u;
}

/// N(t) = u(t) - e^{it Lap}u0 at a sampled time t (physical representation).
inline SpectralField nonlinear_part(const Trajectory& traj, const SpectralField& u0, double t) {
  SpectralField n = traj.field_at(t);
  n.make_physical();
  SpectralField lin = free_evolve(u0, t);
  lin.make_physical();
  n -= lin;
  return n;
}

/// beta(s) = 3s(1-s) / (2(5s-2)), the growth exponent available for 2/5 < s < 1.
inline std::optional<double> beta_growth(double s) {
  if (!(s > 0.4 && s < 1.0)) return std::nullopt;
  return 3.0 * s * (1.0 - s) / (2.0 * (5.0 * s - 2.0));
}

/// Envelope exponent 1 + beta (3 + 2/s).
inline double envelope_exponent(double s, double beta) { return 1.0 + beta * (3.0 + 2.0 / s); }

/// a < min(1/2, s - 1/2), a > 0.
inline bool in_theorem_regime(double s, double a) {
  return a > 0.0 && a < std::min(0.5, s - 0.5);
}

/// Local existence time kappa (C0 + |u0|_{H^s})^{-2/s}.
inline double local_time(double h_s_norm, double s, double kappa, double C0) {
  if (!(h_s_norm >= 0.0)) throw ConfigError("local_time: norm must be >= 0");
  if (!(s > 0.0)) throw ConfigError("local_time: s must be positive");
  return kappa * std::pow(C0 + h_s_norm, -2.0 / s);
}

inline double japanese_time(double t) { return std::sqrt(1.0 + t * t); }

struct SmoothingReport {
  std::vector<double> times;
  std::vector<double> nonlinear_norm;  ///< |N(t)|_{H^{s+a}}
  std::vector<double> linear_norm;     ///< |e^{it Lap}u0|_{H^{s+a}}
  std::vector<double> data_norm;       ///< |u(t)|_{H^s}
  std::vector<double> envelope;
  std::vector<bool> violation;
  double s = 0.0, a = 0.0;
  double beta = 0.0;
  bool beta_measured = false;  ///< beta taken from the |u(t)|_{H^s} series (s outside (2/5, 1))
  double exponent = 0.0;
  double constant = 0.0;
  bool in_theorem_regime = false;

  std::size_t violations() const {
    std::size_t n = 0;
    for (bool v : violation) n += v;
    return n;
  }
};

/// Post-processes a stored trajectory. Probes are all samples with t > 0; the envelope constant
/// is fitted at the first probe.
inline SmoothingReport smoothing_report(const Trajectory& traj, const SpectralField& u0, double s, double a) {
  if (traj.size() == 0) throw ConfigError("smoothing_report: empty trajectory");
  if (traj.fields.size() != traj.size()) throw ConfigError("smoothing_report: trajectory has no stored fields");
  SmoothingReport r;
  r.s = s;
  r.a = a;
  r.in_theorem_regime = in_theorem_regime(s, a);

  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    if (t <= 0.0) continue;
    r.times.push_back(t);
    SpectralField lin = free_evolve(u0, t);
    lin.make_physical();
    SpectralField n = traj.fields[i];
    n.make_physical();
    n -= lin;
    r.nonlinear_norm.push_back(sobolev_norm(n, s + a));
    r.linear_norm.push_back(sobolev_norm(lin, s + a));
    r.data_norm.push_back(sobolev_norm(traj.fields[i], s));
  }

  if (auto b = beta_growth(s)) {
    r.beta = *b;
  } else {
    std::vector<double> jt;
    for (double t : r.times) jt.push_back(japanese_time(t));
    const double slope = loglog_slope(jt, r.data_norm);
    r.beta = std::isfinite(slope) ? std::max(0.0, slope) : 0.0;
    r.beta_measured = true;
  }
  r.exponent = envelope_exponent(s, r.beta);

  if (!r.times.empty()) r.constant = r.nonlinear_norm.front() / std::pow(japanese_time(r.times.front()), r.exponent);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    r.envelope.push_back(r.constant * std::pow(japanese_time(r.times[i]), r.exponent));
    r.violation.push_back(r.nonlinear_norm[i] > r.envelope[i] * (1.0 + 1e-12));
  }
  return r;
}

/// Evenly spaced probe times on (0, horizon].
inline std::vector<double> probe_times(double horizon = 10.0, int count = 8) {
  std::vector<double> t;
  for (int i = 1; i <= count; ++i) t.push_back(horizon * i / count);
  return t;
}

struct RefinementRow {
  int modes = 0;
  double linear = 0.0;     ///< |e^{it Lap}u0|_{H^{s+a}}
  double nonlinear = 0.0;  ///< |N(t)|_{H^{s+a}}
};

struct RefinementTable {
  std::vector<RefinementRow> rows;
  double linear_slope = 0.0;
  double nonlinear_slope = 0.0;

  /// Relative change of the nonlinear column between the last two resolutions.
  double nonlinear_change() const {
    if (rows.size() < 2) return 0.0;
    const double a = rows[rows.size() - 2].nonlinear, b = rows.back().nonlinear;
    return a > 0.0 ? std::abs(b - a) / a : (b == 0.0 ? 0.0 : INFINITY);
  }
};

/// Runs the flow to t_probe on every resolution of a box of side `length` and tabulates both
/// Duhamel parts in H^{s+a}. cfg supplies constants and dt; its t_end is replaced.
inline RefinementTable refinement_study(const RoughDataSpec& spec, const std::vector<int>& resolutions,
                                        double length, double t_probe, double s, double a, SolverConfig cfg) {
  if (resolutions.size() < 3) throw ConfigError("refinement_study: need at least 3 resolutions");
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    GridSpec::make(resolutions[i], length);
    if (i > 0 && resolutions[i] <= resolutions[i - 1])
      throw ConfigError("refinement_study: resolutions must be strictly increasing");
  }
  cfg.t_end = t_probe;
  cfg.store_fields = true;
  cfg.sample_every = static_cast<int>(cfg.step_count());
  cfg.validate();

  RefinementTable table;
  table.rows.resize(resolutions.size());
  parallel_for(resolutions.size(), [&](std::size_t i) {
    const GridSpec grid = GridSpec::make(resolutions[i], length);
    const SpectralField u0 = make_rough_data(spec, grid);
    SolverConfig c = cfg;
    if (c.forcing) throw ConfigError("refinement_study: forcing is not supported");
    const Trajectory traj = evolve(u0, c);
    const double t = traj.times.back();
    RefinementRow row;
    row.modes = resolutions[i];
    row.linear = sobolev_norm(free_evolve(u0, t), s + a);
    row.nonlinear = sobolev_norm(nonlinear_part(traj, u0, t), s + a);
    table.rows[i] = row;
  });

  std::vector<double> m, lin, non;
  for (const auto& r : table.rows) {
    m.push_back(r.modes);
    lin.push_back(r.linear);
    non.push_back(r.nonlinear);
  }
  table.linear_slope = loglog_slope(m, lin);
  bool all_zero = true;
  for (double v : non) all_zero = all_zero && v == 0.0;
  table.nonlinear_slope = all_zero ? 0.0 : loglog_slope(m, non);
  return table;
}

}  // namespace dslab
