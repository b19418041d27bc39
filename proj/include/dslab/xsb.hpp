#pragma once

// Space-time Fourier fields and Bourgain-space norms
//
//   |u|_{X^{s,b}} = | <xi>^s <tau + sign |xi|^2>^b u_hat(xi, tau) |_{L2(xi, tau)}
//
// on uniform (xi1, xi2, tau) grids. Each field stores a baseband array plus a carrier
// frequency, so thin boxes far from the origin (the Knapp boxes) are resolved without
// a grid covering [0, N^2] in tau.
//
// The space-time transform is unitary; spectral values are densities:
//   u(x, t) = (2 pi)^{-3/2} dV  sum F e^{i(x.xi + t tau)},      dV = dxi1 dxi2 dtau
//   F       = (2 pi)^{-3/2} dX  sum u e^{-i(x.xi + t tau)},     dX = (2 pi)^3 / (M dV)

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dslab/errors.hpp"
#include "dslab/fft.hpp"
#include "dslab/parallel.hpp"
#include "dslab/spectral_core.hpp"
#include "dslab/stats.hpp"

namespace dslab {

struct SpaceTimeGrid {
  int m1 = 32, m2 = 32, mt = 32;  ///< samples per axis (powers of two)
  double dxi1 = 1.0, dxi2 = 1.0, dtau = 1.0;

  /// Isotropic grid built from a spatial GridSpec, a time window T_w and M_t samples.
  static SpaceTimeGrid from_spatial(const GridSpec& g, double time_window, int time_samples) {
    SpaceTimeGrid s{g.modes, g.modes, time_samples, g.dxi(), g.dxi(), 2.0 * std::numbers::pi / time_window};
    s.validate();
    return s;
  }

  void validate() const {
    for (int m : {m1, m2, mt})
      if (m < 2 || (m & (m - 1)) != 0) throw ConfigError("space-time grid: sizes must be powers of two");
    for (double d : {dxi1, dxi2, dtau})
      if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("space-time grid: steps must be positive");
  }

  std::size_t size() const { return static_cast<std::size_t>(m1) * m2 * mt; }
  std::size_t index(int i1, int i2, int it) const {
    return (static_cast<std::size_t>(i1) * m2 + i2) * mt + it;
  }
  double cell() const { return dxi1 * dxi2 * dtau; }

  bool operator==(const SpaceTimeGrid&) const = default;
};

/// Warning text when the tau-Nyquist frequency does not exceed max |xi|^2 over the spatial grid.
inline std::optional<std::string> tau_nyquist_warning(const SpaceTimeGrid& g) {
  const double x1 = 0.5 * g.m1 * g.dxi1, x2 = 0.5 * g.m2 * g.dxi2;
  const double need = x1 * x1 + x2 * x2;
  const double have = 0.5 * g.mt * g.dtau;
  if (have > need) return std::nullopt;
  return "tau-Nyquist " + std::to_string(have) + " does not exceed max |xi|^2 = " + std::to_string(need) +
         "; modulation weights are aliased";
}

class SpaceTimeField {
 public:
  using Carrier = std::array<double, 3>;

  SpaceTimeField() = default;
  SpaceTimeField(SpaceTimeGrid grid, Representation rep, Carrier carrier = {0.0, 0.0, 0.0})
      : grid_(grid), values_(grid.size()), rep_(rep), carrier_(carrier) {
    grid_.validate();
  }

  const SpaceTimeGrid& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  const Carrier& carrier() const { return carrier_; }
  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }
  Complex& operator()(int i1, int i2, int it) { return values_[grid_.index(i1, i2, it)]; }
  const Complex& operator()(int i1, int i2, int it) const { return values_[grid_.index(i1, i2, it)]; }

  // Actual frequencies of bin i on each axis, carrier included.
  double xi1(int i) const { return carrier_[0] + fft::signed_index(i, grid_.m1) * grid_.dxi1; }
  double xi2(int i) const { return carrier_[1] + fft::signed_index(i, grid_.m2) * grid_.dxi2; }
  double tau(int i) const { return carrier_[2] + fft::signed_index(i, grid_.mt) * grid_.dtau; }

  bool all_finite() const {
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  void make_physical() {
    if (rep_ == Representation::physical) return;
    fft::execute(values_, shape(), fft::Direction::backward);
    const double scale = std::pow(2.0 * std::numbers::pi, -1.5) * grid_.cell();
    for (auto& v : values_) v *= scale;
    rep_ = Representation::physical;
  }

  void make_fourier() {
    if (rep_ == Representation::fourier) return;
    fft::execute(values_, shape(), fft::Direction::forward);
    const double dX = std::pow(2.0 * std::numbers::pi, 3) / (static_cast<double>(grid_.size()) * grid_.cell());
    const double scale = std::pow(2.0 * std::numbers::pi, -1.5) * dX;
    for (auto& v : values_) v *= scale;
    rep_ = Representation::fourier;
  }

  /// Complex conjugate of the space-time function: carrier negated, spectrum reflected.
  SpaceTimeField conj() const {
    SpaceTimeField out = *this;
    out.make_physical();
    for (auto& v : out.values_) v = std::conj(v);
    for (auto& c : out.carrier_) c = -c;
    if (rep_ == Representation::fourier) out.make_fourier();
    return out;
  }

  /// Pointwise product of two functions on the same grid (physical result, carriers add).
  /// Alias-free only when the summed baseband supports fit inside the grid.
  friend SpaceTimeField multiply(const SpaceTimeField& a, const SpaceTimeField& b) {
    if (!(a.grid_ == b.grid_)) throw ConfigError("space-time product: grid mismatch");
    SpaceTimeField x = a, y = b;
    x.make_physical();
    y.make_physical();
    for (std::size_t i = 0; i < x.values_.size(); ++i) x.values_[i] *= y.values_[i];
    for (int k = 0; k < 3; ++k) x.carrier_[k] += y.carrier_[k];
    return x;
  }

 private:
  std::vector<int> shape() const { return {grid_.m1, grid_.m2, grid_.mt}; }

  SpaceTimeGrid grid_{};
  std::vector<Complex> values_;
  Representation rep_ = Representation::fourier;
  Carrier carrier_{0.0, 0.0, 0.0};
};

/// |F|_{X^{s,b}} with weight <xi>^s <tau + sign |xi|^2>^b and quadrature cell dV.
inline double xsb_norm(const SpaceTimeField& field, double s, double b, int sign = 1) {
  SpaceTimeField f = field;
  f.make_fourier();
  const SpaceTimeGrid& g = f.grid();
  double acc = 0.0;
  for (int i1 = 0; i1 < g.m1; ++i1) {
    const double a = f.xi1(i1);
    for (int i2 = 0; i2 < g.m2; ++i2) {
      const double c = f.xi2(i2);
      const double xs = a * a + c * c;
      const double ws = s == 0.0 ? 1.0 : std::pow(1.0 + xs, s);
      for (int it = 0; it < g.mt; ++it) {
        const Complex v = f(i1, i2, it);
        if (v == Complex(0.0)) continue;
        const double m = f.tau(it) + sign * xs;
        const double wt = b == 0.0 ? 1.0 : std::pow(1.0 + m * m, b);
        acc += ws * wt * std::norm(v);
      }
    }
  }
  return std::sqrt(acc * g.cell());
}

using Freq2 = std::array<double, 2>;

/// h = sum_j sign_j |xi_j|^2 on the hyperplane xi1 + xi2 + xi3 = 0.
inline double resonance_h(const Freq2& a, const Freq2& b, const Freq2& c, const std::array<int, 3>& signs) {
  const double scale = std::max({1.0, std::abs(a[0]), std::abs(a[1]), std::abs(b[0]), std::abs(b[1]),
                                 std::abs(c[0]), std::abs(c[1])});
  if (std::abs(a[0] + b[0] + c[0]) > 1e-12 * scale || std::abs(a[1] + b[1] + c[1]) > 1e-12 * scale)
    throw ConfigError("resonance_h: frequencies must sum to zero");
  for (int s : signs)
    if (s != 1 && s != -1) throw ConfigError("resonance_h: signs must be +1 or -1");
  auto sq = [](const Freq2& x) { return x[0] * x[0] + x[1] * x[1]; };
  return signs[0] * sq(a) + signs[1] * sq(b) + signs[2] * sq(c);
}

struct KnappConfig {
  double N = 16.0;
  double s = 0.6;
  double a = 0.3;
  double b = 0.51;
  int points_per_box = 4;  ///< samples across the 1/N half-width of Q1 in xi2
  double xi1_step = 0.125;
  double tau_step = 0.125;
  double xi2_step = 0.0;   ///< 0 derives the step from points_per_box

  double effective_xi2_step() const { return xi2_step > 0.0 ? xi2_step : 1.0 / (points_per_box * N); }

  void validate() const {
    if (!(N >= 4.0)) throw ConfigError("knapp: N >= 4 required, got N = " + std::to_string(N));
    if (points_per_box < 1) throw ConfigError("knapp: points_per_box must be >= 1");
    if (!(xi1_step > 0.0 && xi1_step <= 1.0)) throw ConfigError("knapp: violated 1 >= xi1_step > 0");
    if (!(tau_step > 0.0 && tau_step <= 1.0)) throw ConfigError("knapp: violated 1 >= tau_step > 0");
    const double d2 = effective_xi2_step();
    if (!(d2 > 0.0)) throw ConfigError("knapp: xi2_step must be positive");
    if (1.0 / N < d2)
      throw ConfigError("knapp: grid too coarse, violated 1/N >= xi2_step (1/N = " + std::to_string(1.0 / N) +
                        ", xi2_step = " + std::to_string(d2) + ")");
    if (1.0 / std::sqrt(N) < d2)
      throw ConfigError("knapp: grid too coarse, violated 1/sqrt(N) >= xi2_step");
  }
};

namespace detail {
inline int pow2_at_least(double n) {
  int m = 2;
  while (m < n) m *= 2;
  return m;
}
}  // namespace detail

/// Baseband grid large enough that u, v, w and the product u conj(v) w live alias-free.
inline SpaceTimeGrid knapp_grid(const KnappConfig& cfg) {
  cfg.validate();
  const double d2 = cfg.effective_xi2_step();
  const double half2 = 1.0 / cfg.N + 2.0 / std::sqrt(cfg.N);
  SpaceTimeGrid g;
  g.dxi1 = cfg.xi1_step;
  g.dxi2 = d2;
  g.dtau = cfg.tau_step;
  g.m1 = detail::pow2_at_least(2.0 * 3.0 / cfg.xi1_step + 8);
  g.m2 = detail::pow2_at_least(2.0 * half2 / d2 + 8);
  g.mt = detail::pow2_at_least(2.0 * 3.0 / cfg.tau_step + 8);
  return g;
}

struct KnappTriple {
  SpaceTimeField u, v, w;
};

/// u_hat = chi_{Q1}, v_hat = w_hat = chi_{Q2}.
inline KnappTriple knapp_triple(const KnappConfig& cfg, const SpaceTimeGrid& grid) {
  cfg.validate();
  const double d2 = grid.dxi2;
  if (1.0 / cfg.N < d2)
    throw ConfigError("knapp: grid too coarse, violated 1/N >= xi2_step (xi2_step = " + std::to_string(d2) + ")");
  if (1.0 / std::sqrt(cfg.N) < d2) throw ConfigError("knapp: grid too coarse, violated 1/sqrt(N) >= xi2_step");
  const double half2 = 1.0 / cfg.N + 2.0 / std::sqrt(cfg.N);
  if (grid.m2 * grid.dxi2 < 2.0 * half2 || grid.m1 * grid.dxi1 < 6.0 || grid.mt * grid.dtau < 6.0)
    throw ConfigError("knapp: grid extent too small for the product support");

  const double eps = 1e-9;
  KnappTriple t{SpaceTimeField(grid, Representation::fourier, {0.0, cfg.N, -cfg.N * cfg.N}),
                SpaceTimeField(grid, Representation::fourier), SpaceTimeField(grid, Representation::fourier)};
  for (int i1 = 0; i1 < grid.m1; ++i1) {
    const double x1 = fft::signed_index(i1, grid.m1) * grid.dxi1;
    if (std::abs(x1) > 1.0 + eps) continue;
    for (int i2 = 0; i2 < grid.m2; ++i2) {
      const double x2 = fft::signed_index(i2, grid.m2) * grid.dxi2;
      const bool in1 = std::abs(x2) <= 1.0 / cfg.N * (1.0 + eps);
      const bool in2 = std::abs(x2) <= 1.0 / std::sqrt(cfg.N) * (1.0 + eps);
      if (!in2) continue;
      for (int it = 0; it < grid.mt; ++it) {
        const double tt = fft::signed_index(it, grid.mt) * grid.dtau;
        if (std::abs(tt) > 1.0 + eps) continue;
        if (in1) t.u(i1, i2, it) = 1.0;
        t.v(i1, i2, it) = 1.0;
        t.w(i1, i2, it) = 1.0;
      }
    }
  }
  return t;
}

/// Measure of the Fourier support (count times cell volume).
inline double support_volume(const SpaceTimeField& field) {
  SpaceTimeField f = field;
  f.make_fourier();
  std::size_t n = 0;
  for (const auto& v : f.values()) n += std::abs(v) > 0.5;
  return static_cast<double>(n) * f.grid().cell();
}

/// |(c1 I + c2 K)(u conj(v)) w|_{X^{s+a, b-1}}.
inline double trilinear_numerator(const SpaceTimeField& u, const SpaceTimeField& v, const SpaceTimeField& w,
                                  double s, double a, double b, double c1, double c2) {
  SpaceTimeField uv = multiply(u, v.conj());
  uv.make_fourier();
  const SpaceTimeGrid& g = uv.grid();
  for (int i1 = 0; i1 < g.m1; ++i1) {
    const double x1 = uv.xi1(i1);
    for (int i2 = 0; i2 < g.m2; ++i2) {
      const double m = c1 + c2 * k_symbol(x1, uv.xi2(i2));
      for (int it = 0; it < g.mt; ++it) uv(i1, i2, it) *= m;
    }
  }
  SpaceTimeField out = multiply(uv, w);
  return xsb_norm(out, s + a, b - 1.0, 1);
}

/// Ratio of the trilinear numerator to |u| |v| |w| in X^{s,b}.
inline double trilinear_ratio(const SpaceTimeField& u, const SpaceTimeField& v, const SpaceTimeField& w, double s,
                              double a, double b, double c1, double c2) {
  const double den = xsb_norm(u, s, b) * xsb_norm(v, s, b) * xsb_norm(w, s, b);
  if (!(den > 0.0)) throw ConfigError("trilinear_ratio: zero denominator");
  return trilinear_numerator(u, v, w, s, a, b, c1, c2) / den;
}

struct KnappRow {
  double N = 0.0;
  double norm_u = 0.0, norm_v = 0.0, norm_w = 0.0;
  double volume_q1 = 0.0, volume_q2 = 0.0;
  double numerator = 0.0;
  double ratio = 0.0;
};

struct KnappSweep {
  std::vector<KnappRow> rows;
  double slope_u = 0.0, slope_v = 0.0, slope_numerator = 0.0, slope_ratio = 0.0;
};

/// Sweeps N (at least 4 values, geometric) and fits log-log slopes of the norms and the ratio.
/// base supplies s, a, b and the grid resolution knobs; base.N is ignored.
inline KnappSweep knapp_sweep(const std::vector<double>& Ns, const KnappConfig& base, double c1, double c2) {
  if (Ns.size() < 4) throw ConfigError("knapp_sweep: need at least 4 values of N");
  for (std::size_t i = 1; i < Ns.size(); ++i) {
    if (!(Ns[i] > Ns[i - 1])) throw ConfigError("knapp_sweep: N values must increase");
    if (i > 1 && std::abs(std::log(Ns[i] / Ns[i - 1]) - std::log(Ns[1] / Ns[0])) > 1e-9)
      throw ConfigError("knapp_sweep: N values must be geometrically spaced");
  }
  KnappSweep sweep;
  sweep.rows.resize(Ns.size());
  for (double N : Ns) {
    KnappConfig c = base;
    c.N = N;
    c.validate();
  }
  parallel_for(Ns.size(), [&](std::size_t i) {
    KnappConfig c = base;
    c.N = Ns[i];
    const SpaceTimeGrid g = knapp_grid(c);
    const KnappTriple t = knapp_triple(c, g);
    KnappRow r;
    r.N = Ns[i];
    r.norm_u = xsb_norm(t.u, c.s, c.b);
    r.norm_v = xsb_norm(t.v, c.s, c.b);
    r.norm_w = xsb_norm(t.w, c.s, c.b);
    r.volume_q1 = support_volume(t.u);
    r.volume_q2 = support_volume(t.v);
    r.numerator = trilinear_numerator(t.u, t.v, t.w, c.s, c.a, c.b, c1, c2);
    r.ratio = r.numerator / (r.norm_u * r.norm_v * r.norm_w);
    sweep.rows[i] = r;
  });
  std::vector<double> n, u, v, num, ratio;
  for (const auto& r : sweep.rows) {
    n.push_back(r.N);
    u.push_back(r.norm_u);
    v.push_back(r.norm_v);
    num.push_back(r.numerator);
    ratio.push_back(r.ratio);
  }
  sweep.slope_u = loglog_slope(n, u);
  sweep.slope_v = loglog_slope(n, v);
  sweep.slope_numerator = loglog_slope(n, num);
  sweep.slope_ratio = loglog_slope(n, ratio);
  return sweep;
}

}  // namespace dslab
