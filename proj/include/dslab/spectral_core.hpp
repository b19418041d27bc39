#pragma once

// Periodic 2D spectral substrate.
//
// The plane is truncated to the torus [0, L)^2 sampled on an M x M grid.
// Fourier coefficients are continuum-normalized,
//
//     u_hat(xi) = (1/M^2) sum_j u(x_j) exp(-i xi.x_j)  ~  (1/L^2) int u exp(-i xi.x) dx,
//
// so u(x) = sum_xi u_hat(xi) exp(i xi.x) and int |u|^2 dx = L^2 sum |u_hat|^2.
// Storage is row-major over (x1, x2) in both representations; Fourier bins are
// in FFT order (signed index k <-> bin k mod M).

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dslab/errors.hpp"
#include "dslab/fft.hpp"

namespace dslab {

using Complex = std::complex<double>;

/// Japanese bracket <x> = sqrt(1 + x^2), taking |x|^2.
inline double japanese(double abs_sq) { return std::sqrt(1.0 + abs_sq); }

struct GridSpec {
  int modes = 64;                                 ///< M, power of two
  double length = 2.0 * std::numbers::pi * 16.0;  ///< torus side L

  static GridSpec make(int modes, double length) {
    GridSpec g{modes, length};
    g.validate();
    return g;
  }

  void validate() const {
    if (modes < 4 || (modes & (modes - 1)) != 0)
      throw ConfigError("grid: modes_per_axis must be a power of two >= 4, got " +
                        std::to_string(modes));
    if (!(length > 0.0) || !std::isfinite(length))
      throw ConfigError("grid: domain_length must be positive");
  }

  double dxi() const { return 2.0 * std::numbers::pi / length; }
  double dx() const { return length / modes; }
  std::size_t size() const { return static_cast<std::size_t>(modes) * modes; }
  std::size_t index(int i1, int i2) const { return static_cast<std::size_t>(i1) * modes + i2; }

  /// Frequency (xi1 or xi2) of storage bin i.
  double frequency(int i) const { return fft::signed_index(i, modes) * dxi(); }
  double xi_sq(int i1, int i2) const {
    const double a = frequency(i1), b = frequency(i2);
    return a * a + b * b;
  }

  /// 2/3-rule mask: keeps |k_j| < M/3 on both axes.
  bool retained(int i1, int i2) const {
    const int k1 = std::abs(fft::signed_index(i1, modes));
    const int k2 = std::abs(fft::signed_index(i2, modes));
    return 3 * k1 < modes && 3 * k2 < modes;
  }

  bool operator==(const GridSpec&) const = default;
};

enum class Representation { physical, fourier };

inline const char* to_string(Representation r) {
  return r == Representation::physical ? "physical" : "fourier";
}

/// Complex M x M field on a GridSpec, tagged by representation. Value semantics.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(GridSpec grid, Representation rep)
      : grid_(grid), values_(grid.size()), rep_(rep) {
    grid_.validate();
  }
  SpectralField(GridSpec grid, std::vector<Complex> values, Representation rep)
      : grid_(grid), values_(std::move(values)), rep_(rep) {
    grid_.validate();
    if (values_.size() != grid_.size())
      throw ConfigError("field: value array has " + std::to_string(values_.size()) +
                        " entries, grid expects " + std::to_string(grid_.size()));
  }

  static SpectralField zeros(GridSpec grid, Representation rep = Representation::physical) {
    return SpectralField(grid, rep);
  }

  /// Samples fn(x1, x2) on the physical grid.
  template <class Fn>
  static SpectralField from_function(GridSpec grid, Fn&& fn) {
    SpectralField f(grid, Representation::physical);
    const double dx = grid.dx();
    for (int i1 = 0; i1 < grid.modes; ++i1)
      for (int i2 = 0; i2 < grid.modes; ++i2)
        f.values_[grid.index(i1, i2)] = Complex(fn(i1 * dx, i2 * dx));
    return f;
  }

  const GridSpec& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  bool is_physical() const { return rep_ == Representation::physical; }
  bool is_fourier() const { return rep_ == Representation::fourier; }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }
  Complex& operator()(int i1, int i2) { return values_[grid_.index(i1, i2)]; }
  const Complex& operator()(int i1, int i2) const { return values_[grid_.index(i1, i2)]; }

  /// Coefficient of signed mode (k1, k2); field must be in Fourier representation.
  Complex& mode(int k1, int k2) {
    return (*this)(fft::bin_of(k1, grid_.modes), fft::bin_of(k2, grid_.modes));
  }
  const Complex& mode(int k1, int k2) const {
    return (*this)(fft::bin_of(k1, grid_.modes), fft::bin_of(k2, grid_.modes));
  }

  bool all_finite() const {
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  SpectralField& operator+=(const SpectralField& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  SpectralField& operator*=(Complex c) {
    for (auto& v : values_) v *= c;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(Complex c, SpectralField a) { return a *= c; }

  SpectralField conj() const {
    SpectralField out = *this;
    if (rep_ == Representation::physical) {
      for (auto& v : out.values_) v = std::conj(v);
    } else {
      const int m = grid_.modes;
      for (int i1 = 0; i1 < m; ++i1)
        for (int i2 = 0; i2 < m; ++i2)
          out(i1, i2) = std::conj((*this)((m - i1) % m, (m - i2) % m));
    }
    return out;
  }

  void require_compatible(const SpectralField& o) const {
    if (!(grid_ == o.grid_)) throw ConfigError("field: grid mismatch");
    if (rep_ != o.rep_) throw ConfigError("field: representation mismatch");
  }

  // In-place transforms; no-ops when already in the target representation.
  void make_fourier() {
    if (rep_ == Representation::fourier) return;
    check_size();
    fft::execute(values_, {grid_.modes, grid_.modes}, fft::Direction::forward);
    const double scale = 1.0 / static_cast<double>(grid_.size());
    for (auto& v : values_) v *= scale;
    rep_ = Representation::fourier;
  }
  void make_physical() {
    if (rep_ == Representation::physical) return;
    check_size();
    fft::execute(values_, {grid_.modes, grid_.modes}, fft::Direction::backward);
    rep_ = Representation::physical;
  }

 private:
  void check_size() const {
    if (values_.size() != grid_.size()) throw ConfigError("field: size mismatch with grid");
  }

  GridSpec grid_{};
  std::vector<Complex> values_;
  Representation rep_ = Representation::physical;
};

inline SpectralField to_fourier(SpectralField f) {
  if (!f.is_physical()) throw ConfigError("to_fourier: field is already in Fourier representation");
  f.make_fourier();
  return f;
}

inline SpectralField to_physical(SpectralField f) {
  if (!f.is_fourier()) throw ConfigError("to_physical: field is already in physical representation");
  f.make_physical();
  return f;
}

/// Multiplies every Fourier mode by symbol(xi1, xi2). The result keeps the input's representation.
template <class Symbol>
SpectralField apply_symbol(SpectralField f, Symbol&& symbol) {
  const Representation rep = f.representation();
  f.make_fourier();
  const GridSpec& g = f.grid();
  for (int i1 = 0; i1 < g.modes; ++i1) {
    const double a = g.frequency(i1);
    for (int i2 = 0; i2 < g.modes; ++i2) f(i1, i2) *= symbol(a, g.frequency(i2));
  }
  if (rep == Representation::physical) f.make_physical();
  return f;
}

/// Symbol of K: xi1^2 / |xi|^2, with the zero mode mapped to 0.
inline double k_symbol(double xi1, double xi2) {
  const double r = xi1 * xi1 + xi2 * xi2;
  return r > 0.0 ? xi1 * xi1 / r : 0.0;
}

inline double l2_norm_fourier(const SpectralField& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::norm(v);
  return f.grid().length * std::sqrt(acc);
}

/// K(f): the nonlocal multiplier xi1^2/|xi|^2. Representation is preserved.
inline SpectralField apply_K(SpectralField f) {
#ifndef NDEBUG
  SpectralField in = f;
  in.make_fourier();
  const double before = l2_norm_fourier(in);
#endif
  SpectralField out = apply_symbol(std::move(f), [](double a, double b) { return k_symbol(a, b); });
#ifndef NDEBUG
  SpectralField chk = out;
  chk.make_fourier();
  assert(l2_norm_fourier(chk) <= before * (1.0 + 1e-12) + 1e-300);
#endif
  return out;
}

/// Linear propagator: each mode times exp(-i t |xi|^2 - delta t). delta = 0 is exp(it Laplacian).
inline SpectralField free_evolve(SpectralField f, double t, double delta = 0.0) {
  if (t == 0.0) return f;
  const double decay = std::exp(-delta * t);
  return apply_symbol(std::move(f), [t, decay](double a, double b) {
    const double phase = -t * (a * a + b * b);
    return decay * Complex(std::cos(phase), std::sin(phase));
  });
}

/// Fourier-side H^s norm, (L^2 sum <xi>^{2s} |u_hat|^2)^{1/2}; equals the physical L^2 norm at s = 0.
inline double sobolev_norm(const SpectralField& field, double s) {
  SpectralField f = field;
  f.make_fourier();
  const GridSpec& g = f.grid();
  double acc = 0.0;
  for (int i1 = 0; i1 < g.modes; ++i1)
    for (int i2 = 0; i2 < g.modes; ++i2) {
      const double w = s == 0.0 ? 1.0 : std::pow(1.0 + g.xi_sq(i1, i2), s);
      acc += w * std::norm(f(i1, i2));
    }
  return g.length * std::sqrt(acc);
}

/// Physical-space quadrature L^p norm (p > 0).
inline double lebesgue_norm(const SpectralField& field, double p) {
  if (!(p > 0.0)) throw ConfigError("lebesgue_norm: p must be positive");
  SpectralField f = field;
  f.make_physical();
  const double cell = f.grid().dx() * f.grid().dx();
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::pow(std::abs(v), p);
  return std::pow(acc * cell, 1.0 / p);
}

/// <f, g> = int f conj(g) dx, evaluated spectrally.
inline Complex inner_product(const SpectralField& f, const SpectralField& g) {
  SpectralField a = f, b = g;
  a.make_fourier();
  b.make_fourier();
  if (!(a.grid() == b.grid())) throw ConfigError("inner_product: grid mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) acc += a.values()[i] * std::conj(b.values()[i]);
  return acc * (a.grid().length * a.grid().length);
}

/// Zeroes the top third of modes on each axis; representation is preserved.
inline SpectralField dealias(SpectralField f) {
  const Representation rep = f.representation();
  f.make_fourier();
  const GridSpec& g = f.grid();
  for (int i1 = 0; i1 < g.modes; ++i1)
    for (int i2 = 0; i2 < g.modes; ++i2)
      if (!g.retained(i1, i2)) f(i1, i2) = 0.0;
  if (rep == Representation::physical) f.make_physical();
  return f;
}

/// Max |u_hat(-xi) - conj(u_hat(xi))| relative to max |u_hat|; zero for real physical data.
inline double hermitian_residual(const SpectralField& field) {
  SpectralField f = field;
  f.make_fourier();
  const int m = f.grid().modes;
  double worst = 0.0, scale = 0.0;
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2) {
      scale = std::max(scale, std::abs(f(i1, i2)));
      worst = std::max(worst, std::abs(f((m - i1) % m, (m - i2) % m) - std::conj(f(i1, i2))));
    }
  return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace dslab
