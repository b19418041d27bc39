#pragma once

// Split-step integrator for
//
//   i u_t + Lap u + i delta u = c1 |u|^2 u + c2 K(|u|^2) u + f
//
// Strang splitting: exact linear half-steps (damping and constant forcing by
// variation of constants per mode) around an exact gauge substep u <- exp(-i V h) u,
// V = c1 |u|^2 + c2 K(|u|^2) real.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dslab/energy.hpp"
#include "dslab/errors.hpp"
#include "dslab/spectral_core.hpp"

namespace dslab {

struct SolverConfig {
  double c1 = 1.0;
  double c2 = 1.0;
  double delta = 0.0;
  std::optional<SpectralField> forcing;  ///< time-independent f, any representation
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  int sample_every = 100;
  bool store_fields = true;

  bool dissipative() const { return delta > 0.0; }

  std::size_t step_count() const {
    return static_cast<std::size_t>(std::llround(t_end / dt));
  }

  void validate() const {
    if (!std::isfinite(c1) || !std::isfinite(c2)) throw ConfigError("solver: c1, c2 must be finite");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("solver: delta must be >= 0");
    if (!(dt > 0.0)) throw ConfigError("solver: dt must be positive");
    if (dt > 0.1) throw ConfigError("solver: dt must be <= 0.1 for splitting accuracy");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("solver: t_end must be positive");
    if (step_count() == 0) throw ConfigError("solver: t_end shorter than one step");
    if (sample_every < 1) throw ConfigError("solver: sample_every must be >= 1");
    if (forcing && delta == 0.0)
      throw ConfigError("solver: forcing requires dissipative mode (delta > 0)");
    if (c1 + c2 < 0.0) throw ConfigError("solver: focusing constants (c1 + c2 < 0) are not supported");
    if (dissipative() && c1 < 0.0) throw ConfigError("solver: dissipative mode requires c1 >= 0");
  }
};

struct Diagnostics {
  double mass = 0.0;    ///< |u|_{L2}^2
  double h1 = 0.0;      ///< |u|_{H1}
  double energy = 0.0;  ///< energy_functional including the forcing term
};

inline Diagnostics diagnose(const SpectralField& u, const SolverConfig& cfg) {
  const double l2 = sobolev_norm(u, 0.0);
  return {l2 * l2, sobolev_norm(u, 1.0),
          energy_functional(u, cfg.forcing ? &*cfg.forcing : nullptr, cfg.c1, cfg.c2)};
}

struct Trajectory {
  std::vector<double> times;
  std::vector<std::size_t> steps;
  std::vector<SpectralField> fields;  ///< empty unless store_fields
  std::vector<Diagnostics> diagnostics;

  std::size_t size() const { return times.size(); }

  /// Index of the sample at time t (relative tolerance 1e-9), if any.
  std::optional<std::size_t> index_of(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i)
      if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
    return std::nullopt;
  }

  const SpectralField& field_at(double t) const {
    auto i = index_of(t);
    if (!i) throw ConfigError("trajectory: time " + std::to_string(t) + " was not sampled");
    if (fields.empty()) throw ConfigError("trajectory: fields were not stored");
    return fields[*i];
  }
};

/// V = c1 |u|^2 + c2 K(|u|^2), physical representation, real up to roundoff.
inline SpectralField nonlinear_potential(const SpectralField& u, double c1, double c2) {
  if (!u.is_physical()) throw ConfigError("nonlinear_potential: u must be physical");
  SpectralField rho(u.grid(), Representation::physical);
  auto r = rho.values();
  auto v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = std::norm(v[i]);
  if (c2 == 0.0) return c1 * rho;
  SpectralField k = apply_K(rho);
  auto kv = k.values();
  for (std::size_t i = 0; i < kv.size(); ++i) kv[i] = c1 * r[i] + c2 * Complex(kv[i].real(), 0.0);
  return k;
}

inline SpectralField nonlinear_potential(const SpectralField& u, const SolverConfig& cfg) {
  return nonlinear_potential(u, cfg.c1, cfg.c2);
}

/// One-step propagator for a fixed signed step h; reusable across steps.
class Stepper {
 public:
  Stepper(const GridSpec& grid, const SolverConfig& cfg, double h)
      : grid_(grid), c1_(cfg.c1), c2_(cfg.c2), h_(h), dealias_(cfg.dealias) {
    const double half = 0.5 * h;
    std::optional<SpectralField> fhat;
    if (cfg.forcing) {
      if (!(cfg.forcing->grid() == grid)) throw ConfigError("solver: forcing grid differs from datum grid");
      fhat = *cfg.forcing;
      fhat->make_fourier();
    }
    decay_.resize(grid.size());
    source_.assign(grid.size(), Complex(0.0));
    for (int i1 = 0; i1 < grid.modes; ++i1)
      for (int i2 = 0; i2 < grid.modes; ++i2) {
        const std::size_t idx = grid.index(i1, i2);
        const Complex lambda(-cfg.delta, -grid.xi_sq(i1, i2));
        const Complex e = std::exp(lambda * half);
        decay_[idx] = e;
        if (fhat) {
          const Complex mif = Complex(0.0, -1.0) * (*fhat)(i1, i2);
          // expm1-style evaluation keeps (e - 1)/lambda accurate for small |lambda h|
          const Complex z = lambda * half;
          Complex phi;
          if (std::abs(z) < 1e-4)
            phi = half * (1.0 + z / 2.0 + z * z / 6.0);
          else
            phi = (e - 1.0) / lambda;
          source_[idx] = phi * mif;
        }
      }
  }

  double step_size() const { return h_; }

  /// Advances u (physical in, physical out) by h.
  void step(SpectralField& u) const {
    u.make_fourier();
    linear_half(u, false);
    u.make_physical();

    SpectralField v = nonlinear_potential(u, c1_, c2_);
    auto uv = u.values();
    auto vv = v.values();
    for (std::size_t i = 0; i < uv.size(); ++i) {
      const double phase = -vv[i].real() * h_;
      uv[i] *= Complex(std::cos(phase), std::sin(phase));
    }

    u.make_fourier();
    linear_half(u, dealias_);
    u.make_physical();
  }

 private:
  void linear_half(SpectralField& u, bool mask) const {
    auto v = u.values();
    for (int i1 = 0; i1 < grid_.modes; ++i1)
      for (int i2 = 0; i2 < grid_.modes; ++i2) {
        const std::size_t idx = grid_.index(i1, i2);
        if (mask && !grid_.retained(i1, i2)) {
          v[idx] = 0.0;
          continue;
        }
        v[idx] = decay_[idx] * v[idx] + source_[idx];
      }
  }

  GridSpec grid_;
  double c1_, c2_, h_;
  bool dealias_;
  std::vector<Complex> decay_;
  std::vector<Complex> source_;
};

/// A single Strang step of size cfg.dt.
inline SpectralField strang_step(SpectralField u, const SolverConfig& cfg) {
  if (!u.is_physical()) throw ConfigError("strang_step: u must be physical");
  if (!u.all_finite()) throw NumericalError("strang_step: non-finite input", 0);
  Stepper(u.grid(), cfg, cfg.dt).step(u);
  if (!u.all_finite()) throw NumericalError("strang_step: non-finite values", 1);
  return u;
}

using Observer = std::function<void(std::size_t step, double t, const SpectralField& u)>;

/// Fixed-step integration to cfg.t_end. Samples (and observers) fire at step 0, every
/// sample_every steps, and at the final step.
inline Trajectory evolve(const SpectralField& u0, const SolverConfig& cfg,
                         const std::vector<Observer>& observers = {}) {
  cfg.validate();
  if (!u0.is_physical()) throw ConfigError("evolve: u0 must be physical");
  if (!u0.all_finite()) throw NumericalError("evolve: non-finite initial datum", 0);

  Trajectory traj;
  const std::size_t n = cfg.step_count();
  Stepper stepper(u0.grid(), cfg, cfg.dt);
  SpectralField u = u0;

  auto sample = [&](std::size_t k) {
    const double t = static_cast<double>(k) * cfg.dt;
    traj.times.push_back(t);
    traj.steps.push_back(k);
    traj.diagnostics.push_back(diagnose(u, cfg));
    if (cfg.store_fields) traj.fields.push_back(u);
    for (const auto& obs : observers) obs(k, t, u);
  };

  sample(0);
  for (std::size_t k = 1; k <= n; ++k) {
    stepper.step(u);
    if (!u.all_finite()) throw NumericalError("evolve: non-finite values", k);
    if (k % static_cast<std::size_t>(cfg.sample_every) == 0 || k == n) sample(k);
  }
  return traj;
}

// Checkpoints: "DSLABCK1", uint32 endianness tag 0x01020304 in writer order, then
// uint32 M, uint32 representation, float64 L, float64 time, M*M complex float64 pairs.

struct Checkpoint {
  SpectralField field;
  double time = 0.0;
};

namespace detail {
inline constexpr char kCheckpointMagic[8] = {'D', 'S', 'L', 'A', 'B', 'C', 'K', '1'};
inline constexpr std::uint32_t kEndianTag = 0x01020304u;

template <class T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::istream& is, bool swap) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint: truncated stream");
  if (swap)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}
}  // namespace detail

inline void write_checkpoint(std::ostream& os, const SpectralField& field, double time) {
  os.write(detail::kCheckpointMagic, 8);
  detail::write_raw(os, detail::kEndianTag);
  detail::write_raw(os, static_cast<std::uint32_t>(field.grid().modes));
  detail::write_raw(os, static_cast<std::uint32_t>(field.is_fourier() ? 1 : 0));
  detail::write_raw(os, field.grid().length);
  detail::write_raw(os, time);
  for (const auto& v : field.values()) {
    detail::write_raw(os, v.real());
    detail::write_raw(os, v.imag());
  }
  if (!os) throw std::runtime_error("checkpoint: write failed");
}

inline Checkpoint read_checkpoint(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, detail::kCheckpointMagic, 8) != 0)
    throw std::runtime_error("checkpoint: bad magic header");
  const auto tag = detail::read_raw<std::uint32_t>(is, false);
  bool swap = false;
  if (tag == 0x04030201u)
    swap = true;
  else if (tag != detail::kEndianTag)
    throw std::runtime_error("checkpoint: unrecognized endianness tag");
  const auto m = detail::read_raw<std::uint32_t>(is, swap);
  const auto rep = detail::read_raw<std::uint32_t>(is, swap);
  const auto length = detail::read_raw<double>(is, swap);
  const auto time = detail::read_raw<double>(is, swap);
  GridSpec grid = GridSpec::make(static_cast<int>(m), length);
  std::vector<Complex> values(grid.size());
  for (auto& v : values) {
    const double re = detail::read_raw<double>(is, swap);
    const double im = detail::read_raw<double>(is, swap);
    v = Complex(re, im);
  }
  return {SpectralField(grid, std::move(values), rep == 1 ? Representation::fourier : Representation::physical),
          time};
}

inline void save_checkpoint(const std::string& path, const SpectralField& field, double time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
  write_checkpoint(os, field, time);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  return read_checkpoint(is);
}

}  // namespace dslab
