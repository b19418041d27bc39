#pragma once

// Energy functional of the (forced) elliptic-elliptic DS flow and its dissipation rate.
//
//   E(u) = |grad u|_2^2 + (c1/2)|u|_4^4 + (c2/2) int K(|u|^2)|u|^2 + 2 Re int f conj(u)
//   F(u) = -delta c1 |u|_4^4 - delta c2 int K(|u|^2)|u|^2 + 2 delta Re int f conj(u)
//
// so that dE/dt = -2 delta E + F along the damped forced flow.

#include <optional>

#include "dslab/spectral_core.hpp"

namespace dslab {

struct EnergyTerms {
  double gradient = 0.0;   ///< |grad u|^2
  double quartic = 0.0;    ///< |u|_4^4
  double nonlocal = 0.0;   ///< int K(|u|^2)|u|^2
  double forcing = 0.0;    ///< Re int f conj(u)
};

/// Raw integrals entering E and F. The K-term is evaluated on the Fourier side.
inline EnergyTerms energy_terms(const SpectralField& u, const SpectralField* forcing) {
  EnergyTerms t;
  SpectralField phys = u;
  phys.make_physical();
  const GridSpec& g = phys.grid();
  const double area = g.length * g.length;

  SpectralField density(g, Representation::physical);
  auto rho = density.values();
  auto uv = phys.values();
  for (std::size_t i = 0; i < uv.size(); ++i) rho[i] = std::norm(uv[i]);

  const double cell = g.dx() * g.dx();
  for (const auto& r : rho) t.quartic += r.real() * r.real();
  t.quartic *= cell;

  density.make_fourier();
  SpectralField spec = phys;
  spec.make_fourier();
  for (int i1 = 0; i1 < g.modes; ++i1) {
    const double a = g.frequency(i1);
    for (int i2 = 0; i2 < g.modes; ++i2) {
      const double b = g.frequency(i2);
      t.gradient += (a * a + b * b) * std::norm(spec(i1, i2));
      t.nonlocal += k_symbol(a, b) * std::norm(density(i1, i2));
    }
  }
  t.gradient *= area;
  t.nonlocal *= area;

  if (forcing != nullptr) t.forcing = inner_product(*forcing, phys).real();
  return t;
}

inline double energy_functional(const SpectralField& u, const SpectralField* forcing, double c1,
                                double c2) {
  const EnergyTerms t = energy_terms(u, forcing);
  return t.gradient + 0.5 * c1 * t.quartic + 0.5 * c2 * t.nonlocal + 2.0 * t.forcing;
}

inline double energy_functional(const SpectralField& u, const std::optional<SpectralField>& forcing,
                                double c1, double c2) {
  return energy_functional(u, forcing ? &*forcing : nullptr, c1, c2);
}

/// F(u) of the balance law dE/dt = -2 delta E + F.
inline double energy_source(const SpectralField& u, const SpectralField* forcing, double c1, double c2,
                            double delta) {
  const EnergyTerms t = energy_terms(u, forcing);
  return -delta * c1 * t.quartic - delta * c2 * t.nonlocal + 2.0 * delta * t.forcing;
}

}  // namespace dslab
