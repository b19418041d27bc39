#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dslab/attractor.hpp"

using namespace dslab;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField random_smooth(const GridSpec& g, std::uint64_t seed, double amp = 0.3) {
  RoughDataSpec r;
  r.s = 3.0;
  r.amplitude = amp;
  r.seed = seed;
  return make_rough_data(r, g);
}

// E by physical-space quadrature: spectral derivatives sampled on the grid, K applied as an
// operator, then plain Riemann sums.
double energy_by_quadrature(const SpectralField& u, const SpectralField* f, double c1, double c2) {
  const GridSpec& g = u.grid();
  const double cell = g.dx() * g.dx();
  auto dx1 = apply_symbol(u, [](double a, double) { return Complex(0.0, a); });
  auto dx2 = apply_symbol(u, [](double, double b) { return Complex(0.0, b); });
  SpectralField rho(g, Representation::physical);
  for (std::size_t i = 0; i < g.size(); ++i) rho.values()[i] = std::norm(u.values()[i]);
  const SpectralField krho = apply_K(rho);
  double grad = 0, quart = 0, nonloc = 0, force = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    grad += std::norm(dx1.values()[i]) + std::norm(dx2.values()[i]);
    quart += std::pow(rho.values()[i].real(), 2);
    nonloc += krho.values()[i].real() * rho.values()[i].real();
    if (f) force += (f->values()[i] * std::conj(u.values()[i])).real();
  }
  return cell * (grad + 0.5 * c1 * quart + 0.5 * c2 * nonloc + 2.0 * force);
}

EnsembleConfig small_ensemble() {
  EnsembleConfig e;
  e.grid = GridSpec::make(32, 2.0 * kPi * 2.0);
  e.horizon = 20.0;
  e.dt = 0.02;
  e.sample_every = 5;
  e.late_probes = {10.0, 20.0};
  e.members = EnsembleConfig::spread_members(2, 0.5, 5.0, 2.0, 1, 2.0);
  return e;
}

}  // namespace

TEST(Forcing, CorrectorDividesByBracketSquared) {
  const GridSpec g = GridSpec::make(32, 2.0 * kPi * 2.0);
  const auto f = make_forcing({0.3, 1.5}, g);
  ASSERT_TRUE(f);
  const SpectralField fh = to_fourier(*f);
  const SpectralField gh = to_fourier(forcing_corrector(*f));
  for (int i1 = 0; i1 < g.modes; ++i1)
    for (int i2 = 0; i2 < g.modes; ++i2)
      EXPECT_NEAR(std::abs(gh(i1, i2) - fh(i1, i2) / (1.0 + g.xi_sq(i1, i2))), 0.0, 1e-15);
  EXPECT_FALSE(make_forcing({0.0, 1.0}, g));
  EXPECT_THROW(make_forcing({-1.0, 1.0}, g), ConfigError);
  EXPECT_THROW(make_forcing({1.0, 0.0}, g), ConfigError);
}

TEST(Ensemble, Validation) {
  EnsembleConfig e = small_ensemble();
  EXPECT_NO_THROW(e.validate());
  e.delta = 0.0;
  try {
    e.validate();
    FAIL();
  } catch (const ConfigError& err) {
    EXPECT_NE(std::string(err.what()).find("dissipative mode requires delta > 0"), std::string::npos);
  }
  e = small_ensemble();
  e.a = 0.5;
  EXPECT_THROW(e.validate(), ConfigError);
  e.a = 0.0;
  EXPECT_THROW(compactness_probe(e), ConfigError);
  e = small_ensemble();
  e.members.clear();
  EXPECT_THROW(e.validate(), ConfigError);
}

TEST(Ensemble, MemberRescaledToTargetNorm) {
  const auto members = EnsembleConfig::spread_members(8, 0.5, 5.0);
  EXPECT_DOUBLE_EQ(members.front().h1_norm, 0.5);
  EXPECT_NEAR(members.back().h1_norm, 5.0, 1e-12);
  const GridSpec g = GridSpec::make(32, 2.0 * kPi * 2.0);
  for (const auto& m : members) EXPECT_NEAR(sobolev_norm(make_member_data(m, g), 1.0) / m.h1_norm, 1.0, 1e-12);
}

TEST(EnergyFunctional, ZeroField) {
  const GridSpec g = GridSpec::make(16, 2.0 * kPi);
  EXPECT_EQ(energy_functional(SpectralField::zeros(g), nullptr, 1.0, 1.0), 0.0);
}

TEST(EnergyFunctional, SingleModeClosedForm) {
  const double L = 2.0 * kPi * 2.0, A = 0.7, c1 = 1.3, c2 = 0.8;
  const GridSpec g = GridSpec::make(32, L);
  const int k1 = 2, k2 = -1;
  const double xi1 = k1 * g.dxi(), xi2 = k2 * g.dxi();
  const SpectralField u = SpectralField::from_function(g, [&](double x, double y) {
    return A * std::exp(Complex(0.0, xi1 * x + xi2 * y));
  });
  const EnergyTerms t = energy_terms(u, nullptr);
  EXPECT_NEAR(t.gradient, A * A * L * L * (xi1 * xi1 + xi2 * xi2), 1e-10);
  EXPECT_NEAR(t.quartic, std::pow(A, 4) * L * L, 1e-10);
  EXPECT_NEAR(t.nonlocal, 0.0, 1e-10);
  EXPECT_NEAR(energy_functional(u, nullptr, c1, c2),
              A * A * L * L * (xi1 * xi1 + xi2 * xi2) + 0.5 * c1 * std::pow(A, 4) * L * L, 1e-9);
}

TEST(EnergyFunctional, MatchesIndependentQuadrature) {
  const GridSpec g = GridSpec::make(32, 2.0 * kPi * 2.0);
  const auto f = make_forcing({0.4, 1.0}, g);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpectralField u = random_smooth(g, seed, 0.5);
    const double a = energy_functional(u, &*f, 1.0, 0.7);
    const double b = energy_by_quadrature(u, &*f, 1.0, 0.7);
    EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(b)));
  }
}

TEST(EnergyFunctional, NonlocalTermSymmetric) {
  // int K(|u|^2)|u|^2 equals int |u|^2 K(|u|^2) under operand swap.
  const GridSpec g = GridSpec::make(32, 2.0 * kPi * 2.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpectralField u = random_smooth(g, 20 + seed, 0.5);
    SpectralField rho(g, Representation::physical);
    for (std::size_t i = 0; i < g.size(); ++i) rho.values()[i] = std::norm(u.values()[i]);
    const Complex lhs = inner_product(apply_K(rho), rho), rhs = inner_product(rho, apply_K(rho));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10 * std::abs(lhs));
    EXPECT_NEAR(energy_terms(u, nullptr).nonlocal, lhs.real(), 1e-10 * std::abs(lhs));
  }
}

namespace {
EnergyReport balance_run(double dt, double delta, bool forced) {
  const GridSpec g = GridSpec::make(32, 2.0 * kPi * 2.0);
  SolverConfig cfg;
  cfg.delta = delta;
  if (forced) cfg.forcing = make_forcing({0.3, 1.5}, g);
  cfg.dt = dt;
  cfg.t_end = 0.5;
  cfg.sample_every = 1;
  // The 2/3 mask after each gauge substep leaves an O(dt) projection defect (~1e-6 relative)
  // that hides the splitting order, so the balance law is checked on the unmasked scheme.
  cfg.dealias = false;
  const Trajectory traj = evolve(random_smooth(g, 3, 0.4), cfg);
  return energy_balance_residual(traj, cfg);
}
}  // namespace

TEST(EnergyBalance, ConservativeReducesToDrift) {
  const EnergyReport r = balance_run(2e-3, 0.0, false);
  EXPECT_TRUE(std::isnan(r.residual.front()));
  EXPECT_TRUE(std::isnan(r.residual.back()));
  for (std::size_t i = 1; i + 1 < r.times.size(); ++i) {
    const double drift = (r.energy[i + 1] - r.energy[i - 1]) / (r.times[i + 1] - r.times[i - 1]);
    EXPECT_NEAR(r.residual[i], drift, 1e-12 * r.max_energy);
  }
  EXPECT_LT(r.max_residual, 1e-3 * r.max_energy);
}

TEST(EnergyBalance, DampedForcedResidualSmallAndSecondOrder) {
  const EnergyReport coarse = balance_run(2e-3, 0.1, true);
  const EnergyReport fine = balance_run(1e-3, 0.1, true);
  EXPECT_LE(fine.max_residual, 1e-3 * fine.max_energy);
  const double ratio = coarse.max_residual / fine.max_residual;
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 5.0);
}

TEST(EnergyBalance, RejectsSparseSampling) {
  const GridSpec g = GridSpec::make(16, 2.0 * kPi);
  SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  cfg.sample_every = 20;
  const Trajectory traj = evolve(random_smooth(g, 1), cfg);
  EXPECT_THROW(energy_balance_residual(traj, cfg), ConfigError);
  cfg.store_fields = false;
  cfg.sample_every = 1;
  EXPECT_THROW(energy_balance_residual(evolve(random_smooth(g, 1), cfg), cfg), ConfigError);
}

TEST(EnvelopeFit, RecoversSyntheticEnvelope) {
  std::vector<double> t, y;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.1 * i);
    y.push_back(1.5 + 3.0 * std::exp(-0.4 * t.back()));
  }
  const EnvelopeFit f = fit_absorbing_envelope(t, y);
  EXPECT_TRUE(f.ok);
  EXPECT_NEAR(f.A, 3.0, 1e-6);
  EXPECT_NEAR(f.B, 0.4, 1e-6);
  EXPECT_NEAR(f.C, 1.5, 1e-6);
  EXPECT_NEAR(f.entry_time, std::log(3.0 / 0.15) / 0.4, 1e-4);

  for (auto& v : y) v = 3.0 - 2.0 * (v - 1.5) / 3.0;  // approach from below
  const EnvelopeFit g = fit_absorbing_envelope(t, y);
  EXPECT_TRUE(g.ok);
  EXPECT_NEAR(g.A, -2.0, 1e-6);
  EXPECT_NEAR(g.C, 3.0, 1e-6);
}

TEST(EnvelopeFit, ReportsNonDecayingSeries) {
  std::vector<double> t, flat, grow;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.1 * i);
    flat.push_back(2.0);
    grow.push_back(std::exp(0.3 * t.back()));
  }
  EXPECT_FALSE(fit_absorbing_envelope(t, flat).ok);
  EXPECT_FALSE(fit_absorbing_envelope(t, grow).ok);
  EXPECT_THROW(fit_absorbing_envelope({0, 1}, {1, 2}), ConfigError);
}

TEST(LinearDampedFlow, ContractsEverySobolevNorm) {
  const GridSpec g = GridSpec::make(32, 2.0 * kPi * 2.0);
  const SpectralField u = random_smooth(g, 9);
  for (double s : {0.0, 1.0, 1.4})
    for (double t : {0.5, 3.0}) {
      const double ratio = sobolev_norm(free_evolve(u, t, 0.2), s) / sobolev_norm(u, s);
      EXPECT_NEAR(ratio, std::exp(-0.2 * t), 1e-12);
    }
}

TEST(Absorbing, UnforcedSmallDataDecaysAtRateDelta) {
  EnsembleConfig e = small_ensemble();
  e.forcing.amplitude = 0.0;
  e.members = EnsembleConfig::spread_members(2, 0.01, 0.02, 2.0, 1, 2.0);
  const AbsorbingReport r = absorbing_experiment(e);
  for (const auto& f : r.fits) {
    EXPECT_TRUE(f.ok);
    EXPECT_NEAR(f.B, e.delta, 1e-3);
    EXPECT_LT(std::abs(f.C), 1e-4);
  }
  EXPECT_EQ(r.forcing_l2, 0.0);
}

TEST(Absorbing, RadiusIndependentOfDataAndMonotoneInForcing) {
  EnsembleConfig e = small_ensemble();
  e.horizon = 40.0;
  e.late_probes = {20.0, 40.0};
  e.members = EnsembleConfig::spread_members(2, 0.5, 5.0, 2.0, 1, 2.0);
  std::vector<double> radius;
  for (double amp : {0.05, 0.1, 0.2}) {
    e.forcing.amplitude = amp;
    const AbsorbingReport r = absorbing_experiment(e);
    EXPECT_LE(r.c_spread(), 0.2) << amp;
    EXPECT_GT(r.b_min, 0.0);
    radius.push_back(r.c_mean);
  }
  EXPECT_LT(radius[0], radius[1]);
  EXPECT_LT(radius[1], radius[2]);
}

TEST(Compactness, NoNonlinearityNoForcingGivesZero) {
  EnsembleConfig e = small_ensemble();
  e.c1 = e.c2 = 0.0;
  e.forcing.amplitude = 0.0;
  e.horizon = 2.0;
  e.late_probes = {1.0, 2.0};
  const CompactnessReport r = compactness_probe(e);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) {
    EXPECT_LT(row.sup_n, 1e-12 * row.w0);
    EXPECT_GT(row.w0, 0.0);
  }
  ASSERT_EQ(r.distances.size(), 2u);
  EXPECT_NEAR(r.distances[1].median / r.distances[0].median, std::exp(-e.delta), 1e-10);
}

TEST(Compactness, LateDistancesContract) {
  EnsembleConfig e = small_ensemble();
  e.members = EnsembleConfig::spread_members(4, 0.5, 5.0, 2.0, 1, 2.0);
  e.horizon = 40.0;
  e.late_probes = {20.0, 40.0};
  const CompactnessReport r = compactness_probe(e);
  ASSERT_EQ(r.distances.size(), 2u);
  EXPECT_LE(r.distances[1].median, r.distances[0].median);
  EXPECT_GT(r.forcing_l2, 0.0);
  for (const auto& row : r.rows) EXPECT_TRUE(std::isfinite(row.sup_n));
}
