#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dslab/xsb.hpp"

using namespace dslab;

namespace {

constexpr double kPi = std::numbers::pi;

SpaceTimeField random_st(const SpaceTimeGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  SpaceTimeField f(g, Representation::physical);
  for (auto& v : f.values()) v = Complex(n(rng), n(rng));
  return f;
}

double jb(double x) { return std::sqrt(1.0 + x * x); }

}  // namespace

TEST(SpaceTimeGrid, Validation) {
  EXPECT_THROW((SpaceTimeGrid{12, 16, 16, 1, 1, 1}.validate()), ConfigError);
  EXPECT_THROW((SpaceTimeGrid{16, 16, 16, 1, 0, 1}.validate()), ConfigError);
  const SpaceTimeGrid g = SpaceTimeGrid::from_spatial(GridSpec::make(16, 2 * kPi), 2 * kPi, 64);
  EXPECT_DOUBLE_EQ(g.dxi1, 1.0);
  EXPECT_DOUBLE_EQ(g.dtau, 1.0);
  ASSERT_TRUE(tau_nyquist_warning(g).has_value());
  const SpaceTimeGrid fine = SpaceTimeGrid::from_spatial(GridSpec::make(8, 2 * kPi), 2 * kPi / 8, 64);
  EXPECT_FALSE(tau_nyquist_warning(fine).has_value());
}

TEST(SpaceTimeField, RoundTripAndPlancherel) {
  const SpaceTimeGrid g{16, 8, 32, 0.3, 0.7, 0.25};
  const SpaceTimeField u = random_st(g, 3);
  SpaceTimeField f = u;
  f.make_fourier();
  SpaceTimeField back = f;
  back.make_physical();
  double err = 0.0, scale = 0.0, phys = 0.0;
  for (std::size_t i = 0; i < u.values().size(); ++i) {
    err = std::max(err, std::abs(back.values()[i] - u.values()[i]));
    scale = std::max(scale, std::abs(u.values()[i]));
    phys += std::norm(u.values()[i]);
  }
  EXPECT_LE(err, 1e-12 * scale);
  const double dX = std::pow(2 * kPi, 3) / (g.size() * g.cell());
  EXPECT_NEAR(xsb_norm(f, 0.0, 0.0), std::sqrt(phys * dX), 1e-10 * std::sqrt(phys * dX));
}

TEST(SpaceTimeField, SingleModeNorm) {
  const SpaceTimeGrid g{16, 16, 16, 0.5, 0.5, 0.75};
  SpaceTimeField f(g, Representation::fourier, {0.0, 2.0, -3.0});
  const double amp = 1.7;
  f(fft::bin_of(3, 16), fft::bin_of(-2, 16), fft::bin_of(5, 16)) = amp;
  const double x1 = 1.5, x2 = 2.0 - 1.0, tau = -3.0 + 3.75;
  const double xs = x1 * x1 + x2 * x2;
  for (double s : {0.0, 0.6, 1.3})
    for (double b : {0.0, 0.51, -0.49}) {
      const double expect = amp * std::sqrt(g.cell()) * std::pow(1 + xs, s / 2) * std::pow(jb(tau + xs), b);
      EXPECT_NEAR(xsb_norm(f, s, b), expect, 1e-12 * expect);
    }
  const double minus = amp * std::sqrt(g.cell()) * std::pow(jb(tau - xs), 0.51);
  EXPECT_NEAR(xsb_norm(f, 0.0, 0.51, -1), minus, 1e-12 * minus);
}

TEST(SpaceTimeField, WindowedFreeSolutionMatchesGeometricSum) {
  // u(x, t) = sum_xi g(xi) e^{i(x.xi - t|xi|^2)} sampled on t in [0, T_w); each spatial mode's
  // tau-spectrum is a geometric sum, evaluated here in closed form.
  const GridSpec sg = GridSpec::make(8, 2 * kPi);
  const int mt = 64;
  const double tw = 4.0;
  const SpaceTimeGrid g = SpaceTimeGrid::from_spatial(sg, tw, mt);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  std::vector<Complex> gh(sg.size());
  for (auto& v : gh) v = Complex(n(rng), n(rng));

  SpaceTimeField u(g, Representation::physical);
  const double dx = sg.dx(), dt = tw / mt;
  for (int i1 = 0; i1 < 8; ++i1)
    for (int i2 = 0; i2 < 8; ++i2)
      for (int it = 0; it < mt; ++it) {
        Complex acc = 0.0;
        for (int k1 = 0; k1 < 8; ++k1)
          for (int k2 = 0; k2 < 8; ++k2) {
            const double a = sg.frequency(k1), b = sg.frequency(k2);
            acc += gh[sg.index(k1, k2)] * std::polar(1.0, a * i1 * dx + b * i2 * dx - (a * a + b * b) * it * dt);
          }
        u(i1, i2, it) = acc;
      }

  const double s = 0.7, bb = 0.51;
  const double dX = std::pow(2 * kPi, 3) / (g.size() * g.cell());
  double acc = 0.0;
  for (int k1 = 0; k1 < 8; ++k1)
    for (int k2 = 0; k2 < 8; ++k2) {
      const double a = sg.frequency(k1), b = sg.frequency(k2), xs = a * a + b * b;
      for (int it = 0; it < mt; ++it) {
        const double tau = fft::signed_index(it, mt) * g.dtau;
        // sum_j e^{-i(|xi|^2 + tau) j dt}, j = 0..mt-1
        const Complex z = std::polar(1.0, -(xs + tau) * dt);
        const Complex geo = std::abs(z - 1.0) < 1e-12 ? Complex(mt) : (std::pow(z, mt) - 1.0) / (z - 1.0);
        const Complex F = std::pow(2 * kPi, -1.5) * dX * static_cast<double>(sg.size()) * gh[sg.index(k1, k2)] * geo;
        acc += std::pow(1 + xs, s) * std::pow(1 + (tau + xs) * (tau + xs), bb) * std::norm(F);
      }
    }
  const double oracle = std::sqrt(acc * g.cell());
  EXPECT_NEAR(xsb_norm(u, s, bb), oracle, 1e-9 * oracle);
  EXPECT_GT(xsb_norm(u, s, bb), xsb_norm(u, s, 0.0));
}

TEST(SpaceTimeField, ConjugateAndProductCarriers) {
  const SpaceTimeGrid g{8, 8, 8, 0.5, 0.5, 0.5};
  SpaceTimeField a(g, Representation::fourier, {1.0, 2.0, 3.0});
  a(1, 0, 0) = 1.0;
  const SpaceTimeField c = a.conj();
  EXPECT_EQ(c.carrier(), (SpaceTimeField::Carrier{-1.0, -2.0, -3.0}));
  EXPECT_NEAR(std::abs(c(fft::bin_of(-1, 8), 0, 0) - 1.0), 0.0, 1e-13);
  const SpaceTimeField p = multiply(a, c);
  EXPECT_EQ(p.carrier(), (SpaceTimeField::Carrier{0.0, 0.0, 0.0}));
  EXPECT_THROW(multiply(a, SpaceTimeField(SpaceTimeGrid{8, 8, 16, 0.5, 0.5, 0.5}, Representation::fourier)),
               ConfigError);
}

TEST(Resonance, OrthogonalAndOriginCases) {
  EXPECT_NEAR(resonance_h({3, 0}, {0, 2}, {-3, -2}, {1, 1, -1}), 0.0, 1e-14);
  EXPECT_EQ(resonance_h({0, 0}, {0, 0}, {0, 0}, {1, 1, 1}), 0.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const Freq2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{-a[0] - b[0], -a[1] - b[1]};
    EXPECT_GT(resonance_h(a, b, c, {1, 1, 1}), 0.0);
    const double dot = a[0] * b[0] + a[1] * b[1];
    EXPECT_NEAR(std::abs(resonance_h(a, b, c, {1, 1, -1})), 2 * std::abs(dot), 1e-12 * (1 + std::abs(dot)));
  }
  EXPECT_THROW(resonance_h({1, 0}, {0, 1}, {0, 0}, {1, 1, 1}), ConfigError);
  EXPECT_THROW(resonance_h({0, 0}, {0, 0}, {0, 0}, {1, 0, 1}), ConfigError);
}

TEST(Knapp, PreconditionsNameTheInequality) {
  KnappConfig c;
  c.N = 2.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.N = 16.0;
  c.xi2_step = 0.1;
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("1/N >= xi2_step"), std::string::npos);
  }
  c.xi2_step = 0.0;
  EXPECT_NO_THROW(knapp_grid(c));
}

TEST(Knapp, BoxVolumesAndNormPowerLaws) {
  std::vector<double> Ns{8, 16, 32, 64}, q1, q2, nu, nv, nw;
  for (double N : Ns) {
    KnappConfig c;
    c.N = N;
    const KnappTriple t = knapp_triple(c, knapp_grid(c));
    q1.push_back(support_volume(t.u));
    q2.push_back(support_volume(t.v));
    nu.push_back(xsb_norm(t.u, c.s, c.b));
    nv.push_back(xsb_norm(t.v, c.s, c.b));
    nw.push_back(xsb_norm(t.w, c.s, c.b));
  }
  EXPECT_NEAR(loglog_slope(Ns, q1), -1.0, 0.05);
  EXPECT_NEAR(loglog_slope(Ns, q2), -0.5, 0.05);
  EXPECT_NEAR(loglog_slope(Ns, nu), 0.6 - 0.5, 0.1);
  EXPECT_NEAR(loglog_slope(Ns, nv), -0.25, 0.05);
  for (std::size_t i = 0; i < Ns.size(); ++i) EXPECT_DOUBLE_EQ(nv[i], nw[i]);
}

TEST(Trilinear, SingleModeClosedForm) {
  const SpaceTimeGrid g{16, 16, 16, 0.5, 0.5, 0.5};
  SpaceTimeField u(g, Representation::fourier);
  u(1, 2, 3) = 1.0;
  const double x1 = 0.5, x2 = 1.0, tau = 1.5, xs = x1 * x1 + x2 * x2;
  const double s = 0.6, a = 0.3, b = 0.51, c1 = 0.7, c2 = 1.9;
  // u conj(u) u has spectral density (2 pi)^{-3} dV^2 at the same mode
  const double dv = g.cell();
  const double alpha = 0.0;  // u conj(u) sits at the zero frequency
  const double num = std::abs(c1 + c2 * alpha) * std::pow(2 * kPi, -3) * dv * dv * std::sqrt(dv) *
                     std::pow(1 + xs, (s + a) / 2) * std::pow(jb(tau + xs), b - 1);
  const double one = std::sqrt(dv) * std::pow(1 + xs, s / 2) * std::pow(jb(tau + xs), b);
  EXPECT_NEAR(trilinear_ratio(u, u, u, s, a, b, c1, c2), num / (one * one * one), 1e-10 * num / std::pow(one, 3));
}

TEST(Trilinear, KTermReductions) {
  const SpaceTimeGrid g{16, 16, 16, 0.5, 0.5, 0.5};
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  // Spectra on the xi1 = 0 plane: the K term vanishes.
  SpaceTimeField u(g, Representation::fourier), v = u, w = u;
  for (int i2 : {0, 1, 15})
    for (int it : {0, 1, 15}) {
      u(0, i2, it) = Complex(n(rng), n(rng));
      v(0, i2, it) = Complex(n(rng), n(rng));
      w(0, i2, it) = Complex(n(rng), n(rng));
    }
  const double base = trilinear_ratio(u, v, w, 0.6, 0.3, 0.51, 1.0, 0.0);
  EXPECT_NEAR(trilinear_ratio(u, v, w, 0.6, 0.3, 0.51, 1.0, 3.0), base, 1e-12 * base);
  // Spectra on the xi2 = 0 axis with u conj(v) away from the origin: K acts as the identity.
  SpaceTimeField p(g, Representation::fourier), q = p;
  p(1, 0, 0) = 1.0;
  q(2, 0, 1) = 1.0;
  const double r0 = trilinear_ratio(p, q, q, 0.6, 0.3, 0.51, 1.0, 0.0);
  EXPECT_NEAR(trilinear_ratio(p, q, q, 0.6, 0.3, 0.51, 1.0, 2.0), 3.0 * r0, 1e-10 * r0);
  EXPECT_THROW(trilinear_ratio(SpaceTimeField(g, Representation::fourier), q, q, 0.6, 0.3, 0.51, 1, 0), ConfigError);
}

TEST(Knapp, SweepBaselineIsFinite) {
  KnappConfig c;
  c.N = 16;
  const SpaceTimeGrid g = knapp_grid(c);
  const KnappTriple t = knapp_triple(c, g);
  const double r = trilinear_ratio(t.u, t.v, t.w, 0.6, 0.3, 0.51, 1.0, 1.0);
  EXPECT_TRUE(std::isfinite(r));
  EXPECT_GT(r, 0.0);
  EXPECT_THROW(knapp_sweep({8, 16, 32}, c, 1, 1), ConfigError);
  EXPECT_THROW(knapp_sweep({8, 16, 40, 64}, c, 1, 1), ConfigError);
}
