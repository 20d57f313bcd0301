#include <nlqk/errors.hpp>
#include <nlqk/gauge.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

using namespace nlqk;

namespace {
GaugePotential sine() {
  return GaugePotential::from_function([](double x) { return std::sin(x); }, "sin");
}
}  // namespace

TEST(Hamiltonian, ClosedFormValues) {
  EXPECT_EQ(hamiltonian(0.0, 1.3, 0.4), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian(1.0, 1.0, 1.0), std::numbers::e - 2.0);
  EXPECT_DOUBLE_EQ(hamiltonian(1.0, 1.0, 0.0), 0.5);
  EXPECT_NEAR(hamiltonian(1.0, 1.0, 1e-9), 0.5, 1e-9);
}

TEST(Hamiltonian, SmoothAcrossSeriesCutoff) {
  // series branch below |eps p| = 0.1, closed form above
  for (double p : {0.1 - 1e-12, 0.1 + 1e-12}) {
    const double z = p;
    EXPECT_NEAR(hamiltonian(p, 1.0, 1.0), std::exp(z) - z - 1.0, 1e-15);
  }
}

TEST(Hamiltonian, LinearApproachToQuadraticLimit) {
  const double p = 0.8;
  const double d1 = std::abs(hamiltonian(p, 1.0, 0.02) - 0.5 * p * p);
  const double d2 = std::abs(hamiltonian(p, 1.0, 0.01) - 0.5 * p * p);
  EXPECT_NEAR(d1 / d2, 2.0, 0.05);
}

TEST(Hamiltonian, Convex) {
  for (double eps : {0.0, 0.05, 0.5, 2.0}) {
    const double h = 1e-3;
    for (double p = -3.0; p <= 3.0; p += 0.1) {
      const double second = hamiltonian(p + h, 1.0, eps) - 2 * hamiltonian(p, 1.0, eps) + hamiltonian(p - h, 1.0, eps);
      EXPECT_GE(second, -1e-10);
    }
  }
}

TEST(Legendre, VelocityFormulaAndStationaryPoint) {
  const GaugeConfig flat(1.0, 1.0, GaugePotential::zero());
  EXPECT_DOUBLE_EQ(velocity_from_momentum(1.0, 0.0, flat), std::numbers::e - 1.0);
  const GaugeConfig classical(1.5, 0.0, GaugePotential::zero());
  EXPECT_DOUBLE_EQ(velocity_from_momentum(0.4, 0.0, classical), 2.25 * 0.4);
  const GaugeConfig cfg(1.1, 0.2, sine());
  EXPECT_EQ(velocity_from_momentum(std::sin(0.3), 0.3, cfg), 0.0);
}

TEST(Legendre, CanonicalMomentum) {
  const GaugeConfig cfg(1.1, 0.2, sine());
  EXPECT_DOUBLE_EQ(canonical_momentum(0.0, 0.3, cfg), std::sin(0.3));
  EXPECT_NEAR(canonical_momentum(velocity_from_momentum(0.7, 0.3, cfg), 0.3, cfg), 0.7, 1e-10);
  const GaugeConfig classical(1.1, 0.0, sine());
  EXPECT_DOUBLE_EQ(canonical_momentum(0.5, 0.3, classical), 0.5 / 1.21 + std::sin(0.3));
  EXPECT_THROW(canonical_momentum(-1.21 / 0.2 - 0.01, 0.3, cfg), DomainError);
}

TEST(Legendre, RoundTripOnPhaseGrid) {
  for (double eps : {0.0, 0.05, 0.2, 1.0}) {
    const GaugeConfig cfg(1.1, eps, sine());
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double p = -1.0 + 2.0 * i / 99;
      for (int j = 0; j < 100; ++j) {
        const double x = -std::numbers::pi + 2.0 * std::numbers::pi * j / 99;
        worst = std::max(worst, std::abs(canonical_momentum(velocity_from_momentum(p, x, cfg), x, cfg) - p));
      }
    }
    EXPECT_LT(worst, 1e-10) << eps;
  }
}

TEST(Legendre, HamiltonSlopeRecoversVelocity) {
  const GaugeConfig cfg(0.9, 0.3, sine());
  for (double xdot : {-0.8, -0.1, 0.0, 0.4, 1.5}) {
    const double x = 0.7;
    const double p = canonical_momentum(xdot, x, cfg);
    const double h = 1e-5;
    const double slope = (gauge_hamiltonian(p + h, x, cfg) - gauge_hamiltonian(p - h, x, cfg)) / (2 * h);
    EXPECT_NEAR(slope, xdot, 1e-6);
  }
}

TEST(Lagrangian, ClassicalCases) {
  const GaugeConfig free(1.3, 0.0, GaugePotential::zero());
  EXPECT_NEAR(lagrangian(0.7, 0.0, free), 0.49 / (2 * 1.69), 1e-15);
  const double c = 0.4;
  const GaugeConfig shifted(1.3, 0.0, GaugePotential::from_function([c](double) { return c; }));
  EXPECT_NEAR(lagrangian(0.7, 0.0, shifted), std::pow(0.7 + 1.69 * c, 2) / (2 * 1.69), 1e-14);
  const GaugeConfig quantum(1.0, 0.1, GaugePotential::zero());
  EXPECT_NEAR(lagrangian(0.0, 0.0, quantum), 0.0, 1e-15);
  EXPECT_NEAR(lagrangian(0.5, 0.0, quantum), free_lagrangian(0.5, 1.0, 0.1), 1e-15);
}

TEST(Lagrangian, FreeLagrangianIsLegendreDual) {
  // L0(xdot) = sup_p (p xdot - H(p)), checked by brute-force maximization.
  const double sigma = 1.2, eps = 0.3;
  for (double xdot : {-1.0, 0.2, 2.0}) {
    double best = -INFINITY;
    for (double p = -5.0; p <= 5.0; p += 1e-4) best = std::max(best, p * xdot - hamiltonian(p, sigma, eps));
    EXPECT_NEAR(free_lagrangian(xdot, sigma, eps), best, 1e-7);
  }
}

TEST(Violation, ClassicalIsZeroAndQuantumGrows) {
  for (const auto& v : standard_potentials()) {
    EXPECT_LE(translation_violation(GaugeConfig(1.0, 0.0, v)), 1e-10) << v.label();
  }
  double last = 0.0;
  for (double eps : {0.05, 0.1, 0.2}) {
    const double now = translation_violation(GaugeConfig(1.0, eps, sine()));
    EXPECT_GT(now, last);
    last = now;
  }
  // continuity: halving eps roughly halves the violation
  const double full = translation_violation(GaugeConfig(1.0, 0.1, sine()));
  const double half = translation_violation(GaugeConfig(1.0, 0.05, sine()));
  EXPECT_GT(full / half, 1.5);
  EXPECT_LT(full / half, 2.5);
}

TEST(Violation, RegressionValueForSine) {
  EXPECT_NEAR(translation_violation(GaugeConfig(1.0, 0.1, sine())), 0.11338633045157342, 1e-12);
}

TEST(GaugePotentialTest, SamplesUseMonotoneCubic) {
  std::vector<double> x, v;
  for (int i = 0; i <= 200; ++i) {
    x.push_back(-4.0 + 8.0 * i / 200);
    v.push_back(std::sin(x.back()));
  }
  const auto pot = GaugePotential::from_samples(x, v);
  for (double at : {-3.0, -0.123, 0.0, 2.5}) EXPECT_NEAR(pot(at), std::sin(at), 1e-6);
  EXPECT_THROW(pot(5.0), DomainError);
  EXPECT_THROW(GaugePotential::from_samples({0, 1, 2}, {0, 1, 2}), InvalidArgument);
  EXPECT_THROW(GaugePotential::from_samples({0, 2, 1, 3}, {0, 1, 2, 3}), InvalidArgument);
}

TEST(GaugePotentialTest, CsvAndConfigValidation) {
  const char* base = std::getenv("NLQK_TEST_TMP");
  std::filesystem::path dir = base ? base : std::filesystem::temp_directory_path();
  std::filesystem::create_directories(dir);
  const auto path = dir / "v.csv";
  {
    std::ofstream f(path);
    f << "x,v\n";
    for (int i = 0; i <= 100; ++i) f << -4.0 + 0.08 * i << "," << 0.5 * (-4.0 + 0.08 * i) << "\n";
  }
  const auto pot = GaugePotential::from_csv(path);
  EXPECT_NEAR(pot(1.0), 0.5, 1e-12);
  EXPECT_THROW(GaugeConfig(0.0, 0.1, pot), InvalidArgument);
  EXPECT_THROW(GaugeConfig(1.0, -0.1, pot), InvalidArgument);
  EXPECT_TRUE(GaugeConfig(1.0, 0.0, pot).classical());
  const auto j = violation_report(0.1, 0.2, PhaseGrid{});
  EXPECT_EQ(j["grid"]["n_x"], 100);
}
