#include <nlqk/errors.hpp>
#include <nlqk/moment_calculus.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace nlqk;

namespace {

// mu_n = n! [p^n] M(p) from a Cauchy integral on |p| = r with m nodes;
// exponentially accurate for entire M. Shares no code with the library.
template <class Mgf>
double cauchy_moment(Mgf mgf, int n, double r = 1.0, int m = 128) {
  std::complex<double> acc = 0.0;
  for (int j = 0; j < m; ++j) {
    const std::complex<double> z = std::polar(r, 2.0 * std::numbers::pi * j / m);
    acc += mgf(z) / std::pow(z, n);
  }
  double fact = 1.0;
  for (int k = 2; k <= n; ++k) fact *= k;
  return (acc / static_cast<double>(m)).real() * fact;
}

}  // namespace

TEST(FormalSeries, ExpOfIdentityIsExponential) {
  FormalSeries f(10);
  f[1] = 1;
  const auto e = series_exp(f);
  for (int n = 0; n <= 10; ++n) EXPECT_EQ(e[n], Rational(1) / factorial(n));
}

TEST(FormalSeries, ExpInverseAndDerivativeIdentity) {
  FormalSeries f(9);
  f[1] = Rational(1, 3);
  f[2] = Rational(-2, 7);
  f[5] = Rational(5, 11);
  FormalSeries neg(9);
  for (int k = 0; k <= 9; ++k) neg[k] = -f[k];
  const auto prod = series_exp(f) * series_exp(neg);
  FormalSeries one(9);
  one[0] = 1;
  EXPECT_EQ(prod, one);
  // (e^f)' = f' e^f, truncated one order lower
  const auto lhs = series_exp(f).derivative();
  const auto rhs = f.derivative() * series_exp(f);
  for (int k = 0; k < 8; ++k) EXPECT_EQ(lhs[k], rhs[k]);
}

TEST(FormalSeries, ExpRejectsConstantTerm) {
  FormalSeries f(3);
  f[0] = 1;
  EXPECT_THROW(series_exp(f), InvalidArgument);
}

TEST(Partitions, CountsMatchPartitionNumberDifferences) {
  // partitions of n without parts equal to 1: p(n) - p(n-1)
  const int p[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77};
  EXPECT_TRUE(partitions_without_one(0).parts.empty());
  EXPECT_TRUE(partitions_without_one(1).parts.empty());
  for (int n = 2; n <= 12; ++n) {
    const auto set = partitions_without_one(n);
    EXPECT_EQ(static_cast<int>(set.parts.size()), p[n] - p[n - 1]) << n;
    for (const auto& part : set.parts) {
      int sum = 0;
      for (std::size_t i = 0; i < part.size(); ++i) {
        EXPECT_GE(part[i], 2);
        if (i > 0) {
          EXPECT_LE(part[i], part[i - 1]);
        }
        sum += part[i];
      }
      EXPECT_EQ(sum, n);
    }
  }
}

TEST(KernelMoments, DiracGivesGaussianMoments) {
  std::vector<Rational> a(9, Rational(0));
  a[0] = 1;
  const Rational s(3, 2);
  const auto mu = kernel_moments(a, s, 10);
  Rational dfact = 1;
  for (int n = 0; n <= 10; ++n) {
    if (n % 2) {
      EXPECT_EQ(mu[n], 0);
    } else {
      Rational sp = 1;
      for (int k = 0; k < n / 2; ++k) sp *= s;
      EXPECT_EQ(mu[n], dfact * sp) << n;
      dfact *= n + 1;
    }
  }
}

TEST(KernelMoments, SeriesAndPartitionAgreeExactly) {
  const std::vector<Rational> a{1, Rational(1, 3), Rational(2, 5), Rational(-1, 7), Rational(3, 2),
                                Rational(1, 9), Rational(4, 3), Rational(1, 11), Rational(5, 13),
                                Rational(2, 17), Rational(3, 19)};
  const Rational s(7, 4);
  EXPECT_EQ(kernel_moments(a, s, 12), kernel_moments_partition(a, s, 12));
}

TEST(KernelMoments, GaussianHAgainstCauchyIntegral) {
  const double eps = 0.05;
  const double s = 1.0;
  const auto mu = kernel_moments(moments(NonlocalityFunction::gaussian(eps), 6), 1.0, 1.0, 8);
  auto mgf = [&](std::complex<double> p) {
    return std::exp(0.5 * s * p * p * std::exp(0.5 * eps * eps * p * p));
  };
  for (int n = 0; n <= 8; ++n) EXPECT_NEAR(to_double(mu[n]), cauchy_moment(mgf, n), 1e-10) << n;
  EXPECT_NEAR(to_double(mu[4]), 3.0 + 6.0 * eps * eps, 1e-15);
}

TEST(KernelMoments, TriangularHAgainstCauchyIntegral) {
  const double eps = 0.3;
  const double s = 0.8;
  const auto mu = kernel_moments_partition(moments(NonlocalityFunction::triangular(eps), 8),
                                           std::sqrt(0.8), 1.0, 10);
  auto mgf = [&](std::complex<double> p) {
    const auto z = eps * p;
    return std::exp(0.5 * s * p * p * 2.0 * (std::exp(z) - 1.0 - z) / (z * z));
  };
  for (int n = 0; n <= 10; ++n) {
    EXPECT_NEAR(to_double(mu[n]), cauchy_moment(mgf, n), 1e-9 * std::max(1.0, std::abs(to_double(mu[n])))) << n;
  }
}

TEST(KernelMoments, MgfSeriesCoefficients) {
  const std::vector<Rational> a{1, 0, Rational(1, 4)};
  const auto m = mgf_series(a, Rational(2), 4);
  // exponent p^2 + (1/4) p^4 / 2; exp -> 1 + p^2 + (1/2 + 1/8) p^4
  EXPECT_EQ(m[2], Rational(1));
  EXPECT_EQ(m[4], Rational(5, 8));
}

TEST(KernelMoments, InsufficientInputOrder) {
  const std::vector<Rational> a{1, 0};
  EXPECT_THROW(kernel_moments(a, Rational(1), 6), MomentsUnavailable);
  EXPECT_THROW(kernel_moments_partition(a, Rational(1), 6), MomentsUnavailable);
}

TEST(KernelMoments, RelativeGapUsesScaleForZeros) {
  EXPECT_NEAR(relative_gap(1.01, 1.0, 0.0), 0.01, 1e-14);
  EXPECT_DOUBLE_EQ(relative_gap(1e-3, 0.0, 2.0), 5e-4);
}

TEST(KernelMoments, ReportJson) {
  const MomentReportRow row{4, Rational(603, 200), Rational(603, 200), 3.015, 1e-12};
  const auto j = to_json(std::span<const MomentReportRow>(&row, 1));
  EXPECT_EQ(j[0]["series"], "603/200");
  EXPECT_EQ(j[0]["n"], 4);
}
