#include <nlqk/kramers_moyal.hpp>

#include <nlqk/errors.hpp>
#include <nlqk/rational.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace nlqk {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes,
                                                  int max_order) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(max_order + 1),
                                     std::vector<double>(static_cast<std::size_t>(n), 0.0));
  auto at = [&](int m, int j) -> double& { return c[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)]; };
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  at(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) at(k, i) = c1 * (k * at(k - 1, i - 1) - c5 * at(k, i - 1)) / c2;
        at(0, i) = -c1 * c5 * at(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) at(k, j) = (c4 * at(k, j) - k * at(k - 1, j)) / c3;
      at(0, j) = c4 * at(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

double stable_time_step(double dx, double sigma, double eps, int truncation) {
  return 0.4 * dx * dx / (sigma * sigma) / std::pow(1.0 + std::abs(eps) / dx, truncation - 2);
}

namespace {

constexpr int kWidth = 2 * kStencilHalfWidth + 1;
using Stencil = std::array<double, kWidth>;

// Combined weights of sum_k c_k d^k for a point sitting at `offset` within a
// 9-point window of unit spacing, scaled to spacing dx.
Stencil combined_stencil(int offset, std::span<const double> coeffs, double dx) {
  std::array<double, kWidth> nodes{};
  for (int j = 0; j < kWidth; ++j) nodes[static_cast<std::size_t>(j)] = j;
  const int order = static_cast<int>(coeffs.size()) + 1;
  const auto w = fornberg_weights(offset, nodes, order);
  Stencil s{};
  for (int k = 2; k <= order; ++k) {
    const double scale = coeffs[static_cast<std::size_t>(k - 2)] / std::pow(dx, k);
    for (int j = 0; j < kWidth; ++j) {
      s[static_cast<std::size_t>(j)] += scale * w[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    }
  }
  return s;
}

class Operator {
 public:
  Operator(int n, std::span<const double> coeffs, double dx) : n_(n) {
    for (int off = 0; off < kWidth; ++off) stencils_[static_cast<std::size_t>(off)] = combined_stencil(off, coeffs, dx);
  }

  void apply(const std::vector<double>& u, std::vector<double>& out) const {
    for (int i = 0; i < n_; ++i) {
      int start = i - kStencilHalfWidth;
      int off = kStencilHalfWidth;
      if (start < 0) {
        off += start;
        start = 0;
      } else if (start + kWidth > n_) {
        off += start + kWidth - n_;
        start = n_ - kWidth;
      }
      const Stencil& s = stencils_[static_cast<std::size_t>(off)];
      double acc = 0.0;
      for (int j = 0; j < kWidth; ++j) acc += s[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(start + j)];
      out[static_cast<std::size_t>(i)] = acc;
    }
  }

 private:
  int n_;
  std::array<Stencil, kWidth> stencils_{};
};

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SolutionSlice solve_kramers_moyal(const SolutionSlice& u0, std::span<const double> coeffs,
                                  double sigma, double eps, double tau,
                                  KramersMoyalOptions options) {
  const int truncation = static_cast<int>(coeffs.size()) + 1;
  if (coeffs.empty() || truncation > kMaxKramersMoyalOrder) {
    throw InvalidArgument("solve_kramers_moyal: truncation order must be in [2, 8]");
  }
  if (!(sigma > 0.0) || !(tau > 0.0)) throw InvalidArgument("solve_kramers_moyal: sigma, tau must be > 0");
  const int n = u0.grid().size();
  if (n < kWidth) throw InvalidArgument("solve_kramers_moyal: grid too small for the stencil");
  const double dx = u0.grid().dx();
  const double dt_max = stable_time_step(dx, sigma, eps, truncation);
  int steps = static_cast<int>(std::ceil(tau / dt_max));
  if (options.n_steps) {
    if (*options.n_steps < 1) throw InvalidArgument("solve_kramers_moyal: n_steps must be >= 1");
    if (tau / *options.n_steps > dt_max * (1.0 + 1e-12)) {
      throw InvalidArgument("solve_kramers_moyal: n_steps violates the stability bound (need >= " +
                            std::to_string(steps) + ")");
    }
    steps = *options.n_steps;
  }
  const double dt = tau / steps;

  const Operator op(n, coeffs, dx);
  std::vector<double> u = u0.values();
  std::vector<double> k1(u.size()), k2(u.size()), k3(u.size()), k4(u.size()), tmp(u.size());
  double prev = sup_norm(u);
  for (int step = 0; step < steps; ++step) {
    op.apply(u, k1);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    op.apply(tmp, k2);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    op.apply(tmp, k3);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + dt * k3[i];
    op.apply(tmp, k4);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    const double now = sup_norm(u);
    if (!std::isfinite(now) || (prev > 0.0 && now > 10.0 * prev)) {
      throw NumericalInstability("solve_kramers_moyal: sup-norm grew from " + std::to_string(prev) +
                                 " to " + std::to_string(now) + " at step " + std::to_string(step));
    }
    prev = now;
  }
  return SolutionSlice(u0.grid(), std::move(u), u0.tau() + tau);
}

SolutionSlice solve_kramers_moyal(const SolutionSlice& u0, const BackwardPDE& pde, double sigma,
                                  double eps, double tau, KramersMoyalOptions options) {
  const auto coeffs = pde.numeric(sigma, eps);
  return solve_kramers_moyal(u0, coeffs, sigma, eps, tau, options);
}

BackwardPDE kramers_moyal_pde(std::span<const CoeffPoly> h_moments, int truncation) {
  if (truncation < 2) throw InvalidArgument("kramers_moyal_pde: truncation must be >= 2");
  if (static_cast<int>(h_moments.size()) < truncation - 1) {
    throw MomentsUnavailable("kramers_moyal_pde: need H moments up to order " +
                             std::to_string(truncation - 2));
  }
  BackwardPDE pde;
  pde.convention = PdeConvention::fokker_planck;
  for (int k = 0; k + 2 <= truncation; ++k) {
    Rational scale = Rational(1, 2) / factorial(k);
    if (k % 2 == 1) scale = -scale;
    pde.coeffs.push_back(CoeffPoly::sigma(2) * h_moments[static_cast<std::size_t>(k)] * scale);
  }
  return pde;
}

std::vector<double> kramers_moyal_coefficients(const NonlocalityFunction& h, double sigma,
                                               int truncation) {
  const auto mu = moments(h, truncation - 2);
  std::vector<double> out;
  double fact = 1.0;
  for (int k = 0; k + 2 <= truncation; ++k) {
    if (k > 0) fact *= k;
    out.push_back(0.5 * sigma * sigma * (k % 2 ? -1.0 : 1.0) * mu[k] / fact);
  }
  return out;
}

}  // namespace nlqk
