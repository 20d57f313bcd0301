#include <nlqk/gauge.hpp>

#include <nlqk/errors.hpp>
#include <nlqk/io.hpp>

#include <boost/math/interpolators/makima.hpp>

#include <algorithm>
#include <cmath>

namespace nlqk {

namespace {

// e^z - z - 1 and (1+u) ln(1+u) - u lose all digits to cancellation for
// small arguments, so both switch to their Taylor series there.
constexpr double kSeriesCutoff = 0.1;

double exp_remainder(double z) {
  if (std::abs(z) >= kSeriesCutoff) return std::expm1(z) - z;
  double term = z * z / 2.0;
  double sum = term;
  for (int k = 3; k < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
    term *= z / k;
    sum += term;
  }
  return sum;
}

double entropy_remainder(double u) {
  if (std::abs(u) >= kSeriesCutoff) return (1.0 + u) * std::log1p(u) - u;
  double sum = 0.0;
  double power = u;
  for (int k = 2; k < 40; ++k) {
    power *= u;
    const double term = ((k % 2 == 0) ? 1.0 : -1.0) * power / (k * (k - 1.0));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

GaugePotential GaugePotential::from_function(std::function<double(double)> v, std::string label) {
  return GaugePotential(std::move(v), std::move(label));
}

GaugePotential GaugePotential::from_samples(std::vector<double> x, std::vector<double> v,
                                            std::string label) {
  if (x.size() != v.size() || x.size() < 4) {
    throw InvalidArgument("gauge potential: need at least 4 matching (x, v) samples");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i])) throw InvalidArgument("gauge potential: non-finite sample");
    if (i > 0 && !(x[i] > x[i - 1])) throw InvalidArgument("gauge potential: x must be strictly increasing");
  }
  const double lo = x.front();
  const double hi = x.back();
  auto spline = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(
      std::move(x), std::move(v));
  return GaugePotential(
      [spline, lo, hi](double at) {
        if (at < lo || at > hi) {
          throw DomainError("gauge potential: x = " + io::format_double(at) + " outside sampled range [" +
                            io::format_double(lo) + ", " + io::format_double(hi) + "]");
        }
        return (*spline)(at);
      },
      std::move(label));
}

GaugePotential GaugePotential::from_csv(const std::filesystem::path& path) {
  const auto rows = io::read_numeric_csv(path, 2);
  std::vector<double> x, v;
  for (const auto& r : rows) {
    x.push_back(r[0]);
    v.push_back(r[1]);
  }
  return from_samples(std::move(x), std::move(v), path.filename().string());
}

GaugePotential GaugePotential::zero() {
  return from_function([](double) { return 0.0; }, "zero");
}

GaugeConfig::GaugeConfig(double sigma_, double eps_, GaugePotential v_)
    : sigma(sigma_), eps(eps_), v(std::move(v_)) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("gauge: sigma must be > 0");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("gauge: eps must be >= 0");
}

double hamiltonian(double p, double sigma, double eps) {
  const double s2 = sigma * sigma;
  if (eps == 0.0) return 0.5 * s2 * p * p;
  return s2 / (eps * eps) * exp_remainder(eps * p);
}

double free_lagrangian(double xdot, double sigma, double eps) {
  const double s2 = sigma * sigma;
  if (eps == 0.0) return xdot * xdot / (2.0 * s2);
  const double u = eps * xdot / s2;
  if (!(u > -1.0)) {
    throw DomainError("free_lagrangian: need eps*xdot/sigma^2 > -1, got " + io::format_double(u));
  }
  return s2 / (eps * eps) * entropy_remainder(u);
}

double gauge_hamiltonian(double p, double x, const GaugeConfig& cfg) {
  const double v = cfg.v(x);
  return hamiltonian(p - v, cfg.sigma, cfg.eps) - free_lagrangian(cfg.sigma * cfg.sigma * v, cfg.sigma, cfg.eps);
}

double velocity_from_momentum(double p, double x, const GaugeConfig& cfg) {
  const double s2 = cfg.sigma * cfg.sigma;
  const double shifted = p - cfg.v(x);
  if (cfg.classical()) return s2 * shifted;
  return s2 * std::expm1(cfg.eps * shifted) / cfg.eps;
}

double canonical_momentum(double xdot, double x, const GaugeConfig& cfg) {
  const double s2 = cfg.sigma * cfg.sigma;
  if (cfg.classical()) return xdot / s2 + cfg.v(x);
  const double u = cfg.eps * xdot / s2;
  if (!(u > -1.0)) {
    throw DomainError("canonical_momentum: need xdot > -sigma^2/eps = " + io::format_double(-s2 / cfg.eps) +
                      ", got " + io::format_double(xdot));
  }
  return std::log1p(u) / cfg.eps + cfg.v(x);
}

PhasePoint legendre_point(double xdot, double x, const GaugeConfig& cfg) {
  return {x, canonical_momentum(xdot, x, cfg), xdot};
}

double lagrangian(double xdot, double x, const GaugeConfig& cfg) {
  const double p = canonical_momentum(xdot, x, cfg);
  return p * xdot - gauge_hamiltonian(p, x, cfg);
}

double translation_violation(const GaugeConfig& cfg, const PhaseGrid& grid) {
  if (grid.n_xdot < 2 || grid.n_x < 2) throw InvalidArgument("translation_violation: grid needs >= 2 points per axis");
  const double s2 = cfg.sigma * cfg.sigma;
  double worst = 0.0;
  for (int i = 0; i < grid.n_xdot; ++i) {
    const double xdot = grid.xdot_min + (grid.xdot_max - grid.xdot_min) * i / (grid.n_xdot - 1);
    for (int j = 0; j < grid.n_x; ++j) {
      const double x = grid.x_min + (grid.x_max - grid.x_min) * j / (grid.n_x - 1);
      const double shifted = free_lagrangian(xdot + s2 * cfg.v(x), cfg.sigma, cfg.eps);
      worst = std::max(worst, std::abs(lagrangian(xdot, x, cfg) - shifted));
    }
  }
  return worst;
}

nlohmann::json violation_report(double eps, double sup_violation, const PhaseGrid& grid) {
  return {{"eps", eps},
          {"sup_violation", sup_violation},
          {"grid",
           {{"xdot_min", grid.xdot_min},
            {"xdot_max", grid.xdot_max},
            {"x_min", grid.x_min},
            {"x_max", grid.x_max},
            {"n_xdot", grid.n_xdot},
            {"n_x", grid.n_x}}}};
}

std::vector<GaugePotential> standard_potentials() {
  return {GaugePotential::from_function([](double x) { return std::sin(x); }, "sin"),
          GaugePotential::from_function([](double x) { return 0.5 * std::cos(2.0 * x); }, "half_cos2"),
          GaugePotential::from_function([](double x) { return 0.3 + 0.2 * x; }, "affine")};
}

}  // namespace nlqk
