#pragma once

// Non-quadratic Hamiltonian H(p) = sigma^2/eps^2 (e^{eps p} - eps p - 1),
// its Legendre transform, and the failure of the gauge / drift-change
// equivalence once eps != 0.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

namespace nlqk {

/// v(x), either an exact callable or samples joined by a modified Akima
/// cubic (no extrapolation outside the sampled range).
class GaugePotential {
 public:
  static GaugePotential from_function(std::function<double(double)> v, std::string label = "custom");
  static GaugePotential from_samples(std::vector<double> x, std::vector<double> v,
                                     std::string label = "samples");
  static GaugePotential from_csv(const std::filesystem::path& path);
  static GaugePotential zero();

  double operator()(double x) const { return eval_(x); }
  const std::string& label() const { return label_; }

 private:
  GaugePotential(std::function<double(double)> eval, std::string label)
      : eval_(std::move(eval)), label_(std::move(label)) {}
  std::function<double(double)> eval_;
  std::string label_;
};

struct GaugeConfig {
  double sigma = 1.0;
  double eps = 0.0;
  GaugePotential v = GaugePotential::zero();

  GaugeConfig(double sigma_, double eps_, GaugePotential v_);
  bool classical() const { return eps == 0.0; }
};

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
  double xdot = 0.0;
};

/// sigma^2/eps^2 (e^{eps p} - eps p - 1); sigma^2 p^2 / 2 at eps = 0.
double hamiltonian(double p, double sigma, double eps);
/// Legendre dual of hamiltonian: sigma^2/eps^2 ((1+u) ln(1+u) - u), u = eps xdot / sigma^2.
double free_lagrangian(double xdot, double sigma, double eps);

/// H(p - v(x)) - L0(sigma^2 v(x)). The potential term is what makes the
/// eps = 0 case an exact drift change.
double gauge_hamiltonian(double p, double x, const GaugeConfig& cfg);
/// dH'/dp = sigma^2/eps (e^{eps (p - v)} - 1)
double velocity_from_momentum(double p, double x, const GaugeConfig& cfg);
/// (1/eps) ln(1 + eps xdot / sigma^2) + v(x); throws DomainError outside the log domain.
double canonical_momentum(double xdot, double x, const GaugeConfig& cfg);
PhasePoint legendre_point(double xdot, double x, const GaugeConfig& cfg);
/// p xdot - H'(p, x) at p = canonical_momentum(xdot, x)
double lagrangian(double xdot, double x, const GaugeConfig& cfg);

struct PhaseGrid {
  double xdot_min = -1.0;
  double xdot_max = 1.0;
  double x_min = -3.141592653589793;
  double x_max = 3.141592653589793;
  int n_xdot = 100;
  int n_x = 100;
};

/// sup over the grid of |L'(xdot, x) - L0(xdot + sigma^2 v(x))|
double translation_violation(const GaugeConfig& cfg, const PhaseGrid& grid = {});

nlohmann::json violation_report(double eps, double sup_violation, const PhaseGrid& grid);

/// Potentials used by the dichotomy checks: sin x, 0.5 cos 2x, 0.3 + 0.2 x.
std::vector<GaugePotential> standard_potentials();

}  // namespace nlqk
