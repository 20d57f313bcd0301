#include <nlqk/nonlocality.hpp>

#include <nlqk/errors.hpp>
#include <nlqk/io.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlqk {

namespace {

constexpr double kNormalizationTol = 1e-10;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double double_factorial_odd(int m) {  // (m)!! for odd m, 1 for m <= 0
  double r = 1.0;
  for (int i = m; i > 1; i -= 2) r *= i;
  return r;
}

void require_positive_scale(double eps, const char* what) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidArgument(std::string(what) + ": length scale must be > 0");
  }
}

double trapezoid_weight(const std::vector<double>& y, std::size_t i) {
  const std::size_t n = y.size();
  double w = 0.0;
  if (i > 0) w += 0.5 * (y[i] - y[i - 1]);
  if (i + 1 < n) w += 0.5 * (y[i + 1] - y[i]);
  return w;
}

}  // namespace

// ----------------------------------------------------------- MomentSequence

MomentSequence::MomentSequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("MomentSequence: empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("MomentSequence: non-finite moment");
  }
  if (std::abs(values_[0] - 1.0) > kNormalizationTol) {
    throw InvalidArgument("MomentSequence: a_0 must be 1");
  }
}

bool hankel_psd(const MomentSequence& moments, double rel_tol) {
  const int m = moments.max_order() / 2;
  Eigen::MatrixXd hankel(m + 1, m + 1);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) hankel(i, j) = moments[i + j];
  }
  // Moments of very different magnitude: scale to unit diagonal first.
  Eigen::VectorXd d(m + 1);
  for (int i = 0; i <= m; ++i) {
    d(i) = hankel(i, i) > 0.0 ? 1.0 / std::sqrt(hankel(i, i)) : 1.0;
  }
  const Eigen::MatrixXd scaled = d.asDiagonal() * hankel * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scaled, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double largest = std::max(ev.cwiseAbs().maxCoeff(), 1.0);
  return ev.minCoeff() >= -rel_tol * largest;
}

// ------------------------------------------------------ NonlocalityFunction

NonlocalityFunction NonlocalityFunction::dirac() { return NonlocalityFunction(kind::Dirac{}); }

NonlocalityFunction NonlocalityFunction::gaussian(double eps) {
  require_positive_scale(eps, "Gaussian");
  return NonlocalityFunction(kind::Gaussian{eps});
}

NonlocalityFunction NonlocalityFunction::triangular(double eps) {
  require_positive_scale(eps, "Triangular");
  return NonlocalityFunction(kind::Triangular{eps});
}

NonlocalityFunction NonlocalityFunction::tabulated(std::vector<double> y,
                                                   std::vector<double> density,
                                                   bool normalize) {
  if (y.size() != density.size() || y.size() < 2) {
    throw InvalidArgument("Tabulated: need at least two (y, density) pairs of equal length");
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(density[i]) || density[i] < 0.0) {
      throw InvalidArgument("Tabulated: density must be finite and nonnegative");
    }
    if (i > 0 && !(y[i] > y[i - 1])) throw InvalidArgument("Tabulated: y must be strictly increasing");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) mass += trapezoid_weight(y, i) * density[i];
  if (normalize) {
    if (!(mass > 0.0)) throw InvalidArgument("Tabulated: density has zero mass");
    for (double& d : density) d /= mass;
  } else if (std::abs(mass - 1.0) > kNormalizationTol) {
    throw InvalidArgument("Tabulated: density integrates to " + io::format_double(mass) +
                          ", expected 1");
  }
  return NonlocalityFunction(kind::Tabulated{std::move(y), std::move(density)});
}

NonlocalityFunction NonlocalityFunction::moment_only(MomentSequence moments) {
  return NonlocalityFunction(kind::MomentOnly{std::move(moments)});
}

NonlocalityFunction NonlocalityFunction::convolution(NonlocalityFunction left,
                                                     NonlocalityFunction right) {
  return NonlocalityFunction(
      kind::Convolution{std::make_shared<const NonlocalityFunction>(std::move(left)),
                        std::make_shared<const NonlocalityFunction>(std::move(right))});
}

std::string NonlocalityFunction::kind_name() const {
  return std::visit(overloaded{[](const kind::Dirac&) { return std::string("dirac"); },
                               [](const kind::Gaussian&) { return std::string("gaussian"); },
                               [](const kind::Triangular&) { return std::string("triangular"); },
                               [](const kind::Tabulated&) { return std::string("tabulated"); },
                               [](const kind::MomentOnly&) { return std::string("moment_only"); },
                               [](const kind::Convolution&) { return std::string("convolution"); }},
                    kind_);
}

double NonlocalityFunction::length_scale() const {
  return std::visit(overloaded{[](const kind::Dirac&) { return 0.0; },
                               [](const kind::Gaussian& g) { return g.eps; },
                               [](const kind::Triangular& t) { return t.eps; },
                               [](const auto&) { return std::numeric_limits<double>::quiet_NaN(); }},
                    kind_);
}

bool NonlocalityFunction::has_char_fn() const {
  if (std::holds_alternative<kind::MomentOnly>(kind_)) return false;
  if (const auto* c = std::get_if<kind::Convolution>(&kind_)) {
    return c->left->has_char_fn() && c->right->has_char_fn();
  }
  return true;
}

bool NonlocalityFunction::has_density() const {
  return std::holds_alternative<kind::Gaussian>(kind_) ||
         std::holds_alternative<kind::Triangular>(kind_) ||
         std::holds_alternative<kind::Tabulated>(kind_);
}

double NonlocalityFunction::density(double y) const {
  return std::visit(
      overloaded{
          [y](const kind::Gaussian& g) {
            const double z = y / g.eps;
            return std::exp(-0.5 * z * z) / (g.eps * std::sqrt(2.0 * M_PI));
          },
          [y](const kind::Triangular& t) {
            if (y < 0.0 || y > t.eps) return 0.0;
            return 2.0 * (t.eps - y) / (t.eps * t.eps);
          },
          [y](const kind::Tabulated& t) {
            if (y < t.y.front() || y > t.y.back()) return 0.0;
            const auto it = std::upper_bound(t.y.begin(), t.y.end(), y);
            if (it == t.y.end()) return t.density.back();
            const auto i = static_cast<std::size_t>(it - t.y.begin());
            const double w = (y - t.y[i - 1]) / (t.y[i] - t.y[i - 1]);
            return (1.0 - w) * t.density[i - 1] + w * t.density[i];
          },
          [this](const auto&) -> double {
            throw InvalidArgument("density unavailable for nonlocality kind '" + kind_name() + "'");
          }},
      kind_);
}

// ------------------------------------------------------------------ moments

std::vector<double> convolve_moments(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double binom = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      out[k] += binom * a[j] * b[k - j];
      binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
  }
  return out;
}

MomentSequence moments(const NonlocalityFunction& h, int max_order) {
  if (max_order < 0) throw InvalidArgument("moments: N must be >= 0");
  const auto n = static_cast<std::size_t>(max_order) + 1;
  std::vector<double> a(n, 0.0);
  a[0] = 1.0;
  std::visit(
      overloaded{
          [&](const kind::Dirac&) {},
          [&](const kind::Gaussian& g) {
            for (std::size_t k = 2; k < n; k += 2) {
              a[k] = std::pow(g.eps, static_cast<double>(k)) *
                     double_factorial_odd(static_cast<int>(k) - 1);
            }
          },
          [&](const kind::Triangular& t) {
            for (std::size_t k = 1; k < n; ++k) {
              const double kd = static_cast<double>(k);
              a[k] = 2.0 * std::pow(t.eps, kd) / ((kd + 1.0) * (kd + 2.0));
            }
          },
          [&](const kind::Tabulated& t) {
            for (std::size_t k = 1; k < n; ++k) {
              double s = 0.0;
              for (std::size_t i = 0; i < t.y.size(); ++i) {
                s += trapezoid_weight(t.y, i) * std::pow(t.y[i], static_cast<double>(k)) *
                     t.density[i];
              }
              a[k] = s;
            }
          },
          [&](const kind::MomentOnly& m) {
            if (m.moments.max_order() < max_order) {
              throw MomentsUnavailable("moments unavailable: stored order " +
                                       std::to_string(m.moments.max_order()) + " < requested " +
                                       std::to_string(max_order));
            }
            std::copy_n(m.moments.values().begin(), n, a.begin());
          },
          [&](const kind::Convolution& c) {
            const auto l = moments(*c.left, max_order);
            const auto r = moments(*c.right, max_order);
            a = convolve_moments(l.values(), r.values());
          }},
      h.kind());
  return MomentSequence(std::move(a));
}

std::vector<Rational> exact_moments(const NonlocalityFunction& h, int max_order) {
  if (max_order < 0) throw InvalidArgument("exact_moments: N must be >= 0");
  const auto n = static_cast<std::size_t>(max_order) + 1;
  std::vector<Rational> a(n, Rational(0));
  a[0] = 1;
  if (const auto* g = std::get_if<kind::Gaussian>(&h.kind())) {
    const Rational e2 = exact_rational(g->eps) * exact_rational(g->eps);
    Rational power = 1;
    Rational dfact = 1;  // (k-1)!!
    for (std::size_t k = 2; k < n; k += 2) {
      power *= e2;
      a[k] = power * dfact;
      dfact *= static_cast<long>(k + 1);
    }
  } else if (const auto* t = std::get_if<kind::Triangular>(&h.kind())) {
    const Rational e = exact_rational(t->eps);
    Rational power = 1;
    for (std::size_t k = 1; k < n; ++k) {
      power *= e;
      a[k] = Rational(2) * power / Rational(static_cast<long>((k + 1) * (k + 2)));
    }
  } else if (const auto* c = std::get_if<kind::Convolution>(&h.kind())) {
    const auto l = exact_moments(*c->left, max_order);
    const auto r = exact_moments(*c->right, max_order);
    for (std::size_t k = 0; k < n; ++k) {
      Rational s = 0;
      BigInt binom = 1;
      for (std::size_t j = 0; j <= k; ++j) {
        s += Rational(binom) * l[j] * r[k - j];
        binom = binom * static_cast<long>(k - j) / static_cast<long>(j + 1);
      }
      a[k] = s;
    }
  } else if (!std::holds_alternative<kind::Dirac>(h.kind())) {
    const auto m = moments(h, max_order);
    for (std::size_t k = 1; k < n; ++k) a[k] = exact_rational(m[static_cast<int>(k)]);
  }
  return a;
}

CoeffPoly triangular_moment_symbolic(int k) {
  if (k < 0) throw InvalidArgument("triangular_moment_symbolic: k must be >= 0");
  return CoeffPoly({0, k}, Rational(2, (k + 1) * (k + 2)));
}

// --------------------------------------------------- characteristic function

namespace {

// 2 (e^z - 1 - z) / z^2 for z = i q
std::complex<double> triangular_char(double q) {
  using namespace std::complex_literals;
  if (std::abs(q) < 0.5) {
    // 2 sum_j z^j / (j+2)!
    std::complex<double> z(0.0, q);
    std::complex<double> term = 1.0 / 2.0;  // z^0 / 2!
    std::complex<double> sum = term;
    for (int j = 1; j < 30; ++j) {
      term *= z / static_cast<double>(j + 2);
      sum += term;
    }
    return 2.0 * sum;
  }
  const std::complex<double> z(0.0, q);
  return 2.0 * (std::exp(z) - 1.0 - z) / (z * z);
}

}  // namespace

std::complex<double> char_fn(const NonlocalityFunction& h, double p) {
  return std::visit(
      overloaded{
          [](const kind::Dirac&) { return std::complex<double>(1.0, 0.0); },
          [p](const kind::Gaussian& g) {
            return std::complex<double>(std::exp(-0.5 * g.eps * g.eps * p * p), 0.0);
          },
          [p](const kind::Triangular& t) { return triangular_char(t.eps * p); },
          [p](const kind::Tabulated& t) {
            std::complex<double> s = 0.0;
            for (std::size_t i = 0; i < t.y.size(); ++i) {
              s += trapezoid_weight(t.y, i) * t.density[i] * std::polar(1.0, p * t.y[i]);
            }
            return s;
          },
          [](const kind::MomentOnly&) -> std::complex<double> {
            throw CharacteristicFunctionUnavailable(
                "characteristic function unavailable for a moment-only nonlocality");
          },
          [p](const kind::Convolution& c) { return char_fn(*c.left, p) * char_fn(*c.right, p); }},
      h.kind());
}

NonlocalityFunction qfp_matching_nonlocality(double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("qfp_matching_nonlocality: eps must be > 0");
  return NonlocalityFunction::triangular(eps);
}

NonlocalityFunction self_convolve(const NonlocalityFunction& h) {
  if (!h.has_char_fn()) {
    throw CharacteristicFunctionUnavailable(
        "self_convolve: characteristic function unavailable for '" + h.kind_name() + "'");
  }
  if (std::holds_alternative<kind::Dirac>(h.kind())) return h;
  if (const auto* g = std::get_if<kind::Gaussian>(&h.kind())) {
    return NonlocalityFunction::gaussian(g->eps * std::sqrt(2.0));
  }
  return NonlocalityFunction::convolution(h, h);
}

NonlocalityFunction load_tabulated_csv(const std::filesystem::path& path, bool normalize) {
  const auto rows = io::read_numeric_csv(path, 2);
  std::vector<double> y, d;
  y.reserve(rows.size());
  d.reserve(rows.size());
  for (const auto& r : rows) {
    y.push_back(r[0]);
    d.push_back(r[1]);
  }
  return NonlocalityFunction::tabulated(std::move(y), std::move(d), normalize);
}

}  // namespace nlqk
