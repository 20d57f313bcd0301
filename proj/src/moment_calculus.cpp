#include <nlqk/moment_calculus.hpp>

#include <nlqk/errors.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace nlqk {

FormalSeries::FormalSeries(int order) {
  if (order < 0) throw InvalidArgument("FormalSeries: negative order");
  coeffs_.assign(static_cast<std::size_t>(order) + 1, Rational(0));
}

FormalSeries::FormalSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidArgument("FormalSeries: empty coefficient list");
}

FormalSeries FormalSeries::derivative() const {
  FormalSeries d(std::max(order() - 1, 0));
  for (int k = 1; k <= order(); ++k) d[k - 1] = coeffs_[static_cast<std::size_t>(k)] * k;
  return d;
}

FormalSeries operator+(const FormalSeries& a, const FormalSeries& b) {
  FormalSeries out(std::min(a.order(), b.order()));
  for (int k = 0; k <= out.order(); ++k) out[k] = a[k] + b[k];
  return out;
}

FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
  FormalSeries out(std::min(a.order(), b.order()));
  for (int i = 0; i <= out.order(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j <= out.order(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

FormalSeries series_exp(const FormalSeries& f) {
  if (f[0] != 0) throw InvalidArgument("series_exp: constant term must be zero");
  // g' = f' g  =>  n g_n = sum_{k=1}^n k f_k g_{n-k}
  FormalSeries g(f.order());
  g[0] = 1;
  for (int n = 1; n <= f.order(); ++n) {
    Rational s = 0;
    for (int k = 1; k <= n; ++k) {
      if (f[k] != 0) s += f[k] * g[n - k] * k;
    }
    g[n] = s / n;
  }
  return g;
}

namespace {

void require_order(std::span<const Rational> a, int order) {
  if (order < 0) throw InvalidArgument("kernel moments: order must be >= 0");
  if (static_cast<int>(a.size()) - 1 < order - 2) {
    throw MomentsUnavailable("kernel moments of order " + std::to_string(order) +
                             " need nonlocality moments up to " + std::to_string(order - 2));
  }
}

std::vector<Rational> to_rationals(const MomentSequence& a) {
  std::vector<Rational> out;
  out.reserve(a.values().size());
  for (double v : a.values()) out.push_back(exact_rational(v));
  return out;
}

}  // namespace

FormalSeries mgf_series(std::span<const Rational> a, const Rational& variance_rate, int order) {
  require_order(a, order);
  FormalSeries exponent(order);
  for (int k = 2; k <= order; ++k) {
    exponent[k] = variance_rate / 2 * a[static_cast<std::size_t>(k - 2)] / factorial(k - 2);
  }
  return series_exp(exponent);
}

std::vector<Rational> kernel_moments(std::span<const Rational> a, const Rational& variance_rate,
                                     int order) {
  const FormalSeries m = mgf_series(a, variance_rate, order);
  std::vector<Rational> mu(static_cast<std::size_t>(order) + 1);
  for (int n = 0; n <= order; ++n) mu[static_cast<std::size_t>(n)] = m[n] * factorial(n);
  return mu;
}

std::vector<Rational> kernel_moments(const MomentSequence& a, double sigma, double tau,
                                     int order) {
  const Rational s = exact_rational(sigma) * exact_rational(sigma) * exact_rational(tau);
  return kernel_moments(to_rationals(a), s, order);
}

PartitionSet partitions_without_one(int n) {
  if (n < 0) throw InvalidArgument("partitions_without_one: n must be >= 0");
  PartitionSet set{n, {}};
  Partition current;
  // parts emitted in nonincreasing order, each in [2, max_part]
  std::function<void(int, int)> recurse = [&](int remaining, int max_part) {
    if (remaining == 0) {
      set.parts.push_back(current);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 2; --part) {
      current.push_back(part);
      recurse(remaining - part, part);
      current.pop_back();
    }
  };
  if (n >= 2) recurse(n, n);
  return set;
}

std::vector<Rational> kernel_moments_partition(std::span<const Rational> a,
                                               const Rational& variance_rate, int order) {
  require_order(a, order);
  std::vector<Rational> mu(static_cast<std::size_t>(order) + 1, Rational(0));
  mu[0] = 1;
  for (int n = 2; n <= order; ++n) {
    Rational total = 0;
    for (const auto& partition : partitions_without_one(n).parts) {
      std::map<int, int> multiplicity;
      for (int part : partition) ++multiplicity[part];
      Rational weight = 1;
      for (const auto& [part, count] : multiplicity) {
        const Rational factor =
            variance_rate * a[static_cast<std::size_t>(part - 2)] / (2 * factorial(part - 2));
        Rational power = 1;
        for (int c = 0; c < count; ++c) power *= factor;
        weight *= power / factorial(count);
      }
      total += weight;
    }
    mu[static_cast<std::size_t>(n)] = total * factorial(n);
  }
  return mu;
}

std::vector<Rational> kernel_moments_partition(const MomentSequence& a, double sigma, double tau,
                                               int order) {
  const Rational s = exact_rational(sigma) * exact_rational(sigma) * exact_rational(tau);
  return kernel_moments_partition(to_rationals(a), s, order);
}

double relative_gap(double approx, double exact, double scale) {
  return std::abs(approx - exact) / std::max(std::abs(exact), std::abs(scale));
}

nlohmann::json to_json(std::span<const MomentReportRow> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n},
                   {"series", to_string(r.series)},
                   {"partition", to_string(r.partition)},
                   {"quadrature", r.quadrature},
                   {"rel_gap", r.rel_gap}});
  }
  return out;
}

}  // namespace nlqk
