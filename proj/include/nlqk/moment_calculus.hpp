#pragma once

// Kernel moments from nonlocality moments, by two exact routes: the
// exponential of a truncated power series, and a sum over partitions whose
// parts are all >= 2.

#include <nlqk/nonlocality.hpp>
#include <nlqk/rational.hpp>

#include <nlohmann/json.hpp>

#include <span>
#include <vector>

namespace nlqk {

/// Truncated power series c_0 + c_1 p + ... + c_N p^N over the rationals.
class FormalSeries {
 public:
  explicit FormalSeries(int order);
  explicit FormalSeries(std::vector<Rational> coeffs);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Rational& operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  Rational& operator[](int k) { return coeffs_.at(static_cast<std::size_t>(k)); }
  std::span<const Rational> coeffs() const { return coeffs_; }

  FormalSeries derivative() const;

  friend FormalSeries operator+(const FormalSeries& a, const FormalSeries& b);
  /// Product truncated at min(order(a), order(b)).
  friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b);
  friend bool operator==(const FormalSeries&, const FormalSeries&) = default;

 private:
  std::vector<Rational> coeffs_;
};

/// exp(f) for f with zero constant term.
FormalSeries series_exp(const FormalSeries& f);

/// exp( (s/2) p^2 sum_j a_j p^j / j! ) to order N, with s = sigma^2 tau.
FormalSeries mgf_series(std::span<const Rational> a, const Rational& variance_rate, int order);

/// mu_0..mu_N of the kernel, mu_n = n! [p^n] mgf_series.
std::vector<Rational> kernel_moments(std::span<const Rational> a, const Rational& variance_rate,
                                     int order);
std::vector<Rational> kernel_moments(const MomentSequence& a, double sigma, double tau,
                                     int order);

using Partition = std::vector<int>;  // parts in nonincreasing order

struct PartitionSet {
  int n = 0;
  std::vector<Partition> parts;
};

/// Every partition of n whose parts are all >= 2. Empty for n in {0, 1}.
PartitionSet partitions_without_one(int n);

/// mu_n = n! sum_P prod_i [s a_{i-2} / (2 (i-2)!)]^{m_i} / m_i!
/// where m_i is the multiplicity of part i in P.
std::vector<Rational> kernel_moments_partition(std::span<const Rational> a,
                                               const Rational& variance_rate, int order);
std::vector<Rational> kernel_moments_partition(const MomentSequence& a, double sigma, double tau,
                                               int order);

/// |approx - exact| / max(|exact|, scale). `scale` sets the size of a
/// moment whose exact value is zero, e.g. (sigma^2 tau)^{n/2}.
double relative_gap(double approx, double exact, double scale);

struct MomentReportRow {
  int n = 0;
  Rational series;
  Rational partition;
  double quadrature = 0.0;
  double rel_gap = 0.0;
};

nlohmann::json to_json(std::span<const MomentReportRow> rows);

}  // namespace nlqk
