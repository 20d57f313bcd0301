#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nlqk {

/// Uniform periodic grid x_j = -L/2 + j dx, j = 0..n-1, L = n dx, with
/// n a power of two. Frequencies p_k = 2 pi k / L for k < n/2 and
/// 2 pi (k - n) / L otherwise.
class FourierGrid {
 public:
  FourierGrid(int n_points, double spacing);
  static FourierGrid with_length(int n_points, double length);

  int size() const { return n_; }
  double dx() const { return dx_; }
  double length() const { return n_ * dx_; }
  double x(int j) const { return -0.5 * length() + j * dx_; }
  std::vector<double> points() const;
  /// Angular frequency of DFT bin k.
  double frequency(int k) const;
  /// Index of the grid point x = 0.
  int origin_index() const { return n_ / 2; }

  friend bool operator==(const FourierGrid&, const FourierGrid&) = default;

 private:
  int n_;
  double dx_;
};

bool is_power_of_two(int n);

/// In-place unnormalized DFT. sign = -1: sum_j v_j e^{-2 pi i jk/n};
/// sign = +1: sum_j v_j e^{+2 pi i jk/n}. Thread-safe.
void dft(std::span<std::complex<double>> data, int sign);

}  // namespace nlqk
