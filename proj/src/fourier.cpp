#include <nlqk/fourier.hpp>

#include <nlqk/errors.hpp>

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>

namespace nlqk {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

FourierGrid::FourierGrid(int n_points, double spacing) : n_(n_points), dx_(spacing) {
  if (!is_power_of_two(n_points)) {
    throw InvalidArgument("FourierGrid: n must be a positive power of two, got " +
                          std::to_string(n_points));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw InvalidArgument("FourierGrid: spacing must be > 0");
  }
}

FourierGrid FourierGrid::with_length(int n_points, double length) {
  if (!(length > 0.0)) throw InvalidArgument("FourierGrid: length must be > 0");
  return FourierGrid(n_points, length / n_points);
}

std::vector<double> FourierGrid::points() const {
  std::vector<double> xs(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) xs[static_cast<std::size_t>(j)] = x(j);
  return xs;
}

double FourierGrid::frequency(int k) const {
  const int m = k < n_ / 2 ? k : k - n_;
  return 2.0 * M_PI * m / length();
}

namespace {

// The FFTW planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

struct BufferDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

void dft(std::span<std::complex<double>> data, int sign) {
  const int n = static_cast<int>(data.size());
  if (n == 0) return;
  std::unique_ptr<fftw_complex, BufferDeleter> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * data.size())));
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(n, buf.get(), buf.get(), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE));
  }
  if (!plan) throw Error("dft: FFTW planning failed");
  std::memcpy(buf.get(), data.data(), sizeof(fftw_complex) * data.size());
  fftw_execute(plan.get());
  std::memcpy(static_cast<void*>(data.data()), buf.get(), sizeof(fftw_complex) * data.size());
}

}  // namespace nlqk
