#include "vvlab/nonlocal.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "vvlab/errors.hpp"

namespace vvlab {
namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct SpectralOperator::Impl {
  Grid1D grid;
  std::size_t n = 0;
  std::size_t n_modes = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> wavenumber;

  explicit Impl(const Grid1D& g) : grid(g), n(g.n_cells), n_modes(g.n_cells / 2 + 1) {
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n_modes);
    if (real == nullptr || spec == nullptr) throw std::bad_alloc();
    {
      std::lock_guard lock(planner_mutex());
      // FFTW_ESTIMATE keeps plans, and therefore results, deterministic.
      forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
    }
    wavenumber.resize(n_modes);
    for (std::size_t m = 0; m < n_modes; ++m) {
      wavenumber[m] = std::numbers::pi * static_cast<double>(m) / grid.half_width;
    }
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }

  void load(std::span<const double> in) {
    if (in.size() != n) throw std::invalid_argument("field length does not match grid");
    std::copy(in.begin(), in.end(), real);
    fftw_execute(forward);
  }

  void store(std::span<double> out) {
    if (out.size() != n) throw std::invalid_argument("field length does not match grid");
    fftw_execute(backward);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = real[i] * scale;
  }
};

SpectralOperator::SpectralOperator(const Grid1D& grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralOperator::~SpectralOperator() = default;
SpectralOperator::SpectralOperator(SpectralOperator&&) noexcept = default;
SpectralOperator& SpectralOperator::operator=(SpectralOperator&&) noexcept = default;

const Grid1D& SpectralOperator::grid() const { return impl_->grid; }

void SpectralOperator::derivative(std::span<const double> in, std::span<double> out) {
  auto& s = *impl_;
  s.load(in);
  s.spec[0][0] = s.spec[0][1] = 0.0;
  for (std::size_t m = 1; m + 1 < s.n_modes; ++m) {
    const double re = s.spec[m][0];
    const double im = s.spec[m][1];
    const double k = s.wavenumber[m];
    s.spec[m][0] = -k * im;
    s.spec[m][1] = k * re;
  }
  s.spec[s.n_modes - 1][0] = s.spec[s.n_modes - 1][1] = 0.0;
  s.store(out);
}

void SpectralOperator::antiderivative(std::span<const double> in, std::span<double> out) {
  auto& s = *impl_;
  s.load(in);
  s.spec[0][0] = s.spec[0][1] = 0.0;
  for (std::size_t m = 1; m + 1 < s.n_modes; ++m) {
    const double re = s.spec[m][0];
    const double im = s.spec[m][1];
    const double k = s.wavenumber[m];
    // (re + i im) / (i k) = im/k - i re/k
    s.spec[m][0] = im / k;
    s.spec[m][1] = -re / k;
  }
  s.spec[s.n_modes - 1][0] = s.spec[s.n_modes - 1][1] = 0.0;
  s.store(out);
}

void SpectralOperator::drop_nyquist(std::span<const double> in, std::span<double> out) {
  auto& s = *impl_;
  s.load(in);
  s.spec[s.n_modes - 1][0] = s.spec[s.n_modes - 1][1] = 0.0;
  s.store(out);
}

double mean_tolerance(const Field& u, const Grid1D& grid) {
  return 1e-10 * std::max(1.0, u.max_abs()) * grid.length();
}

Field derivative(const Field& u, const Grid1D& grid) {
  SpectralOperator op(grid);
  Field out(grid.n_cells, u.t);
  op.derivative(u.values, out.values);
  return out;
}

Field antiderivative(const Field& u, const Grid1D& grid, Gauge) {
  if (u.size() != grid.n_cells) throw std::invalid_argument("field length does not match grid");
  double mean = 0.0;
  for (double v : u.values) mean += v * grid.dx;
  const double tol = mean_tolerance(u, grid);
  if (!(std::abs(mean) <= tol)) throw MeanViolation(mean, tol);
  SpectralOperator op(grid);
  Field out(grid.n_cells, u.t);
  op.antiderivative(u.values, out.values);
  return out;
}

Field antiderivative_trapezoid(const Field& u, const Grid1D& grid) {
  const std::size_t n = grid.n_cells;
  if (u.size() != n) throw std::invalid_argument("field length does not match grid");
  Field out(n, u.t);
  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    acc += 0.5 * (u[i - 1] + u[i]) * grid.dx;
    out[i] = acc;
  }
  double mean = 0.0;
  for (double v : out.values) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : out.values) v -= mean;
  return out;
}

Field relax_rhs(const Field& u, const Field& P, double delta, const Grid1D& grid) {
  if (!(delta > 0.0)) {
    throw DivisionGuard("relaxation needs delta > 0; use the static antiderivative for delta = 0");
  }
  if (u.size() != grid.n_cells || P.size() != grid.n_cells) {
    throw std::invalid_argument("field length does not match grid");
  }
  SpectralOperator op(grid);
  Field dP(grid.n_cells, P.t);
  std::vector<double> resolved(grid.n_cells);
  op.derivative(P.values, dP.values);
  op.drop_nyquist(u.values, resolved);
  const double inv = 1.0 / delta;
  for (std::size_t i = 0; i < grid.n_cells; ++i) dP[i] = (dP[i] - resolved[i]) * inv;
  return dP;
}

}  // namespace vvlab
