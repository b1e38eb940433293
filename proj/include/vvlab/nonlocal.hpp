#pragma once

#include <complex>
#include <memory>
#include <span>

#include "vvlab/model.hpp"

namespace vvlab {

enum class Gauge { ZeroMean };

// Fourier-space derivative and antiderivative on a periodic grid.
//
// Both operators zero the mean mode and the Nyquist mode, so they are exact
// inverses of each other on the remaining (resolved) modes. Holds FFTW plans
// and scratch buffers: one instance per thread.
class SpectralOperator {
 public:
  explicit SpectralOperator(const Grid1D& grid);
  ~SpectralOperator();
  SpectralOperator(SpectralOperator&&) noexcept;
  SpectralOperator& operator=(SpectralOperator&&) noexcept;
  SpectralOperator(const SpectralOperator&) = delete;
  SpectralOperator& operator=(const SpectralOperator&) = delete;

  const Grid1D& grid() const;

  // out = D1 in.
  void derivative(std::span<const double> in, std::span<double> out);
  // out = D1^{-1} in with zero mean. Does not check the mean of `in`.
  void antiderivative(std::span<const double> in, std::span<double> out);
  // out = in with the Nyquist mode removed (mean kept).
  void drop_nyquist(std::span<const double> in, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Default tolerance on |sum u dx| for the antiderivative precondition.
double mean_tolerance(const Field& u, const Grid1D& grid);

// Spectral D1 of a field.
Field derivative(const Field& u, const Grid1D& grid);

// P with D1 P = u and zero mean. Throws MeanViolation unless
// |sum u dx| <= mean_tolerance(u, grid).
Field antiderivative(const Field& u, const Grid1D& grid, Gauge gauge = Gauge::ZeroMean);

// Cumulative trapezoid primitive followed by mean subtraction. Second-order
// accurate; kept as an independent cross-check of the spectral route.
Field antiderivative_trapezoid(const Field& u, const Grid1D& grid);

// dP/dt = (D1 P - u) / delta, with u restricted to the resolved modes so the
// equilibrium P = antiderivative(u) is exact. Throws DivisionGuard for delta <= 0.
Field relax_rhs(const Field& u, const Field& P, double delta, const Grid1D& grid);

}  // namespace vvlab
