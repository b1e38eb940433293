#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vvlab {

// Uniform periodic mesh on [-L, L). Node i sits at -L + i*dx and is the
// center of the i-th finite-volume cell.
struct Grid1D {
  double half_width = 1.0;
  std::size_t n_cells = 8;
  double dx = 0.25;

  double x(std::size_t i) const { return -half_width + static_cast<double>(i) * dx; }
  double length() const { return 2.0 * half_width; }
  std::vector<double> nodes() const;
};

// Throws InvalidGrid unless L > 0, N >= 8 and N is even.
Grid1D make_grid(double half_width, std::size_t n_cells);

// Grid samples of u or P at one time instant.
struct Field {
  std::vector<double> values;
  double t = 0.0;

  Field() = default;
  explicit Field(std::size_t n, double time = 0.0) : values(n, 0.0), t(time) {}
  Field(std::vector<double> v, double time) : values(std::move(v)), t(time) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> view() const { return values; }
  bool all_finite() const;
  double max_abs() const;
};

// Samples `profile` at the grid nodes.
Field sample(const Grid1D& grid, const std::function<double(double)>& profile, double t = 0.0);

enum class FluxKind { Quadratic, Cubic, Custom };

// Scalar flux f with its derivatives. Quadratic is u^2/2 (Burgers and the
// Ostrovsky-Hunter family), Cubic is -u^3/6 (short-pulse family).
class FluxModel {
 public:
  static FluxModel quadratic();
  static FluxModel cubic();
  // `d2f` may be empty, in which case it is approximated by differencing `df`.
  static FluxModel custom(std::function<double(double)> f, std::function<double(double)> df,
                          std::string description,
                          std::function<double(double)> d2f = {});

  FluxKind kind() const { return kind_; }
  const std::string& description() const { return description_; }

  double f(double u) const {
    switch (kind_) {
      case FluxKind::Quadratic: return 0.5 * u * u;
      case FluxKind::Cubic: return -u * u * u / 6.0;
      case FluxKind::Custom: break;
    }
    return f_(u);
  }
  double df(double u) const {
    switch (kind_) {
      case FluxKind::Quadratic: return u;
      case FluxKind::Cubic: return -0.5 * u * u;
      case FluxKind::Custom: break;
    }
    return df_(u);
  }
  double d2f(double u) const;

  // max |f'| over [min(a,b), max(a,b)]. Exact for the built-in fluxes, whose
  // |f'| is convex; endpoint maximum for custom fluxes.
  double max_speed(double a, double b) const;

 private:
  FluxKind kind_ = FluxKind::Quadratic;
  std::function<double(double)> f_;
  std::function<double(double)> df_;
  std::function<double(double)> d2f_;
  std::string description_;
};

double eval_flux(const FluxModel& model, double u);

// The four regularization parameters of one run.
struct ParamSet {
  double eps = 0.0;    // viscosity
  double beta = 0.0;   // dispersion
  double delta = 0.0;  // relaxation of P
  double gamma = 0.0;  // rotation

  // delta > 0 selects the relaxed-P formulation; delta == 0 the static one.
  bool relaxed() const { return delta > 0.0; }
  // Throws InvalidParams unless every entry lies in [0, 1).
  void validate() const;
};

bool operator==(const ParamSet& a, const ParamSet& b);

enum class EntropyFamily { Square, SmoothedKruzkov };

// Convex entropy eta with entropy flux q' = f' eta', normalized by q(0) = 0.
//
// The smoothed Kruzkov family eta(u) = sqrt((u-k)^2 + kappa^2) - kappa is a
// C^2 stand-in for |u - k|.
class EntropyPair {
 public:
  EntropyPair(FluxModel model, EntropyFamily family, double k, double kappa);

  double eta(double u) const;
  double deta(double u) const;
  double d2eta(double u) const;
  // Adaptive Gauss-Kronrod quadrature of f'(s) eta'(s) over [0, u].
  double q(double u) const;

  EntropyFamily family() const { return family_; }
  double k() const { return k_; }
  double kappa() const { return kappa_; }
  std::string tag() const;

 private:
  FluxModel model_;
  EntropyFamily family_;
  double k_;
  double kappa_;
};

// Throws InvalidEntropy when kappa <= 0 for the smoothed Kruzkov family.
EntropyPair make_entropy_pair(const FluxModel& model, EntropyFamily family, double k = 0.0,
                              double kappa = 0.0);

}  // namespace vvlab
