#include "vvlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vvlab/errors.hpp"

namespace vvlab {

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) xs[i] = x(i);
  return xs;
}

Grid1D make_grid(double half_width, std::size_t n_cells) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidGrid("half width must be positive and finite");
  }
  if (n_cells < 8 || n_cells % 2 != 0) {
    throw InvalidGrid("cell count must be even and at least 8, got " + std::to_string(n_cells));
  }
  return Grid1D{half_width, n_cells, 2.0 * half_width / static_cast<double>(n_cells)};
}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

Field sample(const Grid1D& grid, const std::function<double(double)>& profile, double t) {
  Field out(grid.n_cells, t);
  for (std::size_t i = 0; i < grid.n_cells; ++i) out[i] = profile(grid.x(i));
  return out;
}

FluxModel FluxModel::quadratic() {
  FluxModel m;
  m.kind_ = FluxKind::Quadratic;
  m.description_ = "quadratic f(u) = u^2/2";
  return m;
}

FluxModel FluxModel::cubic() {
  FluxModel m;
  m.kind_ = FluxKind::Cubic;
  m.description_ = "cubic f(u) = -u^3/6";
  return m;
}

FluxModel FluxModel::custom(std::function<double(double)> f, std::function<double(double)> df,
                            std::string description, std::function<double(double)> d2f) {
  FluxModel m;
  m.kind_ = FluxKind::Custom;
  m.f_ = std::move(f);
  m.df_ = std::move(df);
  m.d2f_ = std::move(d2f);
  m.description_ = std::move(description);
  return m;
}

double FluxModel::d2f(double u) const {
  switch (kind_) {
    case FluxKind::Quadratic: return 1.0;
    case FluxKind::Cubic: return -u;
    case FluxKind::Custom: break;
  }
  if (d2f_) return d2f_(u);
  const double h = 1e-5 * std::max(1.0, std::abs(u));
  return (df_(u + h) - df_(u - h)) / (2.0 * h);
}

double FluxModel::max_speed(double a, double b) const {
  switch (kind_) {
    case FluxKind::Quadratic: return std::max(std::abs(a), std::abs(b));
    case FluxKind::Cubic: return 0.5 * std::max(a * a, b * b);
    case FluxKind::Custom: break;
  }
  return std::max(std::abs(df_(a)), std::abs(df_(b)));
}

double eval_flux(const FluxModel& model, double u) { return model.f(u); }

void ParamSet::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0 && v < 1.0)) {
      std::ostringstream os;
      os << name << " must lie in [0, 1), got " << v;
      throw InvalidParams(os.str());
    }
  };
  check(eps, "eps");
  check(beta, "beta");
  check(delta, "delta");
  check(gamma, "gamma");
}

bool operator==(const ParamSet& a, const ParamSet& b) {
  return a.eps == b.eps && a.beta == b.beta && a.delta == b.delta && a.gamma == b.gamma;
}

EntropyPair::EntropyPair(FluxModel model, EntropyFamily family, double k, double kappa)
    : model_(std::move(model)), family_(family), k_(k), kappa_(kappa) {}

double EntropyPair::eta(double u) const {
  if (family_ == EntropyFamily::Square) return 0.5 * u * u;
  const double d = u - k_;
  return std::sqrt(d * d + kappa_ * kappa_) - kappa_;
}

double EntropyPair::deta(double u) const {
  if (family_ == EntropyFamily::Square) return u;
  const double d = u - k_;
  return d / std::sqrt(d * d + kappa_ * kappa_);
}

double EntropyPair::d2eta(double u) const {
  if (family_ == EntropyFamily::Square) return 1.0;
  const double d = u - k_;
  const double r = std::sqrt(d * d + kappa_ * kappa_);
  return kappa_ * kappa_ / (r * r * r);
}

double EntropyPair::q(double u) const {
  if (u == 0.0) return 0.0;
  auto integrand = [this](double s) { return model_.df(s) * deta(s); };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr unsigned max_depth = 10;
  constexpr double tol = 1e-10;
  // The smoothed Kruzkov integrand turns sharply at k; integrate up to it
  // and from it separately so the quadrature sees smooth pieces.
  const double lo = std::min(0.0, u);
  const double hi = std::max(0.0, u);
  double value = 0.0;
  if (family_ == EntropyFamily::SmoothedKruzkov && k_ > lo && k_ < hi) {
    value = Quad::integrate(integrand, lo, k_, max_depth, tol) +
            Quad::integrate(integrand, k_, hi, max_depth, tol);
  } else {
    value = Quad::integrate(integrand, lo, hi, max_depth, tol);
  }
  return u > 0.0 ? value : -value;
}

std::string EntropyPair::tag() const {
  if (family_ == EntropyFamily::Square) return "square";
  std::ostringstream os;
  os << "kruzkov(k=" << k_ << ",kappa=" << kappa_ << ")";
  return os.str();
}

EntropyPair make_entropy_pair(const FluxModel& model, EntropyFamily family, double k,
                              double kappa) {
  if (family == EntropyFamily::SmoothedKruzkov && !(kappa > 0.0)) {
    throw InvalidEntropy("smoothed Kruzkov entropy needs a positive smoothing width");
  }
  return EntropyPair(model, family, k, kappa);
}

}  // namespace vvlab
