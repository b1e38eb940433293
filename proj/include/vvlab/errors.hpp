#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vvlab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class InvalidEntropy : public Error {
 public:
  using Error::Error;
};

// Raised when the nonlocal primitive is requested for a field whose integral
// does not vanish; the periodic antiderivative does not exist in that case.
class MeanViolation : public Error {
 public:
  MeanViolation(double mean, double tolerance)
      : Error("field has nonzero mean " + std::to_string(mean) +
              " (tolerance " + std::to_string(tolerance) + ")"),
        mean_(mean),
        tolerance_(tolerance) {}
  double mean() const { return mean_; }
  double tolerance() const { return tolerance_; }

 private:
  double mean_;
  double tolerance_;
};

class DivisionGuard : public Error {
 public:
  using Error::Error;
};

class BlowUp : public Error {
 public:
  BlowUp(std::size_t step, const std::string& what)
      : Error("blow-up at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class PreShockViolation : public Error {
 public:
  PreShockViolation(double t, double t_star)
      : Error("time " + std::to_string(t) + " is past the gradient blow-up time " +
              std::to_string(t_star)),
        t_star_(t_star) {}
  double t_star() const { return t_star_; }

 private:
  double t_star_;
};

class RootFindError : public Error {
 public:
  using Error::Error;
};

class InapplicableIdentity : public Error {
 public:
  using Error::Error;
};

class InvalidTestFunction : public Error {
 public:
  using Error::Error;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class RegimeOverflow : public Error {
 public:
  RegimeOverflow(int k, const std::string& what)
      : Error("regime parameter out of (0,1) at k=" + std::to_string(k) + ": " + what), k_(k) {}
  int k() const { return k_; }

 private:
  int k_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class SweepFailure : public Error {
 public:
  using Error::Error;
};

// Configuration problems; `field()` names the offending JSON path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace vvlab
