#pragma once

#include <stdexcept>
#include <string>

namespace cdlab {

// Coarse failure classes, used by the CLI to pick exit codes.
enum class ErrorKind {
  invalid_input,   // bad arguments, mismatched lattices, violated preconditions
  resource,        // dimension caps and the like
  config,          // config parsing / validation
  io,              // filesystem
  numerical,       // construction or integration failed at the requested tolerance
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidInputError : Error {
  explicit InvalidInputError(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};

struct ResourceError : Error {
  explicit ResourceError(const std::string& w) : Error(ErrorKind::resource, w) {}
};

// A family stopped being usable because the spectral gap closed (or the ground
// level is numerically degenerate). Carries the offending gap.
struct GaplessModelError : Error {
  GaplessModelError(const std::string& w, double gap_value)
      : Error(ErrorKind::numerical, w), gap(gap_value) {}
  double gap;
};

struct FilterConstructionError : Error {
  FilterConstructionError(const std::string& w, double worst_omega_value)
      : Error(ErrorKind::numerical, w), worst_omega(worst_omega_value) {}
  double worst_omega = 0.0;
};

struct TruncationError : Error {
  TruncationError(const std::string& w, double achieved_bound)
      : Error(ErrorKind::numerical, w), achieved(achieved_bound) {}
  double achieved;
};

struct RecursionError : Error {
  RecursionError(const std::string& w, double s_value, int order)
      : Error(ErrorKind::numerical, w), s(s_value), p(order) {}
  double s;
  int p;
};

struct ConstantsIntegrationError : Error {
  explicit ConstantsIntegrationError(const std::string& w) : Error(ErrorKind::numerical, w) {}
};

struct GeneratorConstructionError : Error {
  explicit GeneratorConstructionError(const std::string& w) : Error(ErrorKind::numerical, w) {}
};

struct IntegrationError : Error {
  IntegrationError(const std::string& w, double achieved_tol)
      : Error(ErrorKind::numerical, w), achieved(achieved_tol) {}
  double achieved;
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorKind::numerical, w) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::io, w) {}
};

}  // namespace cdlab
