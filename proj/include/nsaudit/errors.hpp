#pragma once

#include <stdexcept>
#include <string>

namespace nsaudit {

/// Malformed or ill-conditioned field data (non-finite values, shape
/// mismatches). The message carries the offending node location.
class FieldError : public std::runtime_error {
  public:
    explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad geometry in tube/decomposition handling (degenerate tangents,
/// empty decompositions).
class GeometryError : public std::runtime_error {
  public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration file problems: syntax, missing keys, unknown keys.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Time step rejected by the stability check. Carries the largest dt
/// that would have been accepted.
class StabilityError : public std::runtime_error {
  public:
    StabilityError(const std::string& what, double required_dt_)
        : std::runtime_error(what), required_dt(required_dt_) {}
    double required_dt;
};

/// Pressure solve failed to reach tolerance. Carries the final relative
/// residual.
class PoissonError : public std::runtime_error {
  public:
    PoissonError(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

} // namespace nsaudit
