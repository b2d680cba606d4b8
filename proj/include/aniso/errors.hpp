#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

/// Base class for all errors raised by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid exponent vector or ellipticity constant.
class profile_error : public error {
public:
    using error::error;
};

/// Malformed or inconsistent configuration (files, CLI arguments, grids).
class config_error : public error {
public:
    using error::error;
};

/// A documented precondition of an operation was violated by the caller.
class contract_error : public error {
public:
    using error::error;
};

/// Geometry request outside the computational box.
class geometry_error : public error {
public:
    using error::error;
};

/// Runtime numerical failure (instability, support reaching the boundary,
/// non-convergence). Carries the simulated time or iteration at which the
/// failure occurred when that is meaningful.
class numerical_error : public error {
public:
    explicit numerical_error(const std::string& what, double where = -1.0)
        : error(what), where_(where) {}

    /// Simulated time (or parameter value) attached to the failure; -1 when
    /// no location applies.
    double where() const { return where_; }

private:
    double where_;
};

} // namespace aniso
