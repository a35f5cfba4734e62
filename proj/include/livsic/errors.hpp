#ifndef LIVSIC_ERRORS_HPP
#define LIVSIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace livsic {

// Element has no usable inverse (zero pivot or failed residual check).
struct SingularError : std::runtime_error {
    explicit SingularError(const std::string& what) : std::runtime_error(what) {}
};

// Operands live in different ring instances.
struct DimensionError : std::logic_error {
    explicit DimensionError(const std::string& what) : std::logic_error(what) {}
};

// close_orbit precondition violated: dist(x, sigma^n x) > delta0.
struct TooFarError : std::runtime_error {
    explicit TooFarError(const std::string& what) : std::runtime_error(what) {}
};

// A shadowing certificate failed recomputation against the configured constants.
struct CertificateError : std::runtime_error {
    explicit CertificateError(const std::string& what) : std::runtime_error(what) {}
};

// Query point is farther from the sampled orbit than the table can certify.
struct CoverageError : std::runtime_error {
    explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration or exact-arithmetic budget exceeded.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration file or CLI usage.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Sample set unusable for a fit (e.g. all pair distances equal).
struct DegenerateSampleError : std::runtime_error {
    explicit DegenerateSampleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace livsic

#endif
