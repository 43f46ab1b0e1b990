#ifndef VERDET_ERRORS_HPP
#define VERDET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace verdet {

/// Bad input: rejected before any computation starts. CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during a computation (resonance, degeneracy,
/// pole proximity, non-convergence). CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace verdet

#endif
