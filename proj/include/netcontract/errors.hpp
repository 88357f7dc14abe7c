/**
 * @file errors.hpp
 * @brief Error hierarchy shared by all modules; codes map 1:1 to CLI exit codes.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace netcontract {

/// Failure class, doubling as the process exit code of the CLI.
enum class ErrorCode : int {
    Validation = 2,       ///< malformed input (schema, dimensions, sign constraints)
    Assumption = 3,       ///< spectral-radius / concavity gate failed
    Numeric = 4,          ///< linear algebra or iteration failure
    Inconsistency = 5,    ///< analytic result contradicts an independent cross-check
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorCode::Validation, what) {}
};

/// Carries the offending spectral radius (or smallest eigenvalue for the
/// concavity form) so callers can report margins.
class AssumptionError : public Error {
public:
    AssumptionError(const std::string& what, double rho) : Error(ErrorCode::Assumption, what), rho_(rho) {}
    double rho() const noexcept { return rho_; }

private:
    double rho_;
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorCode::Numeric, what) {}
};

class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& what) : Error(ErrorCode::Inconsistency, what) {}
};

}  // namespace netcontract
