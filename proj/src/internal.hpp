/**
 * @file internal.hpp
 * @brief Shared dense-solve helpers: residual-checked inverses and linear
 *        solves, and the contraction gate for the effort game. Library
 *        internal; not installed.
 */
#pragma once

#include <algorithm>
#include <string>

#include "netcontract/errors.hpp"
#include "netcontract/model.hpp"
#include "netcontract/tolerances.hpp"

namespace netcontract::internal {

/// Refuses instances whose effort game has no guaranteed unique interior
/// equilibrium: spectral radius of beta * C^-1 * G must be below one.
inline void gate_a1(const ModelInstance& inst) {
    Matrix cinv_g = inst.params.cost.cwiseInverse().asDiagonal() * inst.network.g;
    double rho = spectral_radius(inst.params.beta * cinv_g);
    if (rho >= 1.0)
        throw AssumptionError("A1 violated, rho=" + std::to_string(rho), rho);
}

/// Dense inverse via partial-pivot LU with an explicit residual gate.
inline Matrix inverse_with_residual(const Matrix& lhs, const char* what) {
    const auto n = lhs.rows();
    Eigen::PartialPivLU<Matrix> lu(lhs);
    Matrix inv = lu.solve(Matrix::Identity(n, n));
    if (!inv.allFinite()) throw NumericError(std::string(what) + ": singular system");
    double residual = (lhs * inv - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (residual > tol::kSolveResidual)
        throw NumericError(std::string(what) + ": solve residual " + std::to_string(residual));
    return inv;
}

/// Linear solve with a residual gate scaled by the right-hand side.
inline Vector solve_with_residual(const Matrix& lhs, const Vector& rhs, const char* what) {
    Eigen::PartialPivLU<Matrix> lu(lhs);
    Vector x = lu.solve(rhs);
    if (!x.allFinite()) throw NumericError(std::string(what) + ": singular system");
    double residual = (lhs * x - rhs).cwiseAbs().maxCoeff();
    if (residual > tol::kSolveResidual * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
        throw NumericError(std::string(what) + ": solve residual " + std::to_string(residual));
    return x;
}

}  // namespace netcontract::internal
