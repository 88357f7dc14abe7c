/**
 * @file tolerances.hpp
 * @brief Central numeric tolerance configuration used across the solver.
 */
#pragma once

namespace netcontract::tol {

inline constexpr double kSolveResidual = 1e-10;   ///< linear-solve residual gate (infinity norm)
inline constexpr double kIdentity = 1e-9;         ///< cross-form identity checks (profit, CE, FOC)
inline constexpr double kSymmetryAssert = 1e-9;   ///< max asymmetry tolerated before symmetrizing W
inline constexpr double kStrict = 1e-9;           ///< derivative counts as strictly positive above this
inline constexpr double kZero = 1e-12;            ///< derivative counts as exactly zero below this
inline constexpr double kFdFlag = 1e-4;           ///< analytic/fd relative disagreement that flags an error
inline constexpr double kSpectral = 1e-10;        ///< spectral-radius relative tolerance
inline constexpr double kFdStepFloor = 1e-8;      ///< smallest admissible finite-difference step
inline constexpr double kMarginalFd = 1e-6;       ///< slope-vs-fd agreement bound for the weak-link constant

}  // namespace netcontract::tol
