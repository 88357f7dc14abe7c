/**
 * @file oracle.hpp
 * @brief Independent numeric cross-checks: derivative-free profit
 *        maximization, fixed-point iteration of the effort game, and Monte
 *        Carlo simulation of realized wages and utilities. Nothing here uses
 *        the closed-form contract solver, so agreement is evidence.
 */
#pragma once

#include <cstdint>

#include "netcontract/equilibrium.hpp"
#include "netcontract/model.hpp"

namespace netcontract {

struct OracleResult {
    Vector v_opt;
    double profit_opt = 0.0;
    int iterations = 0;     ///< accepted ascent steps plus polish steps
    double convergence = 0.0;  ///< sup-norm of the numeric gradient at v_opt, scaled by max(1, |profit|)
};

/// Fixed-point iteration record with a measured contraction rate.
struct FixedPointTrace {
    EffortProfile efforts;
    int iterations = 0;
    /// Measured asymptotic per-step sup-norm decay of the best-response map
    /// around the converged profile: a renormalized perturbation is pushed
    /// through the map and the late-window geometric mean of its step-size
    /// ratios is reported. Exactly 0 when the interaction is walk-limited
    /// (acyclic), which annihilates the perturbation in finitely many steps.
    double contraction_ratio = 0.0;
};

struct SimulationSummary {
    long long draws = 0;
    std::uint64_t seed = 0;
    Vector mean_utility;      ///< per-agent sample mean of realized CARA utility
    Vector std_err;           ///< per-agent sample standard deviation / sqrt(draws)
    double mean_profit = 0.0;  ///< sample mean of realized output minus wages
    double profit_std_err = 0.0;
};

/// Maximizes expected principal profit over the pay slope by numeric gradient
/// ascent with backtracking line search, finished by one Newton polish whose
/// Hessian comes from gradient differences. All derivatives are wide central
/// differences, which are exact here because the objective is quadratic in v.
/// Detected non-concavity or an unbounded ascent raises NumericError; the
/// iteration cap is 10^5.
OracleResult maximize_profit_numeric(const ModelInstance& inst, const Vector& v0);

/// Synchronous best-response iteration from zero effort until the sup-norm
/// step falls below tol (cap 10^5, NumericError past it).
EffortProfile iterate_best_response(const ModelInstance& inst, const Vector& v, double tol);

/// Same iteration, additionally reporting the measured contraction ratio.
FixedPointTrace iterate_best_response_trace(const ModelInstance& inst, const Vector& v,
                                            double tol);

/// Simulates `draws` realizations of outputs q_i = a_i + eps_i with
/// eps ~ N(0, sigma2) iid, paying w_i = z_i + v_i q_i, and summarizes realized
/// utilities and profit. Deterministic for a given seed regardless of thread
/// count: draws are split into fixed blocks with per-block derived seeds and
/// combined by pairwise summation in block order.
SimulationSummary simulate_outputs(const ModelInstance& inst, const Contract& contract,
                                   const EffortProfile& efforts, long long draws,
                                   std::uint64_t seed);
SimulationSummary simulate_outputs_serial(const ModelInstance& inst, const Contract& contract,
                                          const EffortProfile& efforts, long long draws,
                                          std::uint64_t seed);

}  // namespace netcontract
