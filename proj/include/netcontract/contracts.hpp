/**
 * @file contracts.hpp
 * @brief Optimal linear contracts: the common-influence matrix, closed-form
 *        optimal performance pay, fixed pay from the binding participation
 *        constraint, profit evaluation, and the full solve pipeline.
 */
#pragma once

#include "netcontract/equilibrium.hpp"
#include "netcontract/model.hpp"

namespace netcontract {

/// Per-agent optimum when the agent faces no peers (isolated, or beta = 0).
struct BaselinePoint {
    double z;
    double v;
    double a;
};

/// W = [I - delta*(MG)^T(MG)]^-1 together with the pieces it is built from.
/// Entry (i,j) aggregates the discounted weight of the agents that i and j
/// influence in common, iterated through chains of common influence.
struct CommonInfluence {
    Matrix w;
    double delta;  ///< lambda^2 / (1 + c*eta*sigma2)
    Matrix mg;     ///< M*G: walk-weighted adjacency
};

/// Optimal contract with its induced equilibrium and diagnostics.
struct ContractSolution {
    Contract contract;
    EffortProfile efforts;
    double profit;
    Vector ce;  ///< certainty equivalents; equal the reservations at an optimum
    AssumptionReport diagnostics;
};

/// No-network optimum for agent i: v = 1/(1+c_i*eta*sigma2), a = v/c_i,
/// z = reservation_i + (eta*sigma2/2)v^2 - (c_i/2)a^2.
BaselinePoint empty_baseline(const ModelInstance& inst, int i);

/// Common-influence matrix; requires homogeneous costs and both spectral
/// conditions. Symmetrized by averaging after a 1e-9 asymmetry assertion.
CommonInfluence w_matrix(const ModelInstance& inst);

/// Closed-form optimal performance pay v* = W*alpha / (1+c*eta*sigma2) for
/// homogeneous costs. Verifies the raw first-order system to 1e-9 and the
/// positivity of every entry before returning.
Vector optimal_v(const ModelInstance& inst);

/// Optimal performance pay for per-agent costs, from the principal's
/// first-order system [B + B^T - B^T C B + eta*sigma2*I] v = B^T 1 with
/// B = (C - beta*G)^-1. Asserts the system matrix is positive definite
/// (concavity of the reduced objective); coincides with optimal_v whenever
/// the costs are equal.
Vector optimal_v_het(const ModelInstance& inst);

/// Fixed pay that makes the participation constraint bind:
/// z_i = reservation_i + (eta*sigma2/2)v_i^2 - (c_i/2)a_i^2. Verified by
/// recomputing every certainty equivalent; requires a to be the equilibrium
/// induced by v.
Vector optimal_z(const ModelInstance& inst, const Vector& v, const EffortProfile& a);

/// Reduced-objective profit at an explicit (v, a) pair:
///   sum_i a_i(1-v_i) - sum_i reservation_i + (1/2) sum_i c_i a_i^2
///   - (eta*sigma2/2) sum_i v_i^2,
/// cross-checked against the wage-bill form sum_i (a_i - z_i - v_i a_i)
/// to 1e-9.
double profit_at(const ModelInstance& inst, const Vector& v, const Vector& a);

/// Profit at the equilibrium efforts induced by v. With require_interior the
/// effort solve rejects negative entries; disabling it evaluates the same
/// quadratic on its smooth extension (what the numeric maximizer's probe
/// points need).
double principal_profit(const ModelInstance& inst, const Vector& v, bool require_interior = true);

/// Full pipeline: assumption check, optimal pay (closed form or per-agent
/// cost system), equilibrium efforts, fixed pay, certainty equivalents,
/// profit. With unsafe=true the spectral gates do not refuse: the
/// first-order stationary point is evaluated as-is and the diagnostics
/// record which conditions fail.
ContractSolution solve(const ModelInstance& inst, bool unsafe = false);

}  // namespace netcontract
