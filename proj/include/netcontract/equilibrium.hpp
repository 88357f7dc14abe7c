/**
 * @file equilibrium.hpp
 * @brief Influence matrix, Bonacich/influence centralities, Nash equilibrium
 *        efforts for a given contract, best responses, and CARA utilities.
 */
#pragma once

#include "netcontract/model.hpp"

namespace netcontract {

/// Walk-counting inverse and the two centrality vectors derived from it.
/// Homogeneous costs store M = (I - lambda*G)^-1; heterogeneous costs store
/// the best-response inverse (C - beta*G)^-1 and leave lambda NaN.
struct InfluenceSummary {
    Matrix m;
    Vector bonacich;  ///< row sums: weight of walks starting at i
    Vector alpha;     ///< column sums: weight of walks ending at i
    double lambda;    ///< beta / c (homogeneous costs only, else NaN)
    bool homogeneous;
};

/// Linear contract: wage_i = z_i + v_i * q_i.
struct Contract {
    Vector z;
    Vector v;
};

struct EffortProfile {
    Vector a;
};

/// M = (I - lambda*G)^-1 for homogeneous costs; throws AssumptionError when
/// the generalized contraction condition fails, NumericError on a singular or
/// high-residual solve.
Matrix m_matrix(const ModelInstance& inst);

/// Best-response inverse (C - beta*G)^-1 valid for any cost profile.
/// Same error contract as m_matrix.
Matrix br_inverse(const ModelInstance& inst);

InfluenceSummary influence_matrix(const ModelInstance& inst);

/// Unique Nash equilibrium a = (C - beta*G)^-1 v under generalized A1.
/// Entries below -1e-12 (possible only for partially negative v) raise
/// NumericError; the clamped best_response map exists for oracle use.
EffortProfile nash_efforts(const ModelInstance& inst, const Vector& v);

/// One-agent best response max(0, (v_i + beta * sum_j g_ij a_j) / c_i).
double best_response(const ModelInstance& inst, int i, double v_i, const EffortProfile& others);

/// z_i + a_i (v_i + beta * sum_j g_ij a_j) - c_i a_i^2 / 2 - eta sigma2 v_i^2 / 2.
double certainty_equivalent(const ModelInstance& inst, int i, const Contract& contract,
                            const EffortProfile& a);

/// -exp(-eta * [w - c_i a_i^2 / 2 + beta a_i sum_j g_ij a_j]); saturates to
/// -infinity instead of overflowing.
double cara_utility(const ModelInstance& inst, int i, double realized_wage,
                    const EffortProfile& a);

}  // namespace netcontract
