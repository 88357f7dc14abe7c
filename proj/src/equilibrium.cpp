/**
 * @file equilibrium.cpp
 * @brief Equilibrium computation by dense linear solve.
 */
#include "netcontract/equilibrium.hpp"

#include <cmath>
#include <limits>

#include "netcontract/errors.hpp"
#include "netcontract/tolerances.hpp"
#include "internal.hpp"

namespace netcontract {

Matrix m_matrix(const ModelInstance& inst) {
    internal::gate_a1(inst);
    const double lam = inst.lambda();
    const auto n = inst.size();
    return internal::inverse_with_residual(Matrix::Identity(n, n) - lam * inst.network.g,
                                           "influence matrix");
}

Matrix br_inverse(const ModelInstance& inst) {
    internal::gate_a1(inst);
    Matrix lhs = Matrix(inst.params.cost.asDiagonal()) - inst.params.beta * inst.network.g;
    return internal::inverse_with_residual(lhs, "best-response inverse");
}

InfluenceSummary influence_matrix(const ModelInstance& inst) {
    InfluenceSummary s;
    s.homogeneous = inst.params.homogeneous_cost();
    if (s.homogeneous) {
        s.m = m_matrix(inst);
        s.lambda = inst.lambda();
    } else {
        s.m = br_inverse(inst);
        s.lambda = std::numeric_limits<double>::quiet_NaN();
    }
    s.bonacich = s.m.rowwise().sum();
    s.alpha = s.m.colwise().sum().transpose();
    return s;
}

EffortProfile nash_efforts(const ModelInstance& inst, const Vector& v) {
    const int n = inst.size();
    if (v.size() != n) throw ValidationError("effort solve: v has wrong dimension");
    Vector a = br_inverse(inst) * v;

    if ((a.array() < -tol::kZero).any())
        throw NumericError("equilibrium effort negative; contract leaves the interior regime");

    // Each entry must satisfy its own best-response equation.
    Vector rhs = (v + inst.params.beta * (inst.network.g * a)).cwiseQuotient(inst.params.cost);
    double residual = (a - rhs).cwiseAbs().maxCoeff();
    if (residual > tol::kSolveResidual * std::max(1.0, a.cwiseAbs().maxCoeff()))
        throw NumericError("equilibrium residual " + std::to_string(residual));
    return EffortProfile{std::move(a)};
}

double best_response(const ModelInstance& inst, int i, double v_i, const EffortProfile& others) {
    double spill = inst.network.g.row(i).dot(others.a);
    double raw = (v_i + inst.params.beta * spill) / inst.params.cost[i];
    return raw > 0.0 ? raw : 0.0;
}

double certainty_equivalent(const ModelInstance& inst, int i, const Contract& contract,
                            const EffortProfile& a) {
    const auto& p = inst.params;
    double spill = inst.network.g.row(i).dot(a.a);
    return contract.z[i] + a.a[i] * (contract.v[i] + p.beta * spill) -
           0.5 * p.cost[i] * a.a[i] * a.a[i] - 0.5 * p.eta * p.sigma2 * contract.v[i] * contract.v[i];
}

double cara_utility(const ModelInstance& inst, int i, double realized_wage,
                    const EffortProfile& a) {
    const auto& p = inst.params;
    double spill = inst.network.g.row(i).dot(a.a);
    double inner = realized_wage - 0.5 * p.cost[i] * a.a[i] * a.a[i] + p.beta * a.a[i] * spill;
    double expo = -p.eta * inner;
    if (expo > 700.0) return -std::numeric_limits<double>::infinity();
    return -std::exp(expo);
}

}  // namespace netcontract
