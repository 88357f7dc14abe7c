/**
 * @file contracts.cpp
 * @brief Optimal-contract computation with internal cross-checks.
 */
#include "netcontract/contracts.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "netcontract/errors.hpp"
#include "netcontract/tolerances.hpp"
#include "internal.hpp"

namespace netcontract {

namespace {

/// Re-throws a stage's failure with the stage name prefixed, preserving the
/// error class so exit codes and carried diagnostics survive.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const AssumptionError& e) {
        throw AssumptionError(std::string(name) + ": " + e.what(), e.rho());
    } catch (const Error& e) {
        throw Error(e.code(), std::string(name) + ": " + e.what());
    }
}

/// Principal's first-order system matrix for per-agent costs,
/// B + B^T - B^T C B + eta*sigma2*I, scrubbed to exact symmetry.
Matrix het_foc_matrix(const ModelInstance& inst, const Matrix& b) {
    const auto& p = inst.params;
    const auto n = inst.size();
    Matrix k = b + b.transpose() - b.transpose() * Matrix(p.cost.asDiagonal()) * b +
               p.eta * p.sigma2 * Matrix::Identity(n, n);
    return 0.5 * (k + k.transpose());
}

/// Stationary point of the reduced objective without any spectral or
/// concavity gate; the matrix C - beta*G merely has to be invertible.
Vector stationary_v(const ModelInstance& inst) {
    Matrix lhs = Matrix(inst.params.cost.asDiagonal()) - inst.params.beta * inst.network.g;
    Matrix b = internal::inverse_with_residual(lhs, "best-response inverse");
    Matrix k = het_foc_matrix(inst, b);
    Vector rhs = b.transpose() * Vector::Ones(inst.size());
    return internal::solve_with_residual(k, rhs, "first-order system");
}

Vector efforts_unchecked(const ModelInstance& inst, const Vector& v) {
    Matrix lhs = Matrix(inst.params.cost.asDiagonal()) - inst.params.beta * inst.network.g;
    return internal::inverse_with_residual(lhs, "best-response inverse") * v;
}

}  // namespace

BaselinePoint empty_baseline(const ModelInstance& inst, int i) {
    if (i < 0 || i >= inst.size()) throw ValidationError("baseline: agent index out of range");
    const auto& p = inst.params;
    double v = 1.0 / (1.0 + p.cost[i] * p.eta * p.sigma2);
    double a = v / p.cost[i];
    double z = p.reservation[i] + 0.5 * p.eta * p.sigma2 * v * v - 0.5 * p.cost[i] * a * a;
    return BaselinePoint{z, v, a};
}

CommonInfluence w_matrix(const ModelInstance& inst) {
    if (!inst.params.homogeneous_cost())
        throw ValidationError("common-influence matrix requires homogeneous costs");
    AssumptionReport rep = check_assumptions(inst);
    if (!rep.a1_holds)
        throw AssumptionError("A1 violated, rho=" + std::to_string(rep.rho1), rep.rho1);
    if (!rep.a2_holds)
        throw AssumptionError("A2 violated, rho2=" + std::to_string(rep.rho2), rep.rho2);

    const auto& p = inst.params;
    const auto n = inst.size();
    const double c = p.cost[0];
    const double lam = inst.lambda();

    CommonInfluence out;
    out.delta = lam * lam / (1.0 + c * p.eta * p.sigma2);
    out.mg = m_matrix(inst) * inst.network.g;
    Matrix lhs = Matrix::Identity(n, n) - out.delta * out.mg.transpose() * out.mg;
    Matrix w = internal::inverse_with_residual(lhs, "common-influence matrix");

    double asymmetry = (w - w.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > tol::kSymmetryAssert)
        throw NumericError("common-influence matrix asymmetry " + std::to_string(asymmetry));
    out.w = 0.5 * (w + w.transpose());
    return out;
}

Vector optimal_v(const ModelInstance& inst) {
    CommonInfluence ci = w_matrix(inst);  // homogeneity and both spectral gates
    InfluenceSummary inf = influence_matrix(inst);
    const auto& p = inst.params;
    const auto n = inst.size();
    const double c = p.cost[0];
    Vector v = (ci.w * inf.alpha) / (1.0 + c * p.eta * p.sigma2);

    // The untransformed first-order system [c*eta*sigma2*I + M + M^T - M^T M]
    // must map the closed form back onto the influence vector.
    Matrix k = c * p.eta * p.sigma2 * Matrix::Identity(n, n) + inf.m + inf.m.transpose() -
               inf.m.transpose() * inf.m;
    double residual = (k * v - inf.alpha).cwiseAbs().maxCoeff();
    if (residual > tol::kStrict)
        throw ConsistencyError("optimal pay: first-order residual " + std::to_string(residual));
    if ((v.array() <= 0.0).any())
        throw ConsistencyError("optimal pay: non-positive entry under satisfied assumptions");
    return v;
}

Vector optimal_v_het(const ModelInstance& inst) {
    Matrix b = br_inverse(inst);  // gates the effort-game contraction condition
    Matrix k = het_foc_matrix(inst, b);

    Eigen::SelfAdjointEigenSolver<Matrix> es(k);
    if (es.info() != Eigen::Success)
        throw NumericError("first-order system: eigenvalue computation failed");
    double smallest = es.eigenvalues().minCoeff();
    if (smallest <= 0.0)
        throw AssumptionError(
            "objective not concave; smallest eigenvalue of the first-order system is " +
                std::to_string(smallest),
            smallest);

    Vector rhs = b.transpose() * Vector::Ones(inst.size());
    return internal::solve_with_residual(k, rhs, "first-order system");
}

Vector optimal_z(const ModelInstance& inst, const Vector& v, const EffortProfile& a) {
    const auto& p = inst.params;
    const int n = inst.size();
    if (v.size() != n || a.a.size() != n) throw ValidationError("fixed pay: dimension mismatch");
    Vector z = (p.reservation.array() + 0.5 * p.eta * p.sigma2 * v.array().square() -
                0.5 * p.cost.array() * a.a.array().square())
                   .matrix();

    Contract contract{z, v};
    for (int i = 0; i < n; ++i) {
        double ce = certainty_equivalent(inst, i, contract, a);
        if (std::abs(ce - p.reservation[i]) > tol::kStrict)
            throw ConsistencyError("fixed pay: participation constraint not binding for agent " +
                                   inst.labels[static_cast<size_t>(i)]);
    }
    return z;
}

double profit_at(const ModelInstance& inst, const Vector& v, const Vector& a) {
    const auto& p = inst.params;
    if (v.size() != inst.size() || a.size() != inst.size())
        throw ValidationError("profit: dimension mismatch");
    double reduced = (a.array() * (1.0 - v.array())).sum() - p.reservation.sum() +
                     0.5 * (p.cost.array() * a.array().square()).sum() -
                     0.5 * p.eta * p.sigma2 * v.array().square().sum();

    // Wage-bill form: output minus expected wages, with fixed pay set by the
    // binding participation constraint.
    Vector z = (p.reservation.array() + 0.5 * p.eta * p.sigma2 * v.array().square() -
                0.5 * p.cost.array() * a.array().square())
                   .matrix();
    double direct = (a.array() - z.array() - v.array() * a.array()).sum();
    if (std::abs(reduced - direct) > tol::kStrict * std::max(1.0, std::abs(reduced)))
        throw ConsistencyError("profit: reduced and wage-bill forms disagree by " +
                               std::to_string(std::abs(reduced - direct)));
    return reduced;
}

double principal_profit(const ModelInstance& inst, const Vector& v, bool require_interior) {
    Vector a = require_interior ? nash_efforts(inst, v).a : efforts_unchecked(inst, v);
    return profit_at(inst, v, a);
}

ContractSolution solve(const ModelInstance& inst, bool unsafe) {
    AssumptionReport diagnostics = check_assumptions(inst);
    if (!unsafe) {
        if (!diagnostics.a1_holds)
            throw AssumptionError("assumptions: A1 violated, rho=" + std::to_string(diagnostics.rho1),
                                  diagnostics.rho1);
        if (!diagnostics.a2_holds)
            throw AssumptionError(
                "assumptions: A2 violated, rho2=" + std::to_string(diagnostics.rho2),
                diagnostics.rho2);
    }

    Vector v = stage("optimal pay", [&] {
        if (unsafe) return stationary_v(inst);
        return inst.params.homogeneous_cost() ? optimal_v(inst) : optimal_v_het(inst);
    });
    Vector a = stage("efforts", [&] {
        return unsafe ? efforts_unchecked(inst, v) : nash_efforts(inst, v).a;
    });
    Vector z = stage("fixed pay", [&] { return optimal_z(inst, v, EffortProfile{a}); });

    ContractSolution out;
    out.contract = Contract{std::move(z), std::move(v)};
    out.efforts = EffortProfile{std::move(a)};
    out.ce = Vector(inst.size());
    for (int i = 0; i < inst.size(); ++i)
        out.ce[i] = certainty_equivalent(inst, i, out.contract, out.efforts);
    out.profit = stage("profit", [&] { return profit_at(inst, out.contract.v, out.efforts.a); });
    out.diagnostics = diagnostics;
    return out;
}

}  // namespace netcontract
