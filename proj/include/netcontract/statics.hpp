/**
 * @file statics.hpp
 * @brief Comparative statics: analytic derivatives of optimal pay, efforts,
 *        and profit in every model parameter, finite-difference cross-checks,
 *        the weak-link marginal value of peer effects, and the
 *        graph-theoretic sign classification of link perturbations.
 */
#pragma once

#include <functional>
#include <vector>

#include "netcontract/model.hpp"

namespace netcontract {

enum class Target { v, a, profit };
enum class Parameter { g, beta, cost, eta, sigma2 };

/// Sign of a per-agent derivative against the 1e-9 (strict) and 1e-12 (zero)
/// thresholds; weak_increase covers the dead band between them.
enum class SignClass { zero, weak_increase, strict_increase, strict_decrease };

/// One derivative of a per-agent vector (v* or a*) in one parameter,
/// carrying both the analytic form and its finite-difference cross-check.
struct DerivativeReport {
    Target target = Target::v;
    Parameter parameter = Parameter::beta;
    int i = -1;  ///< perturbed edge source when parameter == g
    int j = -1;  ///< perturbed edge destination when parameter == g
    Vector analytic;  ///< empty when fd_only
    Vector fd;
    double max_rel_err = 0.0;  ///< max over agents of |analytic-fd| / max(1,|fd|)
    std::vector<SignClass> sign_class;
    bool fd_only = false;  ///< per-agent-cost instances have no analytic form
};

/// Weak-link marginal value of peer effects: the slope of profit in beta at
/// beta = 0 equals a parameter-only constant times the total link weight.
struct MarginalEffect {
    double kappa = 0.0;           ///< statement-form constant
    double kappa_appendix = 0.0;  ///< closing-line arrangement, algebraically equal
    double total_weight = 0.0;    ///< sum of all link weights
    double analytic_slope = 0.0;  ///< kappa * total_weight
    double fd_slope = 0.0;        ///< central difference of profit in beta at 0
    bool fd_consistent = false;   ///< |analytic_slope - fd_slope| within 1e-6
};

/// Predicted (graph-theoretic) and measured (derivative-sign) classes for
/// one link perturbation; construction fails if any pair disagrees.
struct LinkEffectClasses {
    std::vector<SignClass> v_predicted;
    std::vector<SignClass> v_numeric;
    std::vector<SignClass> a_predicted;
    std::vector<SignClass> a_numeric;
};

SignClass classify_sign(double derivative);

/// Central difference (f(x0+h) - f(x0-h)) / (2h); h <= 0 selects the default
/// step 1e-5 * max(1, |x0|).
double fd_derivative(const std::function<double(double)>& f, double x0, double h = 0.0);
Vector fd_derivative_vec(const std::function<Vector(double)>& f, double x0, double h = 0.0);

/// d v*/d g_ij: analytic chain rule through the common-influence matrix and
/// the influence vector, cross-checked by central differences (mismatch
/// above 1e-4 relative raises a ConsistencyError). Per-agent-cost instances
/// fall back to fd_only.
DerivativeReport dv_dg(const ModelInstance& inst, int i, int j);

/// d a*/d g_ij via the product rule on a* = (1/c) M v*.
DerivativeReport da_dg(const ModelInstance& inst, int i, int j);

/// d v*/d beta and d a*/d beta at the instance's own beta.
DerivativeReport dv_dbeta(const ModelInstance& inst);
DerivativeReport da_dbeta(const ModelInstance& inst);

/// d v*/d p and d a*/d p for p in {cost, eta, sigma2}; cost means the shared
/// scalar cost level (homogeneous instances only for the analytic form).
DerivativeReport dv_dparam(const ModelInstance& inst, Parameter which);
DerivativeReport da_dparam(const ModelInstance& inst, Parameter which);

/// Slope of profit in beta at beta = 0: constant kappa times total link
/// weight. The two printed arrangements of kappa must agree to 1e-12
/// (ConsistencyError otherwise); disagreement with the fd slope beyond 1e-6
/// relative is recorded in fd_consistent, not raised.
MarginalEffect marginal_effect(const ModelInstance& inst);

/// Graph-theoretic prediction for a g_ij perturbation, checked against the
/// measured derivative signs: with the edge (i,j) forced present, effort
/// responds strictly for every agent weakly connected to j and is exactly
/// zero elsewhere; pay responds strictly for the connected agents that have
/// an in-link and is exactly zero for all others. Any disagreement raises a
/// ConsistencyError.
LinkEffectClasses classify_link_effect(const ModelInstance& inst, int i, int j);

}  // namespace netcontract
