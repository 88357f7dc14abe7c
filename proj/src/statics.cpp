/**
 * @file statics.cpp
 * @brief Analytic comparative statics with finite-difference verification.
 */
#include "netcontract/statics.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "netcontract/contracts.hpp"
#include "netcontract/equilibrium.hpp"
#include "netcontract/errors.hpp"
#include "netcontract/tolerances.hpp"

namespace netcontract {

namespace {

double default_step(double x0) { return 1e-5 * std::max(1.0, std::abs(x0)); }

void gate_assumptions(const ModelInstance& inst) {
    AssumptionReport rep = check_assumptions(inst);
    if (!rep.a1_holds)
        throw AssumptionError("A1 violated, rho=" + std::to_string(rep.rho1), rep.rho1);
    if (!rep.a2_holds)
        throw AssumptionError("A2 violated, rho2=" + std::to_string(rep.rho2), rep.rho2);
}

void check_edge_indices(const ModelInstance& inst, int i, int j) {
    if (i < 0 || i >= inst.size() || j < 0 || j >= inst.size())
        throw ValidationError("link derivative: agent index out of range");
    if (i == j) throw ValidationError("link derivative: self-loops are not in the model");
}

/// Everything the homogeneous-cost analytic formulas share.
struct Workspace {
    Matrix m;   ///< (I - lambda G)^-1
    Matrix w;   ///< common-influence matrix
    Matrix mg;  ///< M G
    Matrix q;   ///< (MG)^T (MG)
    Vector alpha;
    double c = 1.0, lam = 0.0, p = 1.0, delta = 0.0;
};

Workspace make_workspace(const ModelInstance& inst) {
    Workspace ws;
    CommonInfluence ci = w_matrix(inst);  // homogeneity check plus both spectral gates
    InfluenceSummary inf = influence_matrix(inst);
    ws.m = std::move(inf.m);
    ws.w = std::move(ci.w);
    ws.mg = std::move(ci.mg);
    ws.q = ws.mg.transpose() * ws.mg;
    ws.alpha = std::move(inf.alpha);
    ws.c = inst.params.cost[0];
    ws.lam = inst.lambda();
    ws.p = 1.0 / (1.0 + ws.c * inst.params.eta * inst.params.sigma2);
    ws.delta = ws.lam * ws.lam * ws.p;
    return ws;
}

Vector v_at(const ModelInstance& inst) {
    return inst.params.homogeneous_cost() ? optimal_v(inst) : optimal_v_het(inst);
}

Vector a_at(const ModelInstance& inst) { return nash_efforts(inst, v_at(inst)).a; }

/// Central difference that halves the step when a probe point violates an
/// assumption gate, down to the 1e-8 floor.
Vector fd_vec_adaptive(const std::function<Vector(double)>& f, double x0, double h0) {
    double h = h0;
    while (true) {
        try {
            return fd_derivative_vec(f, x0, h);
        } catch (const AssumptionError&) {
            h *= 0.5;
            if (h < tol::kFdStepFloor) throw;
        }
    }
}

/// Fills max_rel_err and sign classes; raises when analytic and fd disagree.
DerivativeReport finish_report(DerivativeReport rep) {
    const bool have_analytic = rep.analytic.size() > 0;
    if (have_analytic) {
        double worst = 0.0;
        for (Eigen::Index s = 0; s < rep.fd.size(); ++s)
            worst = std::max(worst,
                             std::abs(rep.analytic[s] - rep.fd[s]) / std::max(1.0, std::abs(rep.fd[s])));
        rep.max_rel_err = worst;
        if (worst > tol::kFdFlag)
            throw ConsistencyError(
                "derivative cross-check: analytic and finite-difference forms disagree, "
                "max relative error " +
                std::to_string(worst));
    }
    const Vector& basis = have_analytic ? rep.analytic : rep.fd;
    rep.sign_class.resize(static_cast<size_t>(basis.size()));
    for (Eigen::Index s = 0; s < basis.size(); ++s)
        rep.sign_class[static_cast<size_t>(s)] = classify_sign(basis[s]);
    return rep;
}

/// dv for a link perturbation: chain rule through W and alpha.
Vector dv_dg_analytic(const Workspace& ws, int i, int j) {
    Matrix mtmg = ws.m.transpose() * ws.mg;        // M^T M G
    Vector x = mtmg.row(i).transpose();            // right factor shared by all four terms
    Vector y = ws.lam * ws.mg.row(j).transpose();  // walk weights into the perturbed edge's head
    y[j] += 1.0;
    Matrix dq = y * x.transpose() + x * y.transpose();
    Matrix dw = ws.delta * ws.w * dq * ws.w;

    Vector dalpha = ws.lam * ws.alpha[i] * ws.m.row(j).transpose();
    return ws.p * (dw * ws.alpha + ws.w * dalpha);
}

Vector da_dg_analytic(const Workspace& ws, int i, int j, const Vector& v, const Vector& dv) {
    Matrix dm = ws.lam * ws.m.col(i) * ws.m.row(j);
    return (dm * v + ws.m * dv) / ws.c;
}

/// dv in beta: derivative of W via the symmetric product form, derivative of
/// alpha via column sums of M G M.
Vector dv_dbeta_analytic(const Workspace& ws, const Matrix& mgm) {
    const auto n = ws.m.rows();
    Matrix shifted = ws.m - Matrix::Identity(n, n);
    Matrix t = mgm.transpose() * shifted + shifted.transpose() * mgm;
    Matrix dw = (ws.p / ws.c) * ws.w * t * ws.w;
    Vector dalpha = mgm.colwise().sum().transpose() / ws.c;
    return ws.p * (dw * ws.alpha + ws.w * dalpha);
}

}  // namespace

SignClass classify_sign(double derivative) {
    if (derivative > tol::kStrict) return SignClass::strict_increase;
    if (derivative < -tol::kStrict) return SignClass::strict_decrease;
    if (std::abs(derivative) < tol::kZero) return SignClass::zero;
    return SignClass::weak_increase;
}

double fd_derivative(const std::function<double(double)>& f, double x0, double h) {
    if (h <= 0.0) h = default_step(x0);
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
}

Vector fd_derivative_vec(const std::function<Vector(double)>& f, double x0, double h) {
    if (h <= 0.0) h = default_step(x0);
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
}

DerivativeReport dv_dg(const ModelInstance& inst, int i, int j) {
    check_edge_indices(inst, i, j);
    DerivativeReport rep;
    rep.target = Target::v;
    rep.parameter = Parameter::g;
    rep.i = i;
    rep.j = j;
    const double x0 = inst.network.g(i, j);
    auto probe = [&](double x) { return v_at(with_edge_weight(inst, i, j, x)); };
    if (inst.params.homogeneous_cost()) {
        Workspace ws = make_workspace(inst);
        rep.analytic = dv_dg_analytic(ws, i, j);
    } else {
        gate_assumptions(inst);
        rep.fd_only = true;
    }
    rep.fd = fd_vec_adaptive(probe, x0, default_step(x0));
    return finish_report(std::move(rep));
}

DerivativeReport da_dg(const ModelInstance& inst, int i, int j) {
    check_edge_indices(inst, i, j);
    DerivativeReport rep;
    rep.target = Target::a;
    rep.parameter = Parameter::g;
    rep.i = i;
    rep.j = j;
    const double x0 = inst.network.g(i, j);
    auto probe = [&](double x) { return a_at(with_edge_weight(inst, i, j, x)); };
    if (inst.params.homogeneous_cost()) {
        Workspace ws = make_workspace(inst);
        Vector v = ws.p * (ws.w * ws.alpha);
        rep.analytic = da_dg_analytic(ws, i, j, v, dv_dg_analytic(ws, i, j));
    } else {
        gate_assumptions(inst);
        rep.fd_only = true;
    }
    rep.fd = fd_vec_adaptive(probe, x0, default_step(x0));
    return finish_report(std::move(rep));
}

DerivativeReport dv_dbeta(const ModelInstance& inst) {
    DerivativeReport rep;
    rep.target = Target::v;
    rep.parameter = Parameter::beta;
    const double x0 = inst.params.beta;
    auto probe = [&](double x) { return v_at(with_beta(inst, x)); };
    if (inst.params.homogeneous_cost()) {
        Workspace ws = make_workspace(inst);
        rep.analytic = dv_dbeta_analytic(ws, ws.mg * ws.m);
    } else {
        gate_assumptions(inst);
        rep.fd_only = true;
    }
    rep.fd = fd_vec_adaptive(probe, x0, default_step(x0));
    return finish_report(std::move(rep));
}

DerivativeReport da_dbeta(const ModelInstance& inst) {
    DerivativeReport rep;
    rep.target = Target::a;
    rep.parameter = Parameter::beta;
    const double x0 = inst.params.beta;
    auto probe = [&](double x) { return a_at(with_beta(inst, x)); };
    if (inst.params.homogeneous_cost()) {
        Workspace ws = make_workspace(inst);
        Matrix mgm = ws.mg * ws.m;
        Vector v = ws.p * (ws.w * ws.alpha);
        Vector dv = dv_dbeta_analytic(ws, mgm);
        rep.analytic = (mgm * v / ws.c + ws.m * dv) / ws.c;
    } else {
        gate_assumptions(inst);
        rep.fd_only = true;
    }
    rep.fd = fd_vec_adaptive(probe, x0, default_step(x0));
    return finish_report(std::move(rep));
}

namespace {

/// Shared assembly for the three scalar parameters. Computes dp, ddelta,
/// and (for cost) dM, then pushes them through v = p W alpha and
/// a = (1/c) M v.
struct ParamDerivatives {
    Vector dv;
    Vector da;
};

ParamDerivatives param_derivatives_analytic(const ModelInstance& inst, Parameter which) {
    Workspace ws = make_workspace(inst);
    const auto& pr = inst.params;
    const double c = ws.c, p = ws.p, beta = pr.beta;
    const double t = c * pr.eta * pr.sigma2;

    double dp = 0.0, ddelta = 0.0;
    Matrix dm = Matrix::Zero(inst.size(), inst.size());
    bool m_varies = false;
    if (which == Parameter::cost) {
        dp = -pr.eta * pr.sigma2 * p * p;
        ddelta = -beta * beta * (2.0 + 3.0 * t) / (c * c * c * (1.0 + t) * (1.0 + t));
        dm = -(beta / (c * c)) * ws.mg * ws.m;
        m_varies = true;
    } else if (which == Parameter::eta) {
        dp = -c * pr.sigma2 * p * p;
        ddelta = ws.lam * ws.lam * dp;
    } else {
        dp = -c * pr.eta * p * p;
        ddelta = ws.lam * ws.lam * dp;
    }

    Matrix dscaled = ddelta * ws.q;
    Vector dalpha = Vector::Zero(inst.size());
    if (m_varies) {
        Matrix dmg = dm * inst.network.g;
        dscaled += ws.delta * (dmg.transpose() * ws.mg + ws.mg.transpose() * dmg);
        dalpha = dm.colwise().sum().transpose();
    }
    Matrix dw = ws.w * dscaled * ws.w;

    Vector v = p * (ws.w * ws.alpha);
    ParamDerivatives out;
    out.dv = dp * (ws.w * ws.alpha) + p * (dw * ws.alpha) + p * (ws.w * dalpha);
    out.da = (dm * v + ws.m * out.dv) / c;
    if (which == Parameter::cost) out.da -= ws.m * v / (c * c);
    return out;
}

DerivativeReport dparam_report(const ModelInstance& inst, Parameter which, Target target) {
    if (which != Parameter::cost && which != Parameter::eta && which != Parameter::sigma2)
        throw ValidationError("parameter derivative: parameter must be cost, eta, or sigma2");
    DerivativeReport rep;
    rep.target = target;
    rep.parameter = which;

    double x0 = 0.0;
    std::function<ModelInstance(double)> rebuild;
    if (which == Parameter::cost) {
        if (!inst.params.homogeneous_cost())
            throw ValidationError(
                "parameter derivative: per-agent costs have no shared level to perturb");
        x0 = inst.params.cost[0];
        rebuild = [&](double x) { return with_homogeneous_cost(inst, x); };
    } else if (which == Parameter::eta) {
        x0 = inst.params.eta;
        rebuild = [&](double x) { return with_eta(inst, x); };
    } else {
        x0 = inst.params.sigma2;
        rebuild = [&](double x) { return with_sigma2(inst, x); };
    }

    auto probe = [&](double x) {
        ModelInstance probe_inst = rebuild(x);
        return target == Target::v ? v_at(probe_inst) : a_at(probe_inst);
    };
    if (inst.params.homogeneous_cost()) {
        ParamDerivatives d = param_derivatives_analytic(inst, which);
        rep.analytic = target == Target::v ? std::move(d.dv) : std::move(d.da);
    } else {
        gate_assumptions(inst);
        rep.fd_only = true;
    }
    rep.fd = fd_vec_adaptive(probe, x0, default_step(x0));
    return finish_report(std::move(rep));
}

}  // namespace

DerivativeReport dv_dparam(const ModelInstance& inst, Parameter which) {
    return dparam_report(inst, which, Target::v);
}

DerivativeReport da_dparam(const ModelInstance& inst, Parameter which) {
    return dparam_report(inst, which, Target::a);
}

MarginalEffect marginal_effect(const ModelInstance& inst) {
    if (!inst.params.homogeneous_cost())
        throw ValidationError("marginal effect requires homogeneous costs");
    const double c = inst.params.cost[0];
    const double t = c * inst.params.eta * inst.params.sigma2;

    MarginalEffect me;
    me.kappa = 1.0 / (c * c * (1.0 + t)) + (c - 1.0) * (1.0 + t) / (c * c * c * t * t);
    const double v0 = 1.0 / (1.0 + t);
    me.kappa_appendix = (1.0 + t) * (c * t * t + (c - 1.0) * (1.0 + t) * (1.0 + t)) /
                        (c * c * c * t * t) * v0 * v0;
    if (std::abs(me.kappa - me.kappa_appendix) > tol::kZero)
        throw ConsistencyError("marginal effect: the two constant arrangements disagree by " +
                               std::to_string(std::abs(me.kappa - me.kappa_appendix)));

    me.total_weight = inst.network.g.sum();
    me.analytic_slope = me.kappa * me.total_weight;
    me.fd_slope = fd_derivative(
        [&](double b) {
            ModelInstance probe = with_beta(inst, b);
            return principal_profit(probe, optimal_v(probe));
        },
        0.0, 1e-6);
    me.fd_consistent =
        std::abs(me.analytic_slope - me.fd_slope) <= tol::kMarginalFd * std::max(1.0, std::abs(me.fd_slope));
    return me;
}

LinkEffectClasses classify_link_effect(const ModelInstance& inst, int i, int j) {
    if (!inst.params.homogeneous_cost())
        throw ValidationError("link-effect classification requires homogeneous costs");
    check_edge_indices(inst, i, j);
    DerivativeReport rv = dv_dg(inst, i, j);
    DerivativeReport ra = da_dg(inst, i, j);

    // Connectivity is read off the graph with the perturbed edge present, so
    // the prediction covers perturbations of absent links too.
    Network bumped = inst.network;
    if (bumped.g(i, j) <= 0.0) bumped.g(i, j) = 1.0;
    const int n = inst.size();
    std::vector<int> comp_of(static_cast<size_t>(n), -1);
    auto comps = weak_components(bumped);
    for (size_t b = 0; b < comps.size(); ++b)
        for (int member : comps[b]) comp_of[static_cast<size_t>(member)] = static_cast<int>(b);

    LinkEffectClasses out;
    out.v_predicted.resize(static_cast<size_t>(n));
    out.v_numeric.resize(static_cast<size_t>(n));
    out.a_predicted.resize(static_cast<size_t>(n));
    out.a_numeric.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const auto ku = static_cast<size_t>(k);
        bool connected = comp_of[ku] == comp_of[static_cast<size_t>(j)];
        out.a_predicted[ku] = connected ? SignClass::strict_increase : SignClass::zero;
        out.v_predicted[ku] = connected && has_in_link(bumped, k) ? SignClass::strict_increase
                                                                  : SignClass::zero;
        out.v_numeric[ku] = rv.sign_class[ku];
        out.a_numeric[ku] = ra.sign_class[ku];
        if (out.v_predicted[ku] != out.v_numeric[ku])
            throw ConsistencyError(
                "link-effect classification: pay prediction disagrees with the measured "
                "derivative for agent " +
                inst.labels[ku]);
        if (out.a_predicted[ku] != out.a_numeric[ku])
            throw ConsistencyError(
                "link-effect classification: effort prediction disagrees with the measured "
                "derivative for agent " +
                inst.labels[ku]);
    }
    return out;
}

}  // namespace netcontract
