#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "netcontract/contracts.hpp"
#include "netcontract/equilibrium.hpp"
#include "netcontract/errors.hpp"
#include "test_support.hpp"

using namespace netcontract;
using nctest::load_instance;
using nctest::make_instance;

namespace {

/// Two agents pointing at each other with unit weight: the smallest graph
/// whose effort game is stable at beta=0.6 while the principal's objective
/// already fails the common-influence contraction (rho2 = 1.125).
ModelInstance two_cycle(double beta) {
    Matrix g(2, 2);
    g << 0.0, 1.0, 1.0, 0.0;
    return make_instance(g, beta);
}

}  // namespace

TEST_CASE("empty_baseline: closed form in cost, risk aversion, and noise") {
    const ModelInstance unit = load_instance("empty3.json");
    const BaselinePoint b1 = empty_baseline(unit, 0);
    CHECK(b1.v == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b1.a == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b1.z == doctest::Approx(0.0).epsilon(1e-14));

    const ModelInstance costly = make_instance(Matrix::Zero(2, 2), 0.0, 2.0);
    const BaselinePoint b2 = empty_baseline(costly, 1);
    CHECK(b2.v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(b2.a == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(b2.z == doctest::Approx(1.0 / 36.0).epsilon(1e-14));

    ModelInstance noisy = make_instance(Matrix::Zero(1, 1), 0.0, 1.0, 1.0, 3.0);
    noisy.params.reservation(0) = 0.2;
    const BaselinePoint b3 = empty_baseline(noisy, 0);
    CHECK(b3.v == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(b3.a == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(b3.z == doctest::Approx(0.2 + 1.0 / 16.0).epsilon(1e-14));

    CHECK_THROWS_AS((void)empty_baseline(unit, 3), ValidationError);
    CHECK_THROWS_AS((void)empty_baseline(unit, -1), ValidationError);
}

TEST_CASE("w_matrix: two spokes into the center") {
    const CommonInfluence ci = w_matrix(load_instance("fig1.json"));
    CHECK(ci.delta == doctest::Approx(0.125).epsilon(1e-14));
    CHECK((ci.mg - nctest::fig1_graph()).cwiseAbs().maxCoeff() <= 1e-12);
    Matrix expect = Matrix::Identity(3, 3);
    expect(1, 1) = 4.0 / 3.0;  // only the center is influenced in common
    CHECK((ci.w - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("w_matrix: five-agent chain couples the spokes through shared targets") {
    const CommonInfluence ci = w_matrix(load_instance("fig2.json"));
    const Matrix& w = ci.w;
    // Anyone without an in-link influences nobody's pay but their own: rows
    // and columns 2 and 4 (labels) are unit basis vectors.
    for (int k : {1, 3}) {
        CHECK(w(k, k) == doctest::Approx(1.0).epsilon(1e-12));
        for (int j = 0; j < 5; ++j) {
            if (j == k) continue;
            CHECK(std::abs(w(k, j)) <= 1e-12);
            CHECK(std::abs(w(j, k)) <= 1e-12);
        }
    }
    // Agents 1 and 3 share the influencer 2; agents 3 and 5 share 4.
    CHECK(w(0, 2) > 1e-3);
    CHECK(w(2, 4) > 1e-3);
    // Agents 1 and 5 share no influencer yet are coupled through the chain.
    CHECK(w(0, 4) > 1e-6);
    CHECK(w(0, 4) < w(0, 2));
}

TEST_CASE("w_matrix: beta=0 collapses to the identity") {
    const CommonInfluence ci = w_matrix(make_instance(nctest::path3_graph(), 0.0));
    CHECK(ci.delta == 0.0);
    CHECK((ci.w - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("w_matrix: stable effort game can still fail the principal's gate") {
    const ModelInstance inst = two_cycle(0.6);
    const AssumptionReport rep = check_assumptions(inst);
    REQUIRE(rep.a1_holds);  // rho1 = 0.6
    REQUIRE_FALSE(rep.a2_holds);
    CHECK(rep.rho2 == doctest::Approx(1.125).epsilon(1e-10));
    try {
        (void)w_matrix(inst);
        FAIL("expected the second gate to refuse");
    } catch (const AssumptionError& e) {
        CHECK(e.rho() == doctest::Approx(1.125).epsilon(1e-9));
        CHECK(std::string(e.what()).find("A2") != std::string::npos);
    }
}

TEST_CASE("w_matrix: per-agent costs are rejected") {
    CHECK_THROWS_AS((void)w_matrix(load_instance("sec6_path.json")), ValidationError);
}

TEST_CASE("optimal_v: spokes get the solo pay, the center gets a premium") {
    const Vector v = optimal_v(load_instance("fig1.json"));
    CHECK(v(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(v(2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("optimal_v: no links means the solo contract for everyone") {
    const Vector v = optimal_v(load_instance("empty3.json"));
    for (int i = 0; i < 3; ++i) CHECK(v(i) == doctest::Approx(0.5).epsilon(1e-14));

    // An isolated agent appended to a linked graph keeps the solo pay exactly.
    Matrix g = Matrix::Zero(4, 4);
    g.topLeftCorner(3, 3) = nctest::fig1_graph();
    const Vector v4 = optimal_v(make_instance(g, 0.5));
    CHECK(v4(3) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(v4(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("optimal_v: gates refuse unstable instances") {
    CHECK_THROWS_AS((void)optimal_v(make_instance(nctest::path3_graph(), 0.8)), AssumptionError);
    CHECK_THROWS_AS((void)optimal_v(two_cycle(0.6)), AssumptionError);
}

TEST_CASE("optimal_v_het: agrees with the homogeneous closed form") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 25; ++trial) {
        const ModelInstance inst = nctest::random_instance(rng, /*heterogeneous=*/false);
        const Vector closed = optimal_v(inst);
        const Vector system = optimal_v_het(inst);
        CHECK((closed - system).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("optimal_v_het: low-cost ends versus the high-cost center") {
    const ModelInstance path = load_instance("sec6_path.json");  // costs 0.5, 1, 0.5

    // No peer effects: each agent gets the solo pay for their cost.
    const Vector v0 = optimal_v_het(path);
    CHECK(v0(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(v0(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v0(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // Weak peer effects: the cheap ends still earn the higher pay slope.
    const Vector v_weak = optimal_v_het(with_beta(path, 0.05));
    CHECK(v_weak(0) == doctest::Approx(v_weak(2)).epsilon(1e-12));
    CHECK(v_weak(0) > v_weak(1));

    // Strong peer effects: the central position overtakes despite its cost.
    const Vector v_strong = optimal_v_het(with_beta(path, 0.2));
    CHECK(v_strong(1) > v_strong(0));
    CHECK(v_strong(0) == doctest::Approx(v_strong(2)).epsilon(1e-12));

    // Past the concavity boundary the first-order point is a saddle: refuse.
    CHECK_THROWS_AS((void)optimal_v_het(with_beta(path, 0.3)), AssumptionError);
}

TEST_CASE("optimal_z: known fixed pay and the binding participation check") {
    const ModelInstance fig1 = load_instance("fig1.json");
    Vector v(3);
    v << 0.5, 4.0 / 3.0, 0.5;
    const EffortProfile a = nash_efforts(fig1, v);
    const Vector z = optimal_z(fig1, v, a);
    CHECK(z(0) == doctest::Approx(-5.0 / 9.0).epsilon(1e-12));
    CHECK(z(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z(2) == doctest::Approx(-5.0 / 9.0).epsilon(1e-12));

    // Idle contract: the fixed pay is exactly the outside option.
    ModelInstance res = fig1;
    res.params.reservation << 0.3, -0.2, 0.0;
    EffortProfile idle{Vector::Zero(3)};
    const Vector z0 = optimal_z(res, Vector::Zero(3), idle);
    CHECK((z0 - res.params.reservation).cwiseAbs().maxCoeff() <= 1e-14);

    // Off-equilibrium efforts break the participation identity: refused.
    EffortProfile wrong{Vector::Constant(3, 2.0)};
    CHECK_THROWS_AS((void)optimal_z(fig1, v, wrong), ConsistencyError);
    CHECK_THROWS_AS((void)optimal_z(fig1, Vector::Zero(2), idle), ValidationError);
}

TEST_CASE("optimal_z: baseline consistency on the empty network") {
    const ModelInstance inst = load_instance("empty3.json");
    Vector v(3), a(3);
    for (int i = 0; i < 3; ++i) {
        const BaselinePoint b = empty_baseline(inst, i);
        v(i) = b.v;
        a(i) = b.a;
    }
    const Vector z = optimal_z(inst, v, EffortProfile{a});
    for (int i = 0; i < 3; ++i)
        CHECK(z(i) == doctest::Approx(empty_baseline(inst, i).z).epsilon(1e-14));
}

TEST_CASE("profit: pinned values") {
    const ModelInstance fig1 = load_instance("fig1.json");
    Vector v(3);
    v << 0.5, 4.0 / 3.0, 0.5;
    CHECK(principal_profit(fig1, v) == doctest::Approx(11.0 / 6.0).epsilon(1e-12));

    // Empty network at the solo optimum: a quarter per agent.
    const ModelInstance empty = load_instance("empty3.json");
    CHECK(principal_profit(empty, Vector::Constant(3, 0.5)) ==
          doctest::Approx(0.75).epsilon(1e-12));

    // Zero pay slope shuts effort down: nothing earned, reservations owed.
    CHECK(principal_profit(fig1, Vector::Zero(3)) == doctest::Approx(0.0).epsilon(1e-14));
    ModelInstance res = fig1;
    res.params.reservation << 0.1, 0.2, 0.3;
    CHECK(principal_profit(res, Vector::Zero(3)) == doctest::Approx(-0.6).epsilon(1e-12));
}

TEST_CASE("profit: reduced and wage-bill forms agree at arbitrary points") {
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    const ModelInstance inst = load_instance("fig1.json");
    for (int trial = 0; trial < 50; ++trial) {
        Vector v(3), a(3);
        for (int i = 0; i < 3; ++i) {
            v(i) = u(rng);
            a(i) = u(rng);
        }
        const double pi = profit_at(inst, v, a);  // throws if the forms disagree
        const auto& p = inst.params;
        Vector z = (p.reservation.array() + 0.5 * p.eta * p.sigma2 * v.array().square() -
                    0.5 * p.cost.array() * a.array().square())
                       .matrix();
        const double wage_bill = (a.array() - z.array() - v.array() * a.array()).sum();
        CHECK(pi == doctest::Approx(wage_bill).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)profit_at(inst, Vector::Zero(2), Vector::Zero(3)), ValidationError);
}

TEST_CASE("principal_profit: interior flag only matters outside the interior") {
    const ModelInstance inst = load_instance("fig1.json");
    Vector v(3);
    v << 0.5, 4.0 / 3.0, 0.5;
    CHECK(principal_profit(inst, v, true) == doctest::Approx(principal_profit(inst, v, false)));
    Vector neg(3);
    neg << -1.0, 0.2, 0.2;
    CHECK_THROWS_AS((void)principal_profit(inst, neg, true), NumericError);
    CHECK(std::isfinite(principal_profit(inst, neg, false)));
}

TEST_CASE("solve: two spokes into the center, complete solution") {
    const ContractSolution sol = solve(load_instance("fig1.json"));
    CHECK(sol.contract.v(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol.contract.v(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(sol.contract.v(2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol.efforts.a(0) == doctest::Approx(7.0 / 6.0).epsilon(1e-12));
    CHECK(sol.efforts.a(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(sol.efforts.a(2) == doctest::Approx(7.0 / 6.0).epsilon(1e-12));
    CHECK(sol.contract.z(0) == doctest::Approx(-5.0 / 9.0).epsilon(1e-12));
    CHECK(sol.contract.z(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.profit == doctest::Approx(11.0 / 6.0).epsilon(1e-12));
    CHECK(sol.ce.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sol.diagnostics.a1_holds);
    CHECK(sol.diagnostics.rho2 == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("solve: chain instance separates supported and unsupported agents") {
    const ContractSolution sol = solve(load_instance("fig2.json"));
    const double solo = empty_baseline(load_instance("fig2.json"), 0).v;  // 0.5
    // Agents 2 and 4 influence others but are influenced by nobody: their pay
    // slope equals the solo value exactly.
    CHECK(sol.contract.v(1) == doctest::Approx(solo).epsilon(1e-13));
    CHECK(sol.contract.v(3) == doctest::Approx(solo).epsilon(1e-13));
    // Every agent with an in-link earns a strictly higher slope.
    CHECK(sol.contract.v(0) > solo + 0.05);
    CHECK(sol.contract.v(2) > solo + 0.05);
    CHECK(sol.contract.v(4) > solo + 0.05);
    // The doubly-supported middle agent earns the largest slope of all.
    CHECK(sol.contract.v(2) > sol.contract.v(0));
    CHECK(sol.contract.v(2) > sol.contract.v(4));
}

TEST_CASE("solve: unsafe evaluates the stationary point behind a failed gate") {
    const ModelInstance inst = two_cycle(0.6);
    CHECK_THROWS_AS((void)solve(inst), AssumptionError);

    const ContractSolution sol = solve(inst, /*unsafe=*/true);
    CHECK_FALSE(sol.diagnostics.a2_holds);
    CHECK(sol.diagnostics.rho2 == doctest::Approx(1.125).epsilon(1e-10));
    // Stationary point of the (non-concave) objective, solvable by hand.
    CHECK(sol.contract.v(0) == doctest::Approx(-10.0).epsilon(1e-9));
    CHECK(sol.contract.v(1) == doctest::Approx(-10.0).epsilon(1e-9));
    CHECK(sol.efforts.a(0) == doctest::Approx(-25.0).epsilon(1e-9));
    CHECK(sol.profit == doctest::Approx(-25.0).epsilon(1e-8));
    // The participation identity is algebraic: it binds even at a saddle.
    CHECK(sol.ce.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("invariant: influence identity linking both first-order forms") {
    // M + M^T - M^T M must equal I - lambda^2 G^T M^T M G; the closed form
    // and the raw first-order system are equivalent exactly through this.
    std::mt19937_64 rng(1618);
    for (int trial = 0; trial < 40; ++trial) {
        const ModelInstance inst = nctest::random_instance(rng);
        const int n = inst.size();
        const double lam = inst.lambda();
        const Matrix m = m_matrix(inst);
        const Matrix& g = inst.network.g;
        const Matrix lhs = m + m.transpose() - m.transpose() * m;
        const Matrix rhs = Matrix::Identity(n, n) -
                           lam * lam * g.transpose() * m.transpose() * m * g;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("invariant: participation binds at the optimum for any reservations") {
    std::mt19937_64 rng(6021023);
    std::uniform_real_distribution<double> res(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        ModelInstance inst = nctest::random_instance(rng, trial % 2 == 1);
        for (int i = 0; i < inst.size(); ++i) inst.params.reservation(i) = res(rng);
        const ContractSolution sol = solve(inst);
        CHECK((sol.ce - inst.params.reservation).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("invariant: network premium is exactly the in-link premium") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        const ModelInstance inst = nctest::random_instance(rng);
        const Vector v = optimal_v(inst);
        const double solo = empty_baseline(inst, 0).v;
        for (int i = 0; i < inst.size(); ++i) {
            if (has_in_link(inst.network, i)) {
                CHECK(v(i) > solo + 1e-12);
            } else {
                CHECK(v(i) == doctest::Approx(solo).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("invariant: no nearby pay schedule beats the closed form") {
    std::mt19937_64 rng(133701);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.0, 0.1);
    for (int trial = 0; trial < 5; ++trial) {
        const ModelInstance inst = nctest::random_instance(rng);
        const Vector v = optimal_v(inst);
        const double best = principal_profit(inst, v, false);
        for (int k = 0; k < 1000; ++k) {
            Vector eps(inst.size());
            for (int i = 0; i < inst.size(); ++i) eps(i) = gauss(rng);
            eps *= radius(rng) / std::max(eps.norm(), 1e-300);
            const double perturbed = principal_profit(inst, Vector(v + eps), false);
            CHECK(perturbed <= best + 1e-12);
        }
    }
}
