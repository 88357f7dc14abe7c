#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "netcontract/errors.hpp"
#include "netcontract/placement.hpp"
#include "test_support.hpp"

using namespace netcontract;
using nctest::load_instance;
using nctest::make_instance;

TEST_CASE("beta_sweep: grid validation") {
    const ModelInstance inst = load_instance("fig1.json");
    CHECK_THROWS_AS((void)beta_sweep(inst, {}), ValidationError);
    CHECK_THROWS_AS((void)beta_sweep(inst, {0.1, 0.1}), ValidationError);
    CHECK_THROWS_AS((void)beta_sweep(inst, {0.2, 0.1}), ValidationError);
    CHECK_THROWS_AS((void)beta_sweep(inst, {-0.1, 0.2}), ValidationError);
    CHECK_THROWS_AS((void)beta_sweep(inst, {0.1, std::numeric_limits<double>::infinity()}),
                    ValidationError);
}

TEST_CASE("beta_sweep: rows carry full, degraded, or empty values by feasibility") {
    // Low-cost ends, high-cost center: the concavity condition fails near
    // beta = 0.2834 while the effort game stays stable until beta = 0.5.
    const ModelInstance path = load_instance("sec6_path.json");
    const std::vector<double> grid{0.0, 0.1, 0.2, 0.28, 0.3, 0.5, 0.75};
    const BetaSweep sweep = beta_sweep(path, grid);
    REQUIRE(sweep.rows.size() == grid.size());
    CHECK(sweep.grid == grid);

    for (int k : {0, 1, 2, 3}) {
        const SweepRow& row = sweep.rows[static_cast<size_t>(k)];
        CHECK(row.beta == grid[static_cast<size_t>(k)]);
        CHECK(row.feasible);
        REQUIRE(row.v.size() == 3);
        CHECK(std::isfinite(row.profit));
        CHECK(row.margins.a1_holds);
        CHECK(row.margins.a2_holds);
    }
    // Solvable effort game, non-concave objective: stationary values, flagged.
    const SweepRow& saddle = sweep.rows[4];
    CHECK_FALSE(saddle.feasible);
    CHECK(saddle.margins.a1_holds);
    CHECK_FALSE(saddle.margins.a2_holds);
    REQUIRE(saddle.v.size() == 3);
    CHECK(std::isfinite(saddle.profit));
    // Unstable effort game: no values at all.
    for (int k : {5, 6}) {
        const SweepRow& row = sweep.rows[static_cast<size_t>(k)];
        CHECK_FALSE(row.feasible);
        CHECK_FALSE(row.margins.a1_holds);
        CHECK(row.v.size() == 0);
        CHECK(row.a.size() == 0);
        CHECK(std::isnan(row.profit));
    }

    // At beta = 0 the optimum is the per-agent solo contract.
    CHECK(sweep.rows[0].v(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(sweep.rows[0].v(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sweep.rows[0].profit == doctest::Approx(19.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("beta_sweep: parallel and serial paths are bit-identical") {
    const ModelInstance path = load_instance("sec6_path.json");
    std::vector<double> grid;
    for (int k = 0; k < 60; ++k) grid.push_back(0.28 * k / 59.0);
    const BetaSweep par = beta_sweep(path, grid);
    const BetaSweep ser = beta_sweep_serial(path, grid);
    REQUIRE(par.rows.size() == ser.rows.size());
    for (size_t k = 0; k < par.rows.size(); ++k) {
        CHECK(par.rows[k].feasible == ser.rows[k].feasible);
        // Same instructions on the same data: not approximately equal, equal.
        CHECK(par.rows[k].profit == ser.rows[k].profit);
        REQUIRE(par.rows[k].v.size() == ser.rows[k].v.size());
        if (par.rows[k].v.size() > 0) {
            CHECK((par.rows[k].v - ser.rows[k].v).cwiseAbs().maxCoeff() == 0.0);
            CHECK((par.rows[k].a - ser.rows[k].a).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("beta_sweep: the center's pay rises smoothly with peer effects") {
    const ModelInstance fig1 = load_instance("fig1.json");
    std::vector<double> grid;
    for (int k = 0; k < 80; ++k) grid.push_back(0.6 * k / 79.0);
    const BetaSweep sweep = beta_sweep(fig1, grid);
    double prev_v = -1.0, prev_profit = -1.0;
    double max_step = 0.0;
    for (const SweepRow& row : sweep.rows) {
        REQUIRE(row.feasible);  // acyclic graph: stable for every beta < 1 here
        CHECK(row.v(1) > prev_v);
        CHECK(row.profit > prev_profit);
        if (prev_v >= 0.0) max_step = std::max(max_step, row.v(1) - prev_v);
        prev_v = row.v(1);
        prev_profit = row.profit;
    }
    CHECK(max_step < 0.1);  // no jumps: the closed form is smooth in beta
}

TEST_CASE("enumerate_placements: high-cost center loses at strong peer effects") {
    // Path of three positions, one expensive worker among two cheap ones, at
    // a beta where every arrangement fails the concavity gate: the ranking
    // works off the stationary values and still has a clear winner.
    const Network net{nctest::path3_graph()};
    EconParams params;
    params.eta = 1.0;
    params.sigma2 = 1.0;
    const PlacementResult res = enumerate_placements(net, {1.0, 0.5, 0.5}, params, 0.3);

    REQUIRE(res.assignments.size() == 3);  // distinct orderings of {0.5, 0.5, 1}
    Vector first(3), second(3), third(3);
    first << 0.5, 0.5, 1.0;
    second << 0.5, 1.0, 0.5;
    third << 1.0, 0.5, 0.5;
    CHECK((res.assignments[0].costs - first).cwiseAbs().maxCoeff() == 0.0);
    CHECK((res.assignments[1].costs - second).cwiseAbs().maxCoeff() == 0.0);
    CHECK((res.assignments[2].costs - third).cwiseAbs().maxCoeff() == 0.0);

    for (const PlacementRow& row : res.assignments) {
        CHECK(row.a1_holds);
        CHECK_FALSE(row.a2_holds);
        CHECK_FALSE(row.feasible);
        CHECK(std::isfinite(row.profit));
    }
    // Cheap center beats expensive center; mirrored ends tie exactly.
    CHECK(res.assignments[0].profit == doctest::Approx(-5.7406901575).epsilon(1e-8));
    CHECK(res.assignments[1].profit == doctest::Approx(-26.717342).epsilon(1e-6));
    CHECK(res.assignments[0].profit ==
          doctest::Approx(res.assignments[2].profit).epsilon(1e-12));
    CHECK(res.best == 0);  // ties resolve to the first in cost order
    CHECK(res.profit_classes == 2);
}

TEST_CASE("enumerate_placements: feasible region keeps the same ranking structure") {
    const Network net{nctest::path3_graph()};
    EconParams params;
    params.eta = 1.0;
    params.sigma2 = 1.0;
    const PlacementResult res = enumerate_placements(net, {0.5, 1.0, 0.5}, params, 0.15);
    REQUIRE(res.assignments.size() == 3);
    for (const PlacementRow& row : res.assignments) CHECK(row.feasible);
    // Cost-scaled stability radii: sqrt(6) for a cheap center flanked by one
    // cheap and one dear end, exactly 2 for the expensive-center arrangement.
    CHECK(res.assignments[0].rho1 == doctest::Approx(0.15 * std::sqrt(6.0)).epsilon(1e-10));
    CHECK(res.assignments[1].rho1 == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(res.assignments[2].rho1 == doctest::Approx(0.15 * std::sqrt(6.0)).epsilon(1e-10));
    CHECK(res.best >= 0);
    CHECK(res.profit_classes == 2);
    CHECK(res.assignments[0].profit ==
          doctest::Approx(res.assignments[2].profit).epsilon(1e-12));
}

TEST_CASE("enumerate_placements: identical costs collapse to one assignment") {
    const Network net{nctest::path3_graph()};
    EconParams params;
    const PlacementResult res = enumerate_placements(net, {1.0, 1.0, 1.0}, params, 0.2);
    REQUIRE(res.assignments.size() == 1);
    CHECK(res.best == 0);
    CHECK(res.profit_classes == 1);
    CHECK(res.assignments[0].feasible);
}

TEST_CASE("enumerate_placements: graph symmetry collapses profit classes") {
    // Directed 4-cycle: rotations map any single-cheap-agent assignment onto
    // any other, so all four assignments share one profit class.
    Matrix g = Matrix::Zero(4, 4);
    g(0, 1) = g(1, 2) = g(2, 3) = g(3, 0) = 1.0;
    EconParams params;
    const PlacementResult res = enumerate_placements(Network{g}, {0.5, 1.0, 1.0, 1.0}, params, 0.2);
    REQUIRE(res.assignments.size() == 4);
    for (const PlacementRow& row : res.assignments) REQUIRE(row.feasible);
    CHECK(res.profit_classes == 1);
    for (size_t k = 1; k < 4; ++k)
        CHECK(res.assignments[k].profit ==
              doctest::Approx(res.assignments[0].profit).epsilon(1e-10));
}

TEST_CASE("enumerate_placements: parallel and serial paths agree exactly") {
    Matrix g = Matrix::Zero(4, 4);
    g(0, 1) = g(1, 0) = 1.0;
    g(1, 2) = g(2, 3) = 0.7;
    EconParams params;
    const PlacementResult par = enumerate_placements(Network{g}, {0.5, 0.8, 1.0, 1.2}, params, 0.2);
    const PlacementResult ser =
        enumerate_placements_serial(Network{g}, {0.5, 0.8, 1.0, 1.2}, params, 0.2);
    REQUIRE(par.assignments.size() == 24);
    REQUIRE(ser.assignments.size() == 24);
    CHECK(par.best == ser.best);
    CHECK(par.profit_classes == ser.profit_classes);
    for (size_t k = 0; k < par.assignments.size(); ++k) {
        const bool both_nan = std::isnan(par.assignments[k].profit) &&
                              std::isnan(ser.assignments[k].profit);
        CHECK((both_nan || par.assignments[k].profit == ser.assignments[k].profit));
    }
}

TEST_CASE("enumerate_placements: input validation") {
    const Network net{nctest::path3_graph()};
    EconParams params;
    CHECK_THROWS_WITH_AS((void)enumerate_placements(net, {1.0, 1.0}, params, 0.2),
                         doctest::Contains("got 2 costs for 3 network positions"),
                         ValidationError);
    CHECK_THROWS_AS((void)enumerate_placements(net, {1.0, 1.0, -1.0}, params, 0.2),
                    ValidationError);
    CHECK_THROWS_AS((void)enumerate_placements(net, {1.0, 1.0, 1.0}, params, -0.2),
                    ValidationError);
    Matrix big = Matrix::Zero(10, 10);
    CHECK_THROWS_WITH_AS(
        (void)enumerate_placements(Network{big}, std::vector<double>(10, 1.0), params, 0.1),
        doctest::Contains("capped at 9"), ValidationError);
}

TEST_CASE("default_beta_cap: contraction boundary with a one percent margin") {
    CHECK(default_beta_cap(Network{nctest::fig1_graph()}, Vector::Constant(3, 1.0)) ==
          std::numeric_limits<double>::infinity());
    CHECK(default_beta_cap(Network{nctest::path3_graph()}, Vector::Constant(3, 1.0)) ==
          doctest::Approx(0.99 / std::sqrt(2.0)).epsilon(1e-10));
    Vector het(3);
    het << 0.5, 1.0, 0.5;
    CHECK(default_beta_cap(Network{nctest::path3_graph()}, het) ==
          doctest::Approx(0.495 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS((void)default_beta_cap(Network{Matrix::Zero(0, 0)}, Vector()),
                    ValidationError);
}
