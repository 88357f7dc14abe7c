/**
 * @file placement.hpp
 * @brief Parameter sweeps over the peer-effect strength and exhaustive
 *        assignment of a cost multiset to network positions.
 */
#pragma once

#include <vector>

#include "netcontract/model.hpp"

namespace netcontract {

/// One grid point of a sweep. Fully feasible points carry the complete
/// optimum; points failing only the concavity condition carry the
/// first-order stationary values; points without a solvable effort game
/// carry no values (NaN profit, empty vectors).
struct SweepRow {
    double beta = 0.0;
    bool feasible = false;  ///< both assumption gates hold
    AssumptionReport margins;
    Vector v;
    Vector a;
    double profit = 0.0;
};

struct BetaSweep {
    std::vector<double> grid;
    std::vector<SweepRow> rows;  ///< one per grid point, same order
};

/// One assignment of the cost multiset to positions.
struct PlacementRow {
    Vector costs;  ///< cost by network position
    bool a1_holds = false;
    bool a2_holds = false;
    double rho1 = 0.0;
    double rho2 = 0.0;
    bool feasible = false;  ///< both hold
    double profit = 0.0;    ///< stationary value when only concavity fails; NaN if unsolvable
};

struct PlacementResult {
    std::vector<PlacementRow> assignments;  ///< lexicographic order of cost vectors
    int best = -1;            ///< index of the profit argmax among solvable rows
    int profit_classes = 0;   ///< distinct profit values at 1e-10 (symmetry collapses classes)
};

/// Evaluates the optimal contract across a strictly increasing, nonnegative
/// beta grid. Infeasibility is data, never an error: each row records the
/// assumption margins and whatever values remain computable.
BetaSweep beta_sweep(const ModelInstance& inst, const std::vector<double>& betas);
BetaSweep beta_sweep_serial(const ModelInstance& inst, const std::vector<double>& betas);

/// Profit of every distinct assignment of `costs` to the positions of `net`
/// at the given beta, ranked deterministically (ties broken by lexicographic
/// order). Assignments whose effort game is unsolvable are excluded from the
/// argmax; assignments failing only the concavity condition are evaluated at
/// the stationary point and included, flagged a2_holds=false. Hard cap n <= 9.
PlacementResult enumerate_placements(const Network& net, const std::vector<double>& costs,
                                     const EconParams& params, double beta);
PlacementResult enumerate_placements_serial(const Network& net, const std::vector<double>& costs,
                                            const EconParams& params, double beta);

/// Default sweep upper bound: min cost over the spectral radius of G, less a
/// 1% safety margin (the boundary of the effort-game contraction condition).
/// Returns +infinity for an empty network.
double default_beta_cap(const Network& net, const Vector& cost);

}  // namespace netcontract
