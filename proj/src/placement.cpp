#include "netcontract/placement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "netcontract/contracts.hpp"
#include "netcontract/errors.hpp"
#include "netcontract/threads.hpp"

namespace netcontract {
namespace {

constexpr double kProfitClassTol = 1e-10;

/// Runs fn(0..count-1), optionally across OpenMP threads. Exceptions are
/// captured per index and the lowest-index one is rethrown after the join, so
/// the parallel and serial paths fail identically.
template <typename Fn>
void run_indexed(std::int64_t count, bool parallel, Fn&& fn) {
    if (count <= 0) return;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(count));
    const int threads = parallel ? effective_threads() : 1;
    (void)threads;
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
        for (std::int64_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                failures[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        for (std::int64_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                failures[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
}

/// Shared row evaluation: full solution when both gates hold, stationary
/// values when only the concavity condition fails, bare margins otherwise.
/// Errors on the degraded path become a missing value, not a failure; errors
/// on the fully feasible path are real and propagate.
void evaluate_point(const ModelInstance& inst, const AssumptionReport& report, bool* feasible,
                    Vector* v, Vector* a, double* profit) {
    *feasible = report.a1_holds && report.a2_holds;
    *profit = std::numeric_limits<double>::quiet_NaN();
    if (!report.a1_holds) return;
    if (*feasible) {
        ContractSolution sol = solve(inst);
        *v = sol.contract.v;
        *a = sol.efforts.a;
        *profit = sol.profit;
        return;
    }
    try {
        ContractSolution sol = solve(inst, /*unsafe=*/true);
        *v = sol.contract.v;
        *a = sol.efforts.a;
        *profit = sol.profit;
    } catch (const Error&) {
        v->resize(0);
        a->resize(0);
    }
}

BetaSweep beta_sweep_impl(const ModelInstance& inst, const std::vector<double>& betas,
                          bool parallel) {
    if (betas.empty()) throw ValidationError("sweep: beta grid is empty");
    for (std::size_t k = 0; k < betas.size(); ++k) {
        if (!std::isfinite(betas[k]) || betas[k] < 0.0) {
            throw ValidationError("sweep: beta grid entries must be finite and nonnegative");
        }
        if (k > 0 && betas[k] <= betas[k - 1]) {
            throw ValidationError("sweep: beta grid must be strictly increasing");
        }
    }
    BetaSweep sweep;
    sweep.grid = betas;
    sweep.rows.resize(betas.size());
    run_indexed(static_cast<std::int64_t>(betas.size()), parallel, [&](std::int64_t k) {
        const auto idx = static_cast<std::size_t>(k);
        SweepRow& row = sweep.rows[idx];
        row.beta = betas[idx];
        const ModelInstance point = with_beta(inst, betas[idx]);
        row.margins = check_assumptions(point);
        evaluate_point(point, row.margins, &row.feasible, &row.v, &row.a, &row.profit);
    });
    return sweep;
}

PlacementResult enumerate_impl(const Network& net, const std::vector<double>& costs,
                               const EconParams& params, double beta, bool parallel) {
    const int n = net.size();
    if (static_cast<int>(costs.size()) != n) {
        throw ValidationError("placement: got " + std::to_string(costs.size()) +
                              " costs for " + std::to_string(n) + " network positions");
    }
    if (n > 9) {
        throw ValidationError(
            "placement: enumeration is capped at 9 agents; run the sweep on named "
            "assignments instead");
    }
    if (!std::isfinite(beta) || beta < 0.0) {
        throw ValidationError("placement: beta must be finite and nonnegative");
    }
    for (double c : costs) {
        if (!std::isfinite(c) || c <= 0.0) {
            throw ValidationError("placement: every cost must be finite and positive");
        }
    }

    std::vector<double> perm = costs;
    std::sort(perm.begin(), perm.end());
    std::vector<std::vector<double>> orderings;
    do {
        orderings.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    ModelInstance base;
    base.network = net;
    base.params = params;
    base.params.beta = beta;
    if (base.params.reservation.size() != n) base.params.reservation = Vector::Zero(n);
    base.labels.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) base.labels[static_cast<std::size_t>(i)] = std::to_string(i + 1);

    PlacementResult result;
    result.assignments.resize(orderings.size());
    run_indexed(static_cast<std::int64_t>(orderings.size()), parallel, [&](std::int64_t k) {
        const auto idx = static_cast<std::size_t>(k);
        PlacementRow& row = result.assignments[idx];
        row.costs = Eigen::Map<const Vector>(orderings[idx].data(), n);
        const ModelInstance inst = with_cost_profile(base, row.costs);
        const AssumptionReport report = check_assumptions(inst);
        row.a1_holds = report.a1_holds;
        row.a2_holds = report.a2_holds;
        row.rho1 = report.rho1;
        row.rho2 = report.rho2;
        Vector v, a;
        evaluate_point(inst, report, &row.feasible, &v, &a, &row.profit);
    });

    result.best = -1;
    for (std::size_t idx = 0; idx < result.assignments.size(); ++idx) {
        const double p = result.assignments[idx].profit;
        if (!std::isfinite(p)) continue;
        if (result.best < 0 || p > result.assignments[static_cast<std::size_t>(result.best)].profit) {
            result.best = static_cast<int>(idx);
        }
    }

    std::vector<double> profits;
    for (const PlacementRow& row : result.assignments) {
        if (std::isfinite(row.profit)) profits.push_back(row.profit);
    }
    std::sort(profits.begin(), profits.end());
    result.profit_classes = 0;
    for (std::size_t idx = 0; idx < profits.size(); ++idx) {
        const double tol = kProfitClassTol * std::max(1.0, std::abs(profits[idx]));
        if (idx == 0 || profits[idx] - profits[idx - 1] > tol) ++result.profit_classes;
    }
    return result;
}

}  // namespace

BetaSweep beta_sweep(const ModelInstance& inst, const std::vector<double>& betas) {
    return beta_sweep_impl(inst, betas, /*parallel=*/true);
}

BetaSweep beta_sweep_serial(const ModelInstance& inst, const std::vector<double>& betas) {
    return beta_sweep_impl(inst, betas, /*parallel=*/false);
}

PlacementResult enumerate_placements(const Network& net, const std::vector<double>& costs,
                                     const EconParams& params, double beta) {
    return enumerate_impl(net, costs, params, beta, /*parallel=*/true);
}

PlacementResult enumerate_placements_serial(const Network& net, const std::vector<double>& costs,
                                            const EconParams& params, double beta) {
    return enumerate_impl(net, costs, params, beta, /*parallel=*/false);
}

double default_beta_cap(const Network& net, const Vector& cost) {
    if (net.size() == 0 || cost.size() == 0) {
        throw ValidationError("beta cap: empty network or cost vector");
    }
    const double rho = spectral_radius(net.g);
    const double cmin = cost.minCoeff();
    if (rho <= 0.0) return std::numeric_limits<double>::infinity();
    return 0.99 * cmin / rho;
}

}  // namespace netcontract
