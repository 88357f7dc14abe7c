// Benchmarks the OpenMP kernels against their serial reference twins and
// verifies that both produce the same numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "netcontract/contracts.hpp"
#include "netcontract/model.hpp"
#include "netcontract/oracle.hpp"
#include "netcontract/placement.hpp"
#include "netcontract/threads.hpp"

using namespace netcontract;

namespace {

ModelInstance ring(int n, double beta) {
    ModelInstance inst;
    inst.network.g = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        inst.network.g(i, (i + 1) % n) = 1.0;
        inst.network.g((i + 1) % n, i) = 1.0;
    }
    inst.params.beta = beta;
    inst.params.cost = Vector::Constant(n, 1.0);
    inst.params.eta = 1.0;
    inst.params.sigma2 = 1.0;
    inst.params.reservation = Vector::Zero(n);
    for (int i = 0; i < n; ++i) inst.labels.push_back(std::to_string(i + 1));
    return inst;
}

template <typename Fn>
double time_ms(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const char* name, double serial_ms, double parallel_ms, double max_diff) {
    std::printf("%-24s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   max diff %.3g\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", effective_threads());
    bool ok = true;

    {
        const ModelInstance inst = ring(8, 0.12);
        const ContractSolution sol = solve(inst);
        constexpr long long kDraws = 4000000;
        SimulationSummary serial, parallel;
        const double ts = time_ms(
            [&] { serial = simulate_outputs_serial(inst, sol.contract, sol.efforts, kDraws, 0); });
        const double tp = time_ms(
            [&] { parallel = simulate_outputs(inst, sol.contract, sol.efforts, kDraws, 0); });
        double diff = std::abs(serial.mean_profit - parallel.mean_profit);
        diff = std::max(diff,
                        (serial.mean_utility - parallel.mean_utility)
                            .lpNorm<Eigen::Infinity>());
        report("simulate_outputs", ts, tp, diff);
        ok = ok && diff == 0.0;  // identical blocks, identical reduction tree
    }

    {
        const ModelInstance inst = ring(8, 0.12);
        std::vector<double> grid;
        for (int k = 0; k < 400; ++k) grid.push_back(0.45 * k / 399.0);
        BetaSweep serial, parallel;
        const double ts = time_ms([&] { serial = beta_sweep_serial(inst, grid); });
        const double tp = time_ms([&] { parallel = beta_sweep(inst, grid); });
        double diff = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double a = serial.rows[k].profit;
            const double b = parallel.rows[k].profit;
            if (std::isfinite(a) != std::isfinite(b)) diff = 1.0;
            else if (std::isfinite(a)) diff = std::max(diff, std::abs(a - b));
        }
        report("beta_sweep", ts, tp, diff);
        ok = ok && diff == 0.0;
    }

    {
        const ModelInstance inst = ring(7, 0.12);
        const std::vector<double> costs{0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2};
        PlacementResult serial, parallel;
        const double ts = time_ms([&] {
            serial = enumerate_placements_serial(inst.network, costs, inst.params, 0.12);
        });
        const double tp = time_ms(
            [&] { parallel = enumerate_placements(inst.network, costs, inst.params, 0.12); });
        double diff = 0.0;
        for (std::size_t k = 0; k < serial.assignments.size(); ++k) {
            diff = std::max(diff, std::abs(serial.assignments[k].profit -
                                           parallel.assignments[k].profit));
        }
        if (serial.best != parallel.best) diff = 1.0;
        report("enumerate_placements", ts, tp, diff);
        ok = ok && diff == 0.0;
    }

    std::printf(ok ? "agreement: PASS\n" : "agreement: FAIL\n");
    return ok ? 0 : 1;
}
