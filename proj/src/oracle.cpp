#include "netcontract/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netcontract/contracts.hpp"
#include "netcontract/errors.hpp"
#include "netcontract/threads.hpp"

namespace netcontract {
namespace {

constexpr int kIterationCap = 100000;
// The profit objective is exactly quadratic in the pay slope, so central
// differences are exact at any step; a wide step keeps rounding error small.
constexpr double kProbeStep = 0.5;
constexpr double kArmijo = 1e-4;
constexpr double kMinBacktrack = 1e-14;

void require_a1(const ModelInstance& inst, const char* who) {
    const AssumptionReport report = check_assumptions(inst);
    if (!report.a1_holds) {
        throw AssumptionError(std::string(who) +
                                  ": effort game has no stable equilibrium (rho1 = " +
                                  std::to_string(report.rho1) + " >= 1)",
                              report.rho1);
    }
}

double objective(const ModelInstance& inst, const Vector& v) {
    return principal_profit(inst, v, /*require_interior=*/false);
}

Vector numeric_gradient(const ModelInstance& inst, const Vector& v) {
    const int n = inst.size();
    Vector g(n);
    Vector probe = v;
    for (int i = 0; i < n; ++i) {
        probe(i) = v(i) + kProbeStep;
        const double up = objective(inst, probe);
        probe(i) = v(i) - kProbeStep;
        const double down = objective(inst, probe);
        probe(i) = v(i);
        g(i) = (up - down) / (2.0 * kProbeStep);
    }
    return g;
}

Matrix numeric_hessian(const ModelInstance& inst, const Vector& v) {
    const int n = inst.size();
    Matrix h(n, n);
    Vector probe = v;
    for (int j = 0; j < n; ++j) {
        probe(j) = v(j) + kProbeStep;
        const Vector gp = numeric_gradient(inst, probe);
        probe(j) = v(j) - kProbeStep;
        const Vector gm = numeric_gradient(inst, probe);
        probe(j) = v(j);
        h.col(j) = (gp - gm) / (2.0 * kProbeStep);
    }
    return 0.5 * (h + h.transpose());
}

double scaled_gradient_norm(const Vector& g, double profit) {
    return g.lpNorm<Eigen::Infinity>() / std::max(1.0, std::abs(profit));
}

/// One Newton step from the numeric Hessian. Exact on a quadratic objective,
/// so a single accepted step lands on the stationary point.
Vector newton_step(const ModelInstance& inst, const Vector& v, const Vector& g) {
    const Matrix h = numeric_hessian(inst, v);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    if (eig.info() != Eigen::Success) {
        throw NumericError("oracle: Hessian eigendecomposition failed");
    }
    const double top = eig.eigenvalues().maxCoeff();
    const double bottom = eig.eigenvalues().minCoeff();
    const double span = std::max(std::abs(top), std::abs(bottom));
    if (top > 1e-7 * std::max(1.0, span)) {
        throw NumericError(
            "oracle: profit objective is not concave (largest Hessian eigenvalue " +
            std::to_string(top) + " > 0); ascent would diverge");
    }
    Eigen::PartialPivLU<Matrix> lu(h);
    const Vector step = lu.solve(-g);
    if (!step.allFinite()) {
        throw NumericError("oracle: singular Hessian in Newton polish");
    }
    return v + step;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::int64_t block) {
    return splitmix64(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(block + 1));
}

/// Deterministic normal generator: the bit-exactly specified 64-bit Mersenne
/// Twister feeding an explicit Box-Muller transform (std::normal_distribution
/// is implementation-defined, so it cannot back a frozen draw sequence).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(eng_() >> 11) + 0.5) * kInv53;
        const double u2 = (static_cast<double>(eng_() >> 11) + 0.5) * kInv53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * kPi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    static constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
    static constexpr double kPi = 3.14159265358979323846;

    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct BlockPartial {
    Vector sum_u;
    Vector sumsq_u;
    double sum_p = 0.0;
    double sumsq_p = 0.0;

    void combine(const BlockPartial& other) {
        sum_u += other.sum_u;
        sumsq_u += other.sumsq_u;
        sum_p += other.sum_p;
        sumsq_p += other.sumsq_p;
    }
};

constexpr std::int64_t kBlockSize = 65536;

BlockPartial simulate_block(const ModelInstance& inst, const Vector& shifted_pay,
                            const Vector& slope, double sigma, double eta,
                            const Vector& one_minus_v_base, std::int64_t count,
                            std::uint64_t seed) {
    const int n = inst.size();
    BlockPartial part;
    part.sum_u = Vector::Zero(n);
    part.sumsq_u = Vector::Zero(n);
    NormalStream rng(seed);
    for (std::int64_t d = 0; d < count; ++d) {
        double profit = 0.0;
        for (int i = 0; i < n; ++i) {
            const double eps = sigma * rng.next();
            // Realized wage z + v(a + eps); the deterministic pieces of the
            // utility exponent are folded into shifted_pay.
            const double expo = -eta * (shifted_pay(i) + slope(i) * eps);
            const double u = expo > 700.0 ? -std::numeric_limits<double>::infinity()
                                          : -std::exp(expo);
            part.sum_u(i) += u;
            part.sumsq_u(i) += u * u;
            profit += one_minus_v_base(i) + (1.0 - slope(i)) * eps;
        }
        part.sum_p += profit;
        part.sumsq_p += profit * profit;
    }
    return part;
}

SimulationSummary simulate_impl(const ModelInstance& inst, const Contract& contract,
                                const EffortProfile& efforts, std::int64_t draws,
                                std::uint64_t seed, bool parallel) {
    const int n = inst.size();
    if (draws < 1) throw ValidationError("simulate: draws must be at least 1");
    if (contract.z.size() != n || contract.v.size() != n || efforts.a.size() != n) {
        throw ValidationError("simulate: contract or effort dimensions do not match the model");
    }

    // Deterministic exponent pieces: wage mean z + v a, effort cost, and peer
    // complementarity, all fixed across draws.
    Vector shifted_pay(n);
    Vector one_minus_v_base(n);
    for (int i = 0; i < n; ++i) {
        const double peer = inst.network.g.row(i).dot(efforts.a);
        shifted_pay(i) = contract.z(i) + contract.v(i) * efforts.a(i) -
                         0.5 * inst.params.cost(i) * efforts.a(i) * efforts.a(i) +
                         inst.params.beta * efforts.a(i) * peer;
        one_minus_v_base(i) =
            efforts.a(i) - contract.z(i) - contract.v(i) * efforts.a(i);
    }
    const double sigma = std::sqrt(inst.params.sigma2);
    const double eta = inst.params.eta;

    const std::int64_t nblocks = (draws + kBlockSize - 1) / kBlockSize;
    std::vector<BlockPartial> partials(static_cast<std::size_t>(nblocks));
    const auto run_block = [&](std::int64_t b) {
        const std::int64_t count = std::min(kBlockSize, draws - b * kBlockSize);
        partials[static_cast<std::size_t>(b)] =
            simulate_block(inst, shifted_pay, contract.v, sigma, eta, one_minus_v_base,
                           count, block_seed(seed, b));
    };

    const int threads = parallel ? effective_threads() : 1;
    (void)threads;
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
        for (std::int64_t b = 0; b < nblocks; ++b) run_block(b);
    } else {
        for (std::int64_t b = 0; b < nblocks; ++b) run_block(b);
    }

    // Pairwise tree reduction in block order: identical result no matter how
    // many threads produced the partials.
    std::vector<BlockPartial> level = std::move(partials);
    while (level.size() > 1) {
        std::vector<BlockPartial> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
            level[i].combine(level[i + 1]);
            next.push_back(std::move(level[i]));
        }
        if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
        level = std::move(next);
    }
    const BlockPartial& total = level.front();

    SimulationSummary summary;
    summary.draws = draws;
    summary.seed = seed;
    summary.mean_utility = total.sum_u / static_cast<double>(draws);
    summary.std_err = Vector::Zero(n);
    const double nd = static_cast<double>(draws);
    if (draws > 1) {
        for (int i = 0; i < n; ++i) {
            const double var =
                std::max(0.0, (total.sumsq_u(i) - total.sum_u(i) * total.sum_u(i) / nd) /
                                  (nd - 1.0));
            summary.std_err(i) = std::sqrt(var / nd);
        }
    }
    summary.mean_profit = total.sum_p / nd;
    if (draws > 1) {
        const double var =
            std::max(0.0, (total.sumsq_p - total.sum_p * total.sum_p / nd) / (nd - 1.0));
        summary.profit_std_err = std::sqrt(var / nd);
    }
    return summary;
}

}  // namespace

OracleResult maximize_profit_numeric(const ModelInstance& inst, const Vector& v0) {
    const int n = inst.size();
    if (v0.size() != n) {
        throw ValidationError("oracle: starting point has " + std::to_string(v0.size()) +
                              " entries for " + std::to_string(n) + " agents");
    }
    require_a1(inst, "oracle");

    Vector v = v0;
    double profit = objective(inst, v);
    if (!std::isfinite(profit)) {
        throw NumericError("oracle: profit is not finite at the starting point");
    }
    int iterations = 0;
    Vector g = numeric_gradient(inst, v);

    // Phase 1: gradient ascent with backtracking until the gradient is small
    // enough for the polish to be a tight local problem.
    while (scaled_gradient_norm(g, profit) > 1e-3 && iterations < kIterationCap) {
        const double gg = g.squaredNorm();
        double t = 1.0;
        bool accepted = false;
        while (t >= kMinBacktrack) {
            const Vector trial = v + t * g;
            const double trial_profit = objective(inst, trial);
            if (std::isfinite(trial_profit) && trial_profit >= profit + kArmijo * t * gg) {
                v = trial;
                profit = trial_profit;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        ++iterations;
        if (!accepted) break;  // stalled; hand over to the polish
        if (std::abs(profit) > 1e15) {
            throw NumericError(
                "oracle: profit ascent diverged; the objective appears unbounded above");
        }
        g = numeric_gradient(inst, v);
    }
    if (iterations >= kIterationCap) {
        throw NumericError("oracle: ascent hit the iteration cap without approaching "
                           "stationarity");
    }

    // Phase 2: Newton polish. One step is exact for a quadratic objective; a
    // second covers rounding in the first.
    for (int polish = 0; polish < 2; ++polish) {
        v = newton_step(inst, v, g);
        profit = objective(inst, v);
        g = numeric_gradient(inst, v);
        ++iterations;
        if (scaled_gradient_norm(g, profit) <= 1e-9) break;
    }

    OracleResult result;
    result.v_opt = v;
    result.profit_opt = profit;
    result.iterations = iterations;
    result.convergence = scaled_gradient_norm(g, profit);
    if (result.convergence > 1e-7) {
        throw NumericError("oracle: gradient norm " + std::to_string(result.convergence) +
                           " at the final iterate exceeds the 1e-7 stationarity bound");
    }
    return result;
}

namespace {

// Measures the asymptotic per-step sup-norm decay of the best-response map
// around a converged profile. A small perturbation is pushed through the map
// repeatedly, differenced against the map's own image of the fixed point, and
// renormalized each step so neither underflow nor the convergence tolerance
// limits the usable window; the reported rate is the geometric mean of the
// step-size ratios after a warmup that lets transients from subdominant
// directions die out. Walk-limited (acyclic) interaction annihilates the
// perturbation exactly, which reports as 0.
double measure_contraction(const ModelInstance& inst, const Vector& v,
                           const EffortProfile& fixed) {
    const int n = inst.size();
    EffortProfile image{Vector(n)};
    for (int i = 0; i < n; ++i) image.a(i) = best_response(inst, i, v(i), fixed);

    const double scale = 1e-7 * std::max(1.0, fixed.a.lpNorm<Eigen::Infinity>());
    Vector d = Vector::Constant(n, scale);
    constexpr int kWarmup = 300;
    constexpr int kWindow = 300;
    double log_sum = 0.0;
    int counted = 0;
    EffortProfile probe{Vector(n)};
    EffortProfile next{Vector(n)};
    for (int k = 0; k < kWarmup + kWindow; ++k) {
        probe.a = fixed.a + d;
        for (int i = 0; i < n; ++i) next.a(i) = best_response(inst, i, v(i), probe);
        const Vector nd = next.a - image.a;
        const double norm = nd.lpNorm<Eigen::Infinity>();
        if (norm == 0.0) return 0.0;
        if (k >= kWarmup) {
            log_sum += std::log(norm / scale);
            ++counted;
        }
        d = nd * (scale / norm);
    }
    return std::exp(log_sum / counted);
}

FixedPointTrace iterate_trace_impl(const ModelInstance& inst, const Vector& v, double tol,
                                   bool want_ratio) {
    const int n = inst.size();
    if (v.size() != n) {
        throw ValidationError("best response: pay slope has " + std::to_string(v.size()) +
                              " entries for " + std::to_string(n) + " agents");
    }
    if (!(tol > 0.0)) throw ValidationError("best response: tolerance must be positive");
    require_a1(inst, "best response");

    EffortProfile cur{Vector::Zero(n)};
    int iterations = 0;
    bool converged = false;
    while (iterations < kIterationCap) {
        EffortProfile next{Vector(n)};
        for (int i = 0; i < n; ++i) next.a(i) = best_response(inst, i, v(i), cur);
        const double delta = (next.a - cur.a).lpNorm<Eigen::Infinity>();
        ++iterations;
        cur = std::move(next);
        if (delta < tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NumericError("best response: no convergence within the 10^5 iteration cap");
    }

    FixedPointTrace trace;
    trace.efforts = cur;
    trace.iterations = iterations;
    trace.contraction_ratio = want_ratio ? measure_contraction(inst, v, trace.efforts) : 0.0;
    return trace;
}

}  // namespace

EffortProfile iterate_best_response(const ModelInstance& inst, const Vector& v, double tol) {
    return iterate_trace_impl(inst, v, tol, /*want_ratio=*/false).efforts;
}

FixedPointTrace iterate_best_response_trace(const ModelInstance& inst, const Vector& v,
                                            double tol) {
    return iterate_trace_impl(inst, v, tol, /*want_ratio=*/true);
}

SimulationSummary simulate_outputs(const ModelInstance& inst, const Contract& contract,
                                   const EffortProfile& efforts, long long draws,
                                   std::uint64_t seed) {
    return simulate_impl(inst, contract, efforts, draws, seed, /*parallel=*/true);
}

SimulationSummary simulate_outputs_serial(const ModelInstance& inst, const Contract& contract,
                                          const EffortProfile& efforts, long long draws,
                                          std::uint64_t seed) {
    return simulate_impl(inst, contract, efforts, draws, seed, /*parallel=*/false);
}

}  // namespace netcontract
