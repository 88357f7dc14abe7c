#include "netcontract/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "netcontract/contracts.hpp"
#include "netcontract/equilibrium.hpp"
#include "netcontract/errors.hpp"
#include "netcontract/jsonio.hpp"
#include "netcontract/model.hpp"
#include "netcontract/oracle.hpp"
#include "netcontract/placement.hpp"
#include "netcontract/statics.hpp"

namespace netcontract {
namespace {

using jsonio::Writer;

std::string error_json(int code, const std::string& kind, const std::string& message) {
    Writer w;
    w.begin_object();
    w.key("error");
    w.begin_object();
    w.key("code");
    w.value(code);
    w.key("kind");
    w.value(kind);
    w.key("message");
    w.value(message);
    w.end_object();
    w.end_object();
    return w.str() + "\n";
}

std::string kind_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation: return "validation";
        case ErrorCode::Assumption: return "assumption";
        case ErrorCode::Numeric: return "numeric";
        case ErrorCode::Inconsistency: return "inconsistency";
    }
    return "numeric";
}

ModelInstance load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(what + ": not a number: '" + text + "'");
    }
}

long long parse_int(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(what + ": not an integer: '" + text + "'");
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += "\"";
    return quoted;
}

void write_vector(Writer& w, const Vector& v) {
    w.begin_array();
    for (int i = 0; i < v.size(); ++i) w.value(v(i));
    w.end_array();
}

void write_labels(Writer& w, const std::vector<std::string>& labels) {
    w.begin_array();
    for (const auto& label : labels) w.value(label);
    w.end_array();
}

void write_assumptions(Writer& w, const AssumptionReport& rep) {
    w.begin_object();
    w.key("rho1");
    w.value(rep.rho1);
    w.key("rho2");
    w.value(rep.rho2);
    w.key("a1_holds");
    w.value(rep.a1_holds);
    w.key("a2_holds");
    w.value(rep.a2_holds);
    w.key("margin1");
    w.value(rep.margin1);
    w.key("margin2");
    w.value(rep.margin2);
    w.key("generalized");
    w.value(rep.generalized);
    w.end_object();
}

const char* sign_name(SignClass s) {
    switch (s) {
        case SignClass::zero: return "zero";
        case SignClass::weak_increase: return "weak_increase";
        case SignClass::strict_increase: return "strict_increase";
        case SignClass::strict_decrease: return "strict_decrease";
    }
    return "zero";
}

std::vector<double> linspace(double from, double to, int steps) {
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        grid[static_cast<std::size_t>(k)] =
            from + (to - from) * static_cast<double>(k) / static_cast<double>(steps - 1);
    }
    grid.back() = to;
    return grid;
}

// ---------------------------------------------------------------------------
// check

void cmd_check(const std::string& path, CommandResult& res) {
    const ModelInstance inst = load_model(path);
    const AssumptionReport rep = check_assumptions(inst);
    const int n = inst.size();

    Writer w;
    w.begin_object();
    w.key("command");
    w.value("check");
    w.key("agents");
    write_labels(w, inst.labels);
    w.key("assumptions");
    write_assumptions(w, rep);
    w.key("weak_components");
    w.begin_array();
    for (const auto& comp : weak_components(inst.network)) {
        w.begin_array();
        for (int idx : comp) w.value(inst.labels[static_cast<std::size_t>(idx)]);
        w.end_array();
    }
    w.end_array();
    w.key("degrees");
    w.begin_array();
    for (int i = 0; i < n; ++i) {
        int out_links = 0;
        int in_links = 0;
        double out_weight = 0.0;
        double in_weight = 0.0;
        for (int j = 0; j < n; ++j) {
            if (inst.network.g(i, j) > 0.0) {
                ++out_links;
                out_weight += inst.network.g(i, j);
            }
            if (inst.network.g(j, i) > 0.0) {
                ++in_links;
                in_weight += inst.network.g(j, i);
            }
        }
        w.begin_object();
        w.key("agent");
        w.value(inst.labels[static_cast<std::size_t>(i)]);
        w.key("in_links");
        w.value(in_links);
        w.key("out_links");
        w.value(out_links);
        w.key("in_weight");
        w.value(in_weight);
        w.key("out_weight");
        w.value(out_weight);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    res.out = w.str() + "\n";
}

// ---------------------------------------------------------------------------
// solve

void cmd_solve(const std::string& path, const std::string& format, bool unsafe,
               CommandResult& res) {
    const ModelInstance inst = load_model(path);
    const ContractSolution sol = solve(inst, unsafe);
    const int n = inst.size();

    if (format == "csv") {
        std::string out = "agent,v,z,a,ce\n";
        for (int i = 0; i < n; ++i) {
            out += csv_field(inst.labels[static_cast<std::size_t>(i)]);
            out += "," + jsonio::num12(sol.contract.v(i));
            out += "," + jsonio::num12(sol.contract.z(i));
            out += "," + jsonio::num12(sol.efforts.a(i));
            out += "," + jsonio::num12(sol.ce(i));
            out += "\n";
        }
        Writer footer;
        footer.begin_object();
        footer.key("command");
        footer.value("solve");
        footer.key("profit");
        footer.value(sol.profit);
        footer.end_object();
        out += "# " + footer.str() + "\n";
        res.out = out;
        return;
    }

    Writer w;
    w.begin_object();
    w.key("command");
    w.value("solve");
    w.key("unsafe");
    w.value(unsafe);
    w.key("agents");
    write_labels(w, inst.labels);
    w.key("assumptions");
    write_assumptions(w, sol.diagnostics);
    w.key("v");
    write_vector(w, sol.contract.v);
    w.key("z");
    write_vector(w, sol.contract.z);
    w.key("a");
    write_vector(w, sol.efforts.a);
    w.key("ce");
    write_vector(w, sol.ce);
    w.key("profit");
    w.value(sol.profit);
    w.end_object();
    res.out = w.str() + "\n";
}

// ---------------------------------------------------------------------------
// diff

void write_derivative_report(Writer& w, const DerivativeReport& rep) {
    w.begin_object();
    w.key("target");
    w.value(rep.target == Target::v ? "v" : "a");
    w.key("fd_only");
    w.value(rep.fd_only);
    w.key("analytic");
    if (rep.fd_only) {
        w.null();
    } else {
        write_vector(w, rep.analytic);
    }
    w.key("fd");
    write_vector(w, rep.fd);
    w.key("max_rel_err");
    w.value(rep.max_rel_err);
    w.key("sign_class");
    w.begin_array();
    for (SignClass s : rep.sign_class) w.value(sign_name(s));
    w.end_array();
    w.end_object();
}

void cmd_diff(const std::string& path, const std::string& param, CommandResult& res) {
    const ModelInstance inst = load_model(path);

    DerivativeReport rv;
    DerivativeReport ra;
    if (param.rfind("g:", 0) == 0) {
        const std::size_t second = param.find(':', 2);
        if (second == std::string::npos) {
            throw ValidationError("--param g takes the form g:i:j with 1-based agent indices");
        }
        const long long i = parse_int(param.substr(2, second - 2), "--param g source index");
        const long long j = parse_int(param.substr(second + 1), "--param g destination index");
        if (i < 1 || i > inst.size() || j < 1 || j > inst.size()) {
            throw ValidationError("--param g indices must lie in 1.." +
                                  std::to_string(inst.size()));
        }
        rv = dv_dg(inst, static_cast<int>(i - 1), static_cast<int>(j - 1));
        ra = da_dg(inst, static_cast<int>(i - 1), static_cast<int>(j - 1));
    } else if (param == "beta") {
        rv = dv_dbeta(inst);
        ra = da_dbeta(inst);
    } else if (param == "cost" || param == "eta" || param == "sigma2") {
        const Parameter which = param == "cost"  ? Parameter::cost
                                : param == "eta" ? Parameter::eta
                                                 : Parameter::sigma2;
        rv = dv_dparam(inst, which);
        ra = da_dparam(inst, which);
    } else {
        throw ValidationError("--param must be one of g:i:j, beta, cost, eta, sigma2; got '" +
                              param + "'");
    }

    Writer w;
    w.begin_object();
    w.key("command");
    w.value("diff");
    w.key("param");
    w.value(param);
    w.key("agents");
    write_labels(w, inst.labels);
    w.key("reports");
    w.begin_array();
    write_derivative_report(w, rv);
    write_derivative_report(w, ra);
    w.end_array();
    w.end_object();
    res.out = w.str() + "\n";
}

// ---------------------------------------------------------------------------
// sweep

void cmd_sweep(const std::string& path, double from, double to, bool to_given, int steps,
               CommandResult& res) {
    const ModelInstance inst = load_model(path);
    double upper = to;
    if (!to_given) {
        upper = default_beta_cap(inst.network, inst.params.cost);
        if (!std::isfinite(upper)) upper = 1.0;
    }
    if (!std::isfinite(from) || from < 0.0) {
        throw ValidationError("--beta-from must be finite and nonnegative");
    }
    if (!std::isfinite(upper) || upper <= from) {
        throw ValidationError("--beta-to must be finite and greater than --beta-from");
    }
    if (steps < 2) throw ValidationError("--steps must be at least 2");

    const BetaSweep sweep = beta_sweep(inst, linspace(from, upper, steps));
    const int n = inst.size();

    std::string out = "beta,agent,v,a,profit,feasible\n";
    for (const SweepRow& row : sweep.rows) {
        const bool has_values = row.v.size() == n;
        for (int i = 0; i < n; ++i) {
            out += jsonio::num12(row.beta);
            out += "," + csv_field(inst.labels[static_cast<std::size_t>(i)]);
            out += ",";
            out += has_values ? jsonio::num12(row.v(i)) : "nan";
            out += ",";
            out += has_values ? jsonio::num12(row.a(i)) : "nan";
            out += ",";
            out += std::isfinite(row.profit) ? jsonio::num12(row.profit) : "nan";
            out += ",";
            out += row.feasible ? "1" : "0";
            out += "\n";
        }
    }

    // Pay-slope crossings: sign changes of v_i - v_j between consecutive grid
    // points where both curves exist, located by linear interpolation.
    Writer footer;
    footer.begin_object();
    footer.key("command");
    footer.value("sweep");
    footer.key("beta_from");
    footer.value(from);
    footer.key("beta_to");
    footer.value(upper);
    footer.key("steps");
    footer.value(steps);
    footer.key("crossings");
    footer.begin_array();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (std::size_t k = 0; k + 1 < sweep.rows.size(); ++k) {
                const SweepRow& r0 = sweep.rows[k];
                const SweepRow& r1 = sweep.rows[k + 1];
                if (r0.v.size() != n || r1.v.size() != n) continue;
                const double d0 = r0.v(i) - r0.v(j);
                const double d1 = r1.v(i) - r1.v(j);
                // Ignore sign flips inside rounding noise (ties between
                // symmetric agents would otherwise register as crossings).
                const double noise =
                    1e-9 * std::max(1.0, std::abs(r0.v(i)) + std::abs(r0.v(j)));
                if (std::abs(d0) <= noise || std::abs(d1) <= noise) continue;
                if ((d0 > 0.0) == (d1 > 0.0)) continue;
                const double beta_star = r0.beta + (r1.beta - r0.beta) * d0 / (d0 - d1);
                footer.begin_object();
                footer.key("agents");
                footer.begin_array();
                footer.value(inst.labels[static_cast<std::size_t>(i)]);
                footer.value(inst.labels[static_cast<std::size_t>(j)]);
                footer.end_array();
                footer.key("beta");
                footer.value(beta_star);
                footer.end_object();
            }
        }
    }
    footer.end_array();
    footer.end_object();
    out += "# " + footer.str() + "\n";
    res.out = out;
}

// ---------------------------------------------------------------------------
// place

std::string assignment_key(const Vector& costs) {
    std::string key;
    for (int i = 0; i < costs.size(); ++i) {
        if (i > 0) key += ";";
        key += jsonio::num12(costs(i));
    }
    return key;
}

void cmd_place(const std::string& path, const std::vector<double>& costs,
               const std::string& beta_spec, CommandResult& res) {
    const ModelInstance inst = load_model(path);

    if (beta_spec.find(':') != std::string::npos) {
        // Range form from:to:steps — per-assignment profit curves as CSV.
        const std::size_t c1 = beta_spec.find(':');
        const std::size_t c2 = beta_spec.find(':', c1 + 1);
        if (c2 == std::string::npos || beta_spec.find(':', c2 + 1) != std::string::npos) {
            throw ValidationError("--beta range takes the form from:to:steps");
        }
        const double from = parse_double(beta_spec.substr(0, c1), "--beta range start");
        const double to = parse_double(beta_spec.substr(c1 + 1, c2 - c1 - 1), "--beta range end");
        const long long steps = parse_int(beta_spec.substr(c2 + 1), "--beta range steps");
        if (!std::isfinite(from) || from < 0.0 || !std::isfinite(to) || to <= from) {
            throw ValidationError("--beta range must satisfy 0 <= from < to");
        }
        if (steps < 2 || steps > 100000) {
            throw ValidationError("--beta range steps must lie in 2..100000");
        }

        std::string out = "beta,assignment,profit,feasible\n";
        for (double beta : linspace(from, to, static_cast<int>(steps))) {
            const PlacementResult pr =
                enumerate_placements(inst.network, costs, inst.params, beta);
            for (const PlacementRow& row : pr.assignments) {
                out += jsonio::num12(beta);
                out += "," + csv_field(assignment_key(row.costs));
                out += ",";
                out += std::isfinite(row.profit) ? jsonio::num12(row.profit) : "nan";
                out += ",";
                out += row.feasible ? "1" : "0";
                out += "\n";
            }
        }
        res.out = out;
        return;
    }

    const double beta = beta_spec.empty() ? inst.params.beta
                                          : parse_double(beta_spec, "--beta");
    const PlacementResult pr = enumerate_placements(inst.network, costs, inst.params, beta);

    // Ranking order: profit descending, unsolvable rows last; stable, so ties
    // keep the lexicographic assignment order.
    std::vector<std::size_t> order(pr.assignments.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double pa = pr.assignments[a].profit;
        const double pb = pr.assignments[b].profit;
        const bool fa = std::isfinite(pa);
        const bool fb = std::isfinite(pb);
        if (fa != fb) return fa;
        if (fa && fb && pa != pb) return pa > pb;
        return false;
    });

    Writer w;
    w.begin_object();
    w.key("command");
    w.value("place");
    w.key("beta");
    w.value(beta);
    w.key("assignments");
    w.begin_array();
    int rank = 0;
    for (std::size_t idx : order) {
        const PlacementRow& row = pr.assignments[idx];
        ++rank;
        w.begin_object();
        w.key("rank");
        w.value(rank);
        w.key("costs");
        write_vector(w, row.costs);
        w.key("profit");
        if (std::isfinite(row.profit)) {
            w.value(row.profit);
        } else {
            w.null();
        }
        w.key("rho1");
        w.value(row.rho1);
        w.key("rho2");
        w.value(row.rho2);
        w.key("a1_holds");
        w.value(row.a1_holds);
        w.key("a2_holds");
        w.value(row.a2_holds);
        w.key("feasible");
        w.value(row.feasible);
        w.end_object();
    }
    w.end_array();
    w.key("best");
    if (pr.best >= 0) {
        const PlacementRow& row = pr.assignments[static_cast<std::size_t>(pr.best)];
        w.begin_object();
        w.key("costs");
        write_vector(w, row.costs);
        w.key("profit");
        w.value(row.profit);
        w.end_object();
    } else {
        w.null();
    }
    w.key("profit_classes");
    w.value(pr.profit_classes);
    w.key("symmetry_note");
    w.value(std::to_string(pr.profit_classes) + " distinct profit value(s) across " +
            std::to_string(pr.assignments.size()) + " assignment(s)");
    w.end_object();
    res.out = w.str() + "\n";
}

// ---------------------------------------------------------------------------
// oracle

struct OracleCheck {
    std::string name;
    double closed_form = std::numeric_limits<double>::quiet_NaN();
    double oracle = std::numeric_limits<double>::quiet_NaN();
    double err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

void cmd_oracle(const std::string& path, long long draws, std::uint64_t seed,
                CommandResult& res) {
    if (draws < 2) throw ValidationError("--draws must be at least 2");
    const ModelInstance inst = load_model(path);
    const ContractSolution sol = solve(inst);
    const int n = inst.size();

    const OracleResult orc = maximize_profit_numeric(inst, Vector::Zero(n));
    const EffortProfile fixed_point = iterate_best_response(inst, sol.contract.v, 1e-10);
    const SimulationSummary sim = simulate_outputs(inst, sol.contract, sol.efforts, draws, seed);

    std::vector<OracleCheck> checks;

    {
        OracleCheck c;
        c.name = "optimal pay slope";
        c.err = (orc.v_opt - sol.contract.v).lpNorm<Eigen::Infinity>();
        c.tolerance = 1e-6;
        c.pass = c.err <= c.tolerance;
        checks.push_back(c);
    }
    {
        OracleCheck c;
        c.name = "optimal profit";
        c.closed_form = sol.profit;
        c.oracle = orc.profit_opt;
        c.err = std::abs(orc.profit_opt - sol.profit) / std::max(1.0, std::abs(sol.profit));
        c.tolerance = 1e-8;
        c.pass = c.err <= c.tolerance;
        checks.push_back(c);
    }
    {
        OracleCheck c;
        c.name = "equilibrium effort fixed point";
        c.err = (fixed_point.a - sol.efforts.a).lpNorm<Eigen::Infinity>();
        c.tolerance = 1e-9;
        c.pass = c.err <= c.tolerance;
        checks.push_back(c);
    }
    {
        // Sample means of realized utility vs -exp(-eta * CE), in units of
        // the per-agent standard error (floored to survive near-zero noise).
        OracleCheck c;
        c.name = "simulated mean utility";
        double worst = 0.0;
        bool pass = true;
        for (int i = 0; i < n; ++i) {
            const double expected = -std::exp(-inst.params.eta * sol.ce(i));
            const double dist = std::abs(sim.mean_utility(i) - expected);
            const double bound = std::max(3.0 * sim.std_err(i), 1e-9);
            pass = pass && dist <= bound;
            if (sim.std_err(i) > 0.0) worst = std::max(worst, dist / sim.std_err(i));
        }
        c.err = worst;
        c.tolerance = 3.0;
        c.pass = pass;
        checks.push_back(c);
    }
    {
        OracleCheck c;
        c.name = "simulated mean profit";
        c.closed_form = sol.profit;
        c.oracle = sim.mean_profit;
        const double dist = std::abs(sim.mean_profit - sol.profit);
        const double bound = std::max(3.0 * sim.profit_std_err, 1e-9);
        c.err = sim.profit_std_err > 0.0 ? dist / sim.profit_std_err : 0.0;
        c.tolerance = 3.0;
        c.pass = dist <= bound;
        checks.push_back(c);
    }

    bool all_pass = true;
    for (const OracleCheck& c : checks) all_pass = all_pass && c.pass;

    Writer w;
    w.begin_object();
    w.key("command");
    w.value("oracle");
    w.key("seed");
    w.value(static_cast<long long>(seed));
    w.key("draws");
    w.value(draws);
    w.key("iterations");
    w.value(orc.iterations);
    w.key("convergence");
    w.value(orc.convergence);
    w.key("checks");
    w.begin_array();
    for (const OracleCheck& c : checks) {
        w.begin_object();
        w.key("name");
        w.value(c.name);
        if (std::isfinite(c.closed_form)) {
            w.key("closed_form");
            w.value(c.closed_form);
            w.key("oracle");
            w.value(c.oracle);
        }
        w.key("err");
        w.value(c.err);
        w.key("tolerance");
        w.value(c.tolerance);
        w.key("pass");
        w.value(c.pass);
        w.end_object();
    }
    w.end_array();
    w.key("all_pass");
    w.value(all_pass);
    w.end_object();
    res.out = w.str() + "\n";

    if (!all_pass) {
        int failed = 0;
        std::string names;
        for (const OracleCheck& c : checks) {
            if (!c.pass) {
                ++failed;
                if (!names.empty()) names += ", ";
                names += c.name;
            }
        }
        throw ConsistencyError("oracle: " + std::to_string(failed) +
                               " check(s) beyond tolerance: " + names);
    }
}

}  // namespace

CommandResult run_cli(const std::vector<std::string>& args) {
    CommandResult result;

    CLI::App app{"Optimal linear contracts for agents on a peer-effect network"};
    app.require_subcommand(1);

    std::string check_model;
    auto* check_cmd = app.add_subcommand(
        "check", "Validate a model file and report solvability diagnostics");
    check_cmd->add_option("model", check_model, "model JSON file")->required();

    std::string solve_model;
    std::string solve_format = "json";
    bool solve_unsafe = false;
    auto* solve_cmd =
        app.add_subcommand("solve", "Compute the optimal contract and equilibrium");
    solve_cmd->add_option("model", solve_model, "model JSON file")->required();
    solve_cmd->add_option("--format", solve_format, "output format (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    solve_cmd->add_flag("--unsafe", solve_unsafe,
                        "evaluate the first-order stationary point even when the "
                        "solvability conditions fail");

    std::string diff_model;
    std::string diff_param;
    auto* diff_cmd = app.add_subcommand(
        "diff", "Analytic derivative of the optimum in one parameter, with a "
                "finite-difference cross-check");
    diff_cmd->add_option("model", diff_model, "model JSON file")->required();
    diff_cmd->add_option("--param", diff_param, "g:i:j | beta | cost | eta | sigma2")
        ->required();

    std::string sweep_model;
    double sweep_from = 0.0;
    double sweep_to = 0.0;
    int sweep_steps = 100;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Solve across a beta grid and emit plot-ready CSV");
    sweep_cmd->add_option("model", sweep_model, "model JSON file")->required();
    sweep_cmd->add_option("--beta-from", sweep_from, "grid start (default 0)");
    auto* sweep_to_opt =
        sweep_cmd->add_option("--beta-to", sweep_to,
                              "grid end (default: 1% below the effort-game stability bound)");
    sweep_cmd->add_option("--steps", sweep_steps, "grid size (default 100)");

    std::string place_model;
    std::vector<double> place_costs;
    std::string place_beta;
    auto* place_cmd = app.add_subcommand(
        "place", "Rank every assignment of a cost list to network positions");
    place_cmd->add_option("model", place_model, "model JSON file")->required();
    place_cmd->add_option("--costs", place_costs, "comma-separated cost list, one per agent")
        ->required()
        ->delimiter(',');
    place_cmd->add_option("--beta", place_beta,
                          "peer-effect strength: a value, or from:to:steps for curves "
                          "(default: the model file's beta)");

    std::string oracle_model;
    long long oracle_draws = 100000;
    std::uint64_t oracle_seed = 0;
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "Cross-check the closed forms against numeric optimization, "
                  "fixed-point iteration, and Monte Carlo simulation");
    oracle_cmd->add_option("model", oracle_model, "model JSON file")->required();
    oracle_cmd->add_option("--draws", oracle_draws, "Monte Carlo draws (default 100000)");
    oracle_cmd->add_option("--seed", oracle_seed, "RNG seed (default 0)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("netcontract");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        result.out = app.help();
        return result;
    } catch (const CLI::CallForAllHelp&) {
        result.out = app.help("", CLI::AppFormatMode::All);
        return result;
    } catch (const CLI::ParseError& e) {
        result.exit_code = 2;
        result.err = error_json(2, "usage", e.what());
        return result;
    }

    try {
        if (check_cmd->parsed()) {
            cmd_check(check_model, result);
        } else if (solve_cmd->parsed()) {
            cmd_solve(solve_model, solve_format, solve_unsafe, result);
        } else if (diff_cmd->parsed()) {
            cmd_diff(diff_model, diff_param, result);
        } else if (sweep_cmd->parsed()) {
            cmd_sweep(sweep_model, sweep_from, sweep_to, sweep_to_opt->count() > 0, sweep_steps,
                      result);
        } else if (place_cmd->parsed()) {
            cmd_place(place_model, place_costs, place_beta, result);
        } else if (oracle_cmd->parsed()) {
            cmd_oracle(oracle_model, oracle_draws, oracle_seed, result);
        }
    } catch (const Error& e) {
        result.exit_code = e.exit_code();
        result.err = error_json(e.exit_code(), kind_for(e.code()), e.what());
    } catch (const std::exception& e) {
        result.exit_code = 4;
        result.err = error_json(4, "numeric", std::string("unexpected failure: ") + e.what());
    }
    return result;
}

}  // namespace netcontract
