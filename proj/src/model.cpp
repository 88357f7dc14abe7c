/**
 * @file model.cpp
 * @brief Model parsing, validation, spectral checks, and graph queries.
 */
#include "netcontract/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "netcontract/errors.hpp"
#include "netcontract/jsonio.hpp"
#include "netcontract/tolerances.hpp"

namespace netcontract {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

double require_positive(const json& j, const char* key) {
    if (!j.is_number()) fail(std::string(key) + " must be a number");
    double x = j.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) fail(std::string(key) + " must be positive and finite");
    return x;
}

}  // namespace

bool EconParams::homogeneous_cost() const {
    for (Eigen::Index i = 1; i < cost.size(); ++i)
        if (cost[i] != cost[0]) return false;
    return true;
}

double ModelInstance::lambda() const {
    if (!params.homogeneous_cost())
        throw NumericError("lambda is defined only for homogeneous costs");
    return params.beta / params.cost[0];
}

ModelInstance parse_model(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("model document must be a JSON object");

    static const std::set<std::string> known = {"agents", "edges", "beta", "cost",
                                                "eta", "sigma2", "reservation"};
    for (const auto& item : doc.items())
        if (!known.count(item.key())) fail("unknown key \"" + item.key() + "\"");
    for (const char* key : {"agents", "edges", "beta", "cost", "eta", "sigma2"})
        if (!doc.contains(key)) fail(std::string("missing key \"") + key + "\"");

    if (!doc["agents"].is_array() || doc["agents"].empty()) fail("agents must be a nonempty array");
    std::vector<std::string> labels;
    for (const auto& a : doc["agents"]) {
        if (!a.is_string()) fail("agent labels must be strings");
        labels.push_back(a.get<std::string>());
    }
    const int n = static_cast<int>(labels.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (labels[i] == labels[j]) fail("duplicate label \"" + labels[i] + "\"");

    auto index_of = [&](const std::string& lab) {
        auto it = std::find(labels.begin(), labels.end(), lab);
        if (it == labels.end()) fail("edge references unknown agent \"" + lab + "\"");
        return static_cast<int>(it - labels.begin());
    };

    Matrix g = Matrix::Zero(n, n);
    std::set<std::pair<int, int>> seen;
    if (!doc["edges"].is_array()) fail("edges must be an array");
    for (const auto& e : doc["edges"]) {
        if (!e.is_object()) fail("each edge must be an object");
        for (const auto& item : e.items())
            if (item.key() != "from" && item.key() != "to" && item.key() != "w")
                fail("unknown edge key \"" + item.key() + "\"");
        for (const char* key : {"from", "to", "w"})
            if (!e.contains(key)) fail(std::string("edge missing \"") + key + "\"");
        if (!e["from"].is_string() || !e["to"].is_string()) fail("edge endpoints must be labels");
        int i = index_of(e["from"].get<std::string>());
        int j = index_of(e["to"].get<std::string>());
        if (i == j) fail("self-loop " + labels[i] + "->" + labels[j]);
        if (!e["w"].is_number()) fail("edge weight must be a number");
        double w = e["w"].get<double>();
        if (!std::isfinite(w)) fail("edge weight must be finite (" + labels[i] + "->" + labels[j] + ")");
        if (w < 0.0) fail("negative weight on " + labels[i] + "->" + labels[j]);
        if (!seen.insert({i, j}).second) fail("duplicate edge " + labels[i] + "->" + labels[j]);
        g(i, j) = w;
    }

    EconParams p;
    if (!doc["beta"].is_number()) fail("beta must be a number");
    p.beta = doc["beta"].get<double>();
    if (p.beta < 0.0 || !std::isfinite(p.beta)) fail("beta must be >= 0 and finite");

    if (doc["cost"].is_number()) {
        double c = require_positive(doc["cost"], "cost");
        p.cost = Vector::Constant(n, c);
    } else if (doc["cost"].is_array()) {
        if (static_cast<int>(doc["cost"].size()) != n)
            fail("cost array length must equal agent count");
        p.cost.resize(n);
        for (int i = 0; i < n; ++i) {
            if (!doc["cost"][i].is_number()) fail("cost entries must be numbers");
            double c = doc["cost"][i].get<double>();
            if (!(c > 0.0) || !std::isfinite(c))
                fail("cost must be positive (agent " + labels[i] + ")");
            p.cost[i] = c;
        }
    } else {
        fail("cost must be a number or an array");
    }

    p.eta = require_positive(doc["eta"], "eta");
    p.sigma2 = require_positive(doc["sigma2"], "sigma2");

    p.reservation = Vector::Zero(n);
    if (doc.contains("reservation")) {
        if (!doc["reservation"].is_array() || static_cast<int>(doc["reservation"].size()) != n)
            fail("reservation must be an array of length equal to agent count");
        for (int i = 0; i < n; ++i) {
            if (!doc["reservation"][i].is_number()) fail("reservation entries must be numbers");
            double r = doc["reservation"][i].get<double>();
            if (!std::isfinite(r)) fail("reservation must be finite (agent " + labels[i] + ")");
            p.reservation[i] = r;
        }
    }

    return ModelInstance{Network{std::move(g)}, std::move(p), std::move(labels)};
}

std::string serialize_model(const ModelInstance& inst) {
    const int n = inst.size();
    jsonio::Writer w;
    w.begin_object();
    w.key("agents");
    w.begin_array();
    for (const auto& lab : inst.labels) w.value(lab);
    w.end_array();
    w.key("edges");
    w.begin_array();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (inst.network.g(i, j) != 0.0) {
                w.begin_object();
                w.key("from");
                w.value(inst.labels[i]);
                w.key("to");
                w.value(inst.labels[j]);
                w.key("w");
                w.value(inst.network.g(i, j));
                w.end_object();
            }
    w.end_array();
    w.key("beta");
    w.value(inst.params.beta);
    w.key("cost");
    if (inst.params.homogeneous_cost()) {
        w.value(inst.params.cost[0]);
    } else {
        w.begin_array();
        for (int i = 0; i < n; ++i) w.value(inst.params.cost[i]);
        w.end_array();
    }
    w.key("eta");
    w.value(inst.params.eta);
    w.key("sigma2");
    w.value(inst.params.sigma2);
    w.key("reservation");
    w.begin_array();
    for (int i = 0; i < n; ++i) w.value(inst.params.reservation[i]);
    w.end_array();
    w.end_object();
    return w.str();
}

double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols()) throw NumericError("spectral_radius requires a square matrix");
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 0.0;
    if (m.isZero(0.0)) return 0.0;

    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() == Eigen::Success) {
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }

    // Power iteration fallback; only reachable when the QR iteration failed.
    Vector x = Vector::Ones(n).normalized();
    double prev = 0.0;
    for (int it = 0; it < 10000; ++it) {
        Vector y = m * x;
        double norm = y.norm();
        if (norm == 0.0) return 0.0;
        x = y / norm;
        if (std::abs(norm - prev) <= tol::kSpectral * std::max(1.0, norm)) return norm;
        prev = norm;
    }
    throw NumericError("spectral radius estimation did not converge; best estimate " +
                       std::to_string(prev));
}

AssumptionReport check_assumptions(const ModelInstance& inst) {
    const int n = inst.size();
    const auto& p = inst.params;
    const Matrix& G = inst.network.g;

    AssumptionReport rep;
    rep.generalized = !p.homogeneous_cost();

    Matrix cinv_g = p.cost.cwiseInverse().asDiagonal() * G;
    rep.rho1 = spectral_radius(p.beta * cinv_g);

    // rho2 needs the influence inverse; report +inf if that inverse does not
    // exist instead of erroring (check is a diagnostic, not a gate).
    auto guarded_rho2 = [&]() -> double {
        if (rep.generalized) {
            Vector s = p.cost.cwiseSqrt().cwiseInverse();  // C^{-1/2} diagonal
            Matrix Gt = s.asDiagonal() * G * s.asDiagonal();
            Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - p.beta * Gt);
            Matrix Mt = lu.solve(Matrix::Identity(n, n));
            if (!Mt.allFinite()) return std::numeric_limits<double>::infinity();
            Vector d = (p.cost.cwiseInverse().array() + p.eta * p.sigma2).matrix().cwiseSqrt().cwiseInverse();
            Vector ds = d.cwiseProduct(s);
            Matrix MtGt = Mt * Gt;
            Matrix core = ds.asDiagonal() * MtGt.transpose() * MtGt * ds.asDiagonal();
            return spectral_radius(p.beta * p.beta * core);
        }
        const double c = p.cost[0];
        const double lam = p.beta / c;
        const double delta = lam * lam / (1.0 + c * p.eta * p.sigma2);
        Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - lam * G);
        Matrix M = lu.solve(Matrix::Identity(n, n));
        if (!M.allFinite()) return std::numeric_limits<double>::infinity();
        Matrix MG = M * G;
        return spectral_radius(delta * MG.transpose() * MG);
    };
    rep.rho2 = guarded_rho2();

    rep.a1_holds = rep.rho1 < 1.0;
    rep.a2_holds = rep.rho2 < 1.0;
    rep.margin1 = 1.0 - rep.rho1;
    rep.margin2 = 1.0 - rep.rho2;
    return rep;
}

std::vector<std::vector<int>> weak_components(const Network& net) {
    const int n = net.size();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> blocks;
    for (int root = 0; root < n; ++root) {
        if (comp[root] >= 0) continue;
        std::vector<int> stack{root}, members;
        comp[root] = static_cast<int>(blocks.size());
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            members.push_back(u);
            for (int w = 0; w < n; ++w) {
                if (comp[w] < 0 && (net.g(u, w) > 0.0 || net.g(w, u) > 0.0)) {
                    comp[w] = comp[root];
                    stack.push_back(w);
                }
            }
        }
        std::sort(members.begin(), members.end());
        blocks.push_back(std::move(members));
    }
    return blocks;
}

bool has_in_link(const Network& net, int k) {
    for (int l = 0; l < net.size(); ++l)
        if (net.g(l, k) > 0.0) return true;
    return false;
}

ModelInstance with_edge_weight(ModelInstance inst, int i, int j, double w) {
    inst.network.g(i, j) = w;
    return inst;
}

ModelInstance with_beta(ModelInstance inst, double beta) {
    inst.params.beta = beta;
    return inst;
}

ModelInstance with_homogeneous_cost(ModelInstance inst, double c) {
    inst.params.cost = Vector::Constant(inst.size(), c);
    return inst;
}

ModelInstance with_cost_profile(ModelInstance inst, const Vector& cost) {
    inst.params.cost = cost;
    return inst;
}

ModelInstance with_eta(ModelInstance inst, double eta) {
    inst.params.eta = eta;
    return inst;
}

ModelInstance with_sigma2(ModelInstance inst, double sigma2) {
    inst.params.sigma2 = sigma2;
    return inst;
}

}  // namespace netcontract
