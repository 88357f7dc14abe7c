// Shared helpers for the test suites: data-file loading, in-memory instance
// construction, and the random-instance sampler used by the oracle-agreement
// and property suites.
#pragma once

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netcontract/model.hpp"

namespace nctest {

using netcontract::Matrix;
using netcontract::ModelInstance;
using netcontract::Vector;

inline std::string data_path(const std::string& name) {
    const char* env = std::getenv("NETCONTRACT_DATA");
    return (env != nullptr ? std::string(env) : std::string("data")) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("test data file missing: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline ModelInstance load_instance(const std::string& name) {
    return netcontract::parse_model(read_file(data_path(name)));
}

inline ModelInstance make_instance(const Matrix& g, double beta, const Vector& cost,
                                   double eta = 1.0, double sigma2 = 1.0) {
    ModelInstance inst;
    inst.network.g = g;
    inst.params.beta = beta;
    inst.params.cost = cost;
    inst.params.eta = eta;
    inst.params.sigma2 = sigma2;
    inst.params.reservation = Vector::Zero(g.rows());
    for (int i = 0; i < g.rows(); ++i) inst.labels.push_back(std::to_string(i + 1));
    return inst;
}

inline ModelInstance make_instance(const Matrix& g, double beta, double c = 1.0,
                                   double eta = 1.0, double sigma2 = 1.0) {
    return make_instance(g, beta, Vector::Constant(g.rows(), c), eta, sigma2);
}

/// Fig.-1 topology: agents 1 and 3 each place weight 1 on agent 2.
inline Matrix fig1_graph() {
    Matrix g = Matrix::Zero(3, 3);
    g(0, 1) = 1.0;
    g(2, 1) = 1.0;
    return g;
}

/// Undirected 3-path 1-2-3, all weights 1.
inline Matrix path3_graph() {
    Matrix g = Matrix::Zero(3, 3);
    g(0, 1) = g(1, 0) = 1.0;
    g(1, 2) = g(2, 1) = 1.0;
    return g;
}

/// Five agents; directed links 2->1, 2->3, 4->3, 4->5.
inline Matrix fig2_graph() {
    Matrix g = Matrix::Zero(5, 5);
    g(1, 0) = 1.0;
    g(1, 2) = 1.0;
    g(3, 2) = 1.0;
    g(3, 4) = 1.0;
    return g;
}

/// Random digraph instance with both solvability margins: n in [2,6], weights
/// in (0,1], ~40% acyclic and the rest guaranteed cyclic with rho1 targeted in
/// [0.15, 0.6], then beta shrunk until rho2 <= 0.6 as well.
inline ModelInstance random_instance(std::mt19937_64& rng, bool heterogeneous_costs = false) {
    std::uniform_int_distribution<int> n_dist(2, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> weight(0.1, 1.0);

    const int n = n_dist(rng);
    Matrix g = Matrix::Zero(n, n);
    const bool acyclic = unit(rng) < 0.4;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (acyclic && i > j) continue;
            if (unit(rng) < 0.35) g(i, j) = weight(rng);
        }
    }
    if (acyclic) {
        if (g.sum() == 0.0) g(0, n - 1) = weight(rng);
    } else {
        // Force at least one 2-cycle so the spectral radius is positive.
        const int i = std::uniform_int_distribution<int>(0, n - 2)(rng);
        const int j = std::uniform_int_distribution<int>(i + 1, n - 1)(rng);
        if (g(i, j) == 0.0) g(i, j) = weight(rng);
        if (g(j, i) == 0.0) g(j, i) = weight(rng);
    }

    Vector cost = Vector::Constant(n, 1.0);
    if (heterogeneous_costs) {
        std::uniform_real_distribution<double> c_dist(0.5, 1.5);
        for (int i = 0; i < n; ++i) cost(i) = c_dist(rng);
    }
    const double eta = std::uniform_real_distribution<double>(0.6, 1.4)(rng);
    const double sigma2 = std::uniform_real_distribution<double>(0.6, 1.4)(rng);

    const double rho_g =
        netcontract::spectral_radius(cost.cwiseInverse().asDiagonal() * g);
    double beta;
    if (rho_g <= 1e-12) {
        beta = std::uniform_real_distribution<double>(0.1, 0.5)(rng);
    } else {
        const double target = std::uniform_real_distribution<double>(0.15, 0.6)(rng);
        beta = target / rho_g;
    }

    ModelInstance inst = make_instance(g, beta, cost, eta, sigma2);
    for (int shrink = 0; shrink < 200; ++shrink) {
        const netcontract::AssumptionReport rep = netcontract::check_assumptions(inst);
        if (rep.rho1 <= 0.6 && rep.rho2 <= 0.6) break;
        inst.params.beta *= 0.85;
    }
    return inst;
}

}  // namespace nctest
