/**
 * @file model.hpp
 * @brief Problem data: weighted directed network, economic parameters, JSON
 *        parsing/serialization, spectral-radius assumption checks, and the
 *        graph queries used by the comparative-statics classification.
 */
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace netcontract {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Weighted directed network; g(i,j) is the weight agent i places on agent
/// j's effort. Zero diagonal by construction.
struct Network {
    Matrix g;

    int size() const { return static_cast<int>(g.rows()); }
};

/// Economic primitives. `cost` and `reservation` always hold one entry per
/// agent; a scalar cost in the input file is broadcast at parse time.
struct EconParams {
    double beta = 0.0;    ///< peer-effect strength, >= 0
    Vector cost;          ///< c_i > 0
    double eta = 1.0;     ///< absolute risk aversion, > 0
    double sigma2 = 1.0;  ///< output-noise variance, > 0
    Vector reservation;   ///< outside-option certainty equivalents

    bool homogeneous_cost() const;
};

struct ModelInstance {
    Network network;
    EconParams params;
    std::vector<std::string> labels;

    int size() const { return network.size(); }
    /// beta / c for the homogeneous-cost case; throws otherwise.
    double lambda() const;
};

/// Spectral-radius report for the two solvability gates. With heterogeneous
/// costs both radii use the cost-scaled generalizations (flagged) that reduce
/// to the textbook forms when costs are equal.
struct AssumptionReport {
    double rho1 = 0.0;         ///< spectral radius of beta * C^-1 * G
    double rho2 = 0.0;         ///< spectral radius of delta * (MG)^T (MG), generalized under heterogeneity
    bool a1_holds = false;
    bool a2_holds = false;
    double margin1 = 0.0;      ///< 1 - rho1
    double margin2 = 0.0;      ///< 1 - rho2
    bool generalized = false;  ///< true when heterogeneous costs required the generalized forms
};

/// Parses the UTF-8 JSON model document. Unknown keys, duplicate labels,
/// self-loops, duplicate or negative-weight edges, nonpositive cost/eta/sigma2
/// and dimension mismatches are ValidationErrors naming the agents involved.
ModelInstance parse_model(const std::string& text);

/// Serializes back to the model-file schema (17 significant digits, exact
/// round trip through parse_model).
std::string serialize_model(const ModelInstance& inst);

/// Largest absolute eigenvalue. Dense eigendecomposition with a
/// power-iteration fallback (10^4 iteration cap) behind it.
double spectral_radius(const Matrix& m);

/// Computes both radii and flags. Never throws on a failed assumption; a
/// singular influence solve reports rho2 = +infinity instead.
AssumptionReport check_assumptions(const ModelInstance& inst);

/// Connected components of the symmetrized graph (g[i][j] + g[j][i] > 0),
/// each sorted ascending; blocks ordered by smallest member.
std::vector<std::vector<int>> weak_components(const Network& net);

/// True iff some agent l has g(l, k) > 0.
bool has_in_link(const Network& net, int k);

/// Instance surgery for finite-difference probes, sweeps, and placement
/// search. Deliberately unvalidated: probe points may carry values outside
/// the file schema (e.g., a tiny negative weight or beta).
ModelInstance with_edge_weight(ModelInstance inst, int i, int j, double w);
ModelInstance with_beta(ModelInstance inst, double beta);
ModelInstance with_homogeneous_cost(ModelInstance inst, double c);
ModelInstance with_cost_profile(ModelInstance inst, const Vector& cost);
ModelInstance with_eta(ModelInstance inst, double eta);
ModelInstance with_sigma2(ModelInstance inst, double sigma2);

}  // namespace netcontract
