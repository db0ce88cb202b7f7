#pragma once

#include <string>
#include <vector>

#include "stratcls/matrix.hpp"

namespace stratcls {

struct Feature {
    std::string name;
    bool desirable = false;
};

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    double weight = 0.0;
};

/// Weighted feature DAG with a desirable/undesirable partition.
///
/// Feature order is declaration order; every matrix and vector in the
/// toolkit uses that order. Edge weights may be negative. Construction
/// validates: indices in range, no self-loops, no duplicate (src,dst)
/// pairs, and acyclicity (CycleDetected carries one witness cycle).
class CausalGraph {
public:
    CausalGraph(std::vector<Feature> features, std::vector<Edge> edges);

    std::size_t size() const { return features_.size(); }
    const std::vector<Feature>& features() const { return features_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::size_t>& topological_order() const { return topo_order_; }

    /// Index of a feature by name; SchemaError if unknown.
    std::size_t index_of(const std::string& name) const;

    /// desirable[f] == true iff feature f is in the principal's set D.
    std::vector<bool> desirable_mask() const;

    /// A[i][j] = weight of edge i->j, 0 when absent.
    Matrix adjacency_matrix() const;

private:
    std::vector<Feature> features_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> topo_order_;
};

/// Topological order of the graph's features (edge sources before
/// destinations). Standalone surface over the validation the constructor
/// already performs.
std::vector<std::size_t> validate_dag(const CausalGraph& graph);

/// Total-influence matrix C = sum_k A^k, accumulated by iterated
/// multiplication and stopped early once a power vanishes below 1e-15.
/// Requires a nilpotent A (i.e. the adjacency matrix of a validated DAG).
Matrix contribution_matrix(const Matrix& adjacency);

/// Sum over all directed i->j paths of the product of edge weights along
/// the path; 1 when i == j. Exhaustive DFS, usable as an independent oracle
/// for contribution_matrix.
double path_oracle(const CausalGraph& graph, std::size_t i, std::size_t j);

/// Net feature change induced by exogenous effort e: C' e.
Vector delta_x(const Matrix& contribution, const Vector& effort);

/// True iff no feature has both an incoming and an outgoing edge, i.e.
/// every feature is purely causal or purely proxy.
bool is_bipartite_causal(const CausalGraph& graph);

}  // namespace stratcls
