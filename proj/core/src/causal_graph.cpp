#include "stratcls/causal_graph.hpp"

#include <algorithm>
#include <set>

#include "stratcls/errors.hpp"

namespace stratcls {

namespace {

// Kahn's algorithm; on failure extracts one cycle from the leftover nodes.
std::vector<std::size_t> topo_sort_or_throw(std::size_t n, const std::vector<Edge>& edges,
                                            const std::vector<Feature>& features) {
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const Edge& e : edges) {
        out[e.src].push_back(e.dst);
        ++indegree[e.dst];
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push_back(i);
    // Process in ascending index order so the empty-edge graph yields the
    // canonical declaration order.
    std::make_heap(ready.begin(), ready.end(), std::greater<>());
    while (!ready.empty()) {
        std::pop_heap(ready.begin(), ready.end(), std::greater<>());
        const std::size_t u = ready.back();
        ready.pop_back();
        order.push_back(u);
        for (std::size_t v : out[u]) {
            if (--indegree[v] == 0) {
                ready.push_back(v);
                std::push_heap(ready.begin(), ready.end(), std::greater<>());
            }
        }
    }
    if (order.size() == n) return order;

    // Every leftover node keeps at least one leftover predecessor, so a
    // backward walk must revisit a node; that loop is a genuine cycle.
    std::vector<std::vector<std::size_t>> in(n);
    for (const Edge& e : edges)
        if (indegree[e.dst] > 0 && indegree[e.src] > 0) in[e.dst].push_back(e.src);
    std::size_t start = 0;
    while (indegree[start] == 0) ++start;
    std::vector<std::size_t> walk;
    std::vector<int> seen_at(n, -1);
    std::size_t u = start;
    while (seen_at[u] < 0) {
        seen_at[u] = static_cast<int>(walk.size());
        walk.push_back(u);
        u = in[u].front();
    }
    std::vector<std::size_t> cycle(walk.begin() + seen_at[u], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    std::string msg = "cycle detected:";
    for (std::size_t node : cycle) msg += " " + features[node].name + " ->";
    msg += " " + features[cycle.front()].name;
    throw CycleDetected(msg, cycle);
}

}  // namespace

CausalGraph::CausalGraph(std::vector<Feature> features, std::vector<Edge> edges)
    : features_(std::move(features)), edges_(std::move(edges)) {
    const std::size_t n = features_.size();
    std::set<std::string> names;
    for (const Feature& f : features_)
        if (!names.insert(f.name).second)
            throw SchemaError("duplicate feature name: " + f.name);
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const Edge& e : edges_) {
        if (e.src >= n || e.dst >= n) throw SchemaError("edge references unknown feature index");
        if (e.src == e.dst)
            throw SchemaError("self-loop on feature " + features_[e.src].name);
        if (!pairs.insert({e.src, e.dst}).second)
            throw SchemaError("duplicate edge " + features_[e.src].name + " -> " +
                              features_[e.dst].name);
    }
    topo_order_ = topo_sort_or_throw(n, edges_, features_);
}

std::size_t CausalGraph::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < features_.size(); ++i)
        if (features_[i].name == name) return i;
    throw SchemaError("unknown feature name: " + name);
}

std::vector<bool> CausalGraph::desirable_mask() const {
    std::vector<bool> mask(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) mask[i] = features_[i].desirable;
    return mask;
}

Matrix CausalGraph::adjacency_matrix() const {
    Matrix a(size(), size());
    for (const Edge& e : edges_) a(e.src, e.dst) = e.weight;
    return a;
}

std::vector<std::size_t> validate_dag(const CausalGraph& graph) {
    return graph.topological_order();
}

Matrix contribution_matrix(const Matrix& adjacency) {
    if (!adjacency.is_square())
        throw DimensionMismatch("contribution_matrix: adjacency not square");
    const std::size_t n = adjacency.rows();
    Matrix c = Matrix::identity(n);
    Matrix power = Matrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        power = power * adjacency;
        if (power.max_abs() < 1e-15) break;
        c = c + power;
    }
    return c;
}

double path_oracle(const CausalGraph& graph, std::size_t i, std::size_t j) {
    if (i >= graph.size() || j >= graph.size())
        throw DimensionMismatch("path_oracle: feature index out of range");
    if (i == j) return 1.0;
    std::vector<std::vector<std::pair<std::size_t, double>>> out(graph.size());
    for (const Edge& e : graph.edges()) out[e.src].push_back({e.dst, e.weight});

    double total = 0.0;
    // Acyclicity bounds the recursion; plain DFS over all paths.
    auto dfs = [&](auto&& self, std::size_t node, double product) -> void {
        if (node == j) {
            total += product;
            return;
        }
        for (const auto& [next, w] : out[node]) self(self, next, product * w);
    };
    dfs(dfs, i, 1.0);
    return total;
}

Vector delta_x(const Matrix& contribution, const Vector& effort) {
    return mat_transpose_vec(contribution, effort);
}

bool is_bipartite_causal(const CausalGraph& graph) {
    std::vector<bool> has_in(graph.size(), false);
    std::vector<bool> has_out(graph.size(), false);
    for (const Edge& e : graph.edges()) {
        has_out[e.src] = true;
        has_in[e.dst] = true;
    }
    for (std::size_t f = 0; f < graph.size(); ++f)
        if (has_in[f] && has_out[f]) return false;
    return true;
}

}  // namespace stratcls
