#pragma once

// Shared seeded instance generators for the unit and acceptance suites.

#include <cmath>
#include <string>
#include <vector>

#include "stratcls/causal_graph.hpp"
#include "stratcls/incomplete_info.hpp"
#include "stratcls/matrix.hpp"
#include "stratcls/rng.hpp"

namespace testutil {

using stratcls::CausalGraph;
using stratcls::ContributionBelief;
using stratcls::Edge;
using stratcls::Feature;
using stratcls::Matrix;
using stratcls::Rng;
using stratcls::Vector;

/// Random DAG: features f0..f(d-1), forward edges (i -> j, i < j) kept with
/// probability edge_prob, weights uniform in [-1, 1].
inline CausalGraph random_dag(Rng& rng, std::size_t d, double edge_prob = 0.5) {
    std::vector<Feature> features;
    for (std::size_t i = 0; i < d; ++i)
        features.push_back({"f" + std::to_string(i), i < d / 2});
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (rng.uniform() < edge_prob) edges.push_back({i, j, rng.uniform(-1.0, 1.0)});
    return CausalGraph(std::move(features), std::move(edges));
}

inline Vector random_vector(Rng& rng, std::size_t d, double lo = -1.0, double hi = 1.0) {
    Vector v(d);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

/// Random symmetric PSD matrix M M' with entries of M uniform in [-1, 1];
/// adding ridge makes it positive definite.
inline Matrix random_psd(Rng& rng, std::size_t d, double ridge = 0.0) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    Matrix s = m * m.transposed();
    for (std::size_t i = 0; i < d; ++i) s(i, i) += ridge;
    return stratcls::symmetrized(s);
}

/// Random positive-definite belief with mu bounded away from zero.
inline ContributionBelief random_pd_belief(Rng& rng, std::size_t d, double ridge = 0.05) {
    ContributionBelief belief;
    belief.sigma = random_psd(rng, d, ridge);
    belief.mu = random_vector(rng, d, -1.0, 1.0);
    if (stratcls::norm2(belief.mu) < 0.3) belief.mu[0] += 1.0;
    return belief;
}

/// Multivariate normal sampler from a belief (for reformulation checks).
class BeliefSampler {
public:
    BeliefSampler(const ContributionBelief& belief, std::uint64_t seed)
        : mu_(belief.mu), root_(stratcls::psd_sqrt(belief.sigma)), rng_(seed) {}

    Vector draw() {
        Vector z(mu_.size());
        for (double& x : z) x = rng_.normal();
        Vector x = mu_;
        for (std::size_t i = 0; i < mu_.size(); ++i)
            for (std::size_t j = 0; j < mu_.size(); ++j) x[i] += root_(i, j) * z[j];
        return x;
    }

private:
    Vector mu_;
    Matrix root_;
    Rng rng_;
};

}  // namespace testutil
