#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "stratcls/causal_graph.hpp"
#include "stratcls/incomplete_info.hpp"

namespace stratcls {

/// One expert-survey row: agreement score in [0,1] that src causally
/// affects dst.
struct FuzzyScoreRow {
    std::string src;
    std::string dst;
    double score = 0.0;
};

/// Linear fuzzy-score transform: scores at or below 0.5 (experts at best
/// neutral on causality) yield no edge; above, weight = 2 s - 1, anchoring
/// s = 0.5 to weight 0 and s = 1 to weight 1. DomainError outside [0,1].
std::optional<double> fuzzy_to_weight(double score);

/// Build a graph from survey rows over the given feature set; rows whose
/// score does not clear the causality cutoff contribute no edge.
CausalGraph graph_from_fuzzy_scores(std::vector<Feature> features,
                                    const std::vector<FuzzyScoreRow>& rows);

/// The 8-feature cardiovascular-disease graph: desirable lifestyle features
/// (Alcohol, Diet, Activity, Smoking) feeding undesirable clinical ones
/// (DM, HPL, HPT, Obesity) through 15 weighted edges. Bipartite by
/// construction.
CausalGraph build_cvd_graph();

/// Names of the four one-hot case-study classifiers.
const std::vector<std::string>& cvd_classifier_names();

/// Gaussian prior over the classifier for the named clinical feature: mean
/// one-hot on that feature; variance 0 on desirable features (known to be
/// unobserved) and sigma^2 on every undesirable feature.
/// Throws UnknownClassifier for names outside {DM, HPL, HPT, Obesity}.
GaussianPrior build_classifier_prior(const std::string& name, double sigma);

struct TableMuRow {
    std::string classifier;
    Vector mu;         // mean contribution vector, feature order
    double l2_desirable = 0.0;
    double l2_undesirable = 0.0;
};

/// Mean contribution vector and partition norms for the four classifiers.
std::vector<TableMuRow> reproduce_table_mu();

struct SweepConfig {
    std::vector<std::string> classifiers;
    std::vector<double> sigmas;
    std::vector<double> deltas;
    std::vector<double> alphas;
    std::uint64_t seed = 42;

    static SweepConfig defaults();
    void validate() const;
};

struct SweepRow {
    std::string classifier;
    double alpha = 0.0;
    double sigma = 0.0;
    double delta = 0.0;
    bool feasible = false;
    std::optional<double> beta;  // present iff feasible
    std::optional<double> cost;  // present iff feasible
    std::string error;           // non-feasibility/non-solver failures, verbatim
};

/// For each (classifier, alpha, sigma, delta) grid point: build the prior,
/// form the Model-1 belief, classify feasibility, and solve the unweighted-
/// l2 chance-constrained best response. Row order follows config order;
/// per-row failures are recorded in the row rather than thrown.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

}  // namespace stratcls
