#include "stratcls/case_study.hpp"

#include <cmath>

#include "stratcls/errors.hpp"

namespace stratcls {

std::optional<double> fuzzy_to_weight(double score) {
    if (!(score >= 0.0 && score <= 1.0))
        throw DomainError("fuzzy_to_weight: score must lie in [0,1]");
    if (score <= 0.5) return std::nullopt;
    return 2.0 * score - 1.0;
}

CausalGraph graph_from_fuzzy_scores(std::vector<Feature> features,
                                    const std::vector<FuzzyScoreRow>& rows) {
    std::vector<Edge> edges;
    auto index_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < features.size(); ++i)
            if (features[i].name == name) return i;
        throw SchemaError("fuzzy score table references unknown feature: " + name);
    };
    for (const FuzzyScoreRow& row : rows) {
        const auto weight = fuzzy_to_weight(row.score);
        if (!weight) continue;
        edges.push_back({index_of(row.src), index_of(row.dst), *weight});
    }
    return CausalGraph(std::move(features), std::move(edges));
}

namespace {

const std::vector<Feature>& cvd_features() {
    static const std::vector<Feature> features = {
        {"Alcohol", true}, {"Diet", true}, {"Activity", true}, {"Smoking", true},
        {"DM", false},     {"HPL", false}, {"HPT", false},     {"Obesity", false},
    };
    return features;
}

struct CvdEdge {
    const char* src;
    const char* dst;
    double weight;
};

// Expert-survey edge weights; Smoking -> Obesity did not clear the
// causality cutoff and is absent.
constexpr CvdEdge kCvdEdges[] = {
    {"Alcohol", "DM", 0.10},  {"Alcohol", "HPL", 0.14},  {"Alcohol", "HPT", 0.62},
    {"Alcohol", "Obesity", 0.64},
    {"Diet", "DM", 0.84},     {"Diet", "HPL", 0.84},     {"Diet", "HPT", 0.84},
    {"Diet", "Obesity", 0.86},
    {"Activity", "DM", 0.82}, {"Activity", "HPL", 0.82}, {"Activity", "HPT", 0.82},
    {"Activity", "Obesity", 0.82},
    {"Smoking", "DM", 0.52},  {"Smoking", "HPL", 0.34},  {"Smoking", "HPT", 0.86},
};

}  // namespace

CausalGraph build_cvd_graph() {
    std::vector<Feature> features = cvd_features();
    std::vector<Edge> edges;
    auto index_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < features.size(); ++i)
            if (features[i].name == name) return i;
        throw SchemaError("unknown CVD feature: " + name);
    };
    for (const CvdEdge& e : kCvdEdges) edges.push_back({index_of(e.src), index_of(e.dst), e.weight});
    return CausalGraph(std::move(features), std::move(edges));
}

const std::vector<std::string>& cvd_classifier_names() {
    static const std::vector<std::string> names = {"DM", "HPL", "HPT", "Obesity"};
    return names;
}

GaussianPrior build_classifier_prior(const std::string& name, double sigma) {
    if (!(sigma >= 0.0)) throw DomainError("build_classifier_prior: sigma must be >= 0");
    const auto& features = cvd_features();
    std::size_t target = features.size();
    for (std::size_t i = 0; i < features.size(); ++i)
        if (features[i].name == name) target = i;
    if (target == features.size() || features[target].desirable)
        throw UnknownClassifier("unknown case-study classifier: " + name);

    GaussianPrior prior;
    prior.mean.assign(features.size(), 0.0);
    prior.mean[target] = 1.0;
    prior.cov = Matrix(features.size(), features.size());
    for (std::size_t i = 0; i < features.size(); ++i)
        if (!features[i].desirable) prior.cov(i, i) = sigma * sigma;
    return prior;
}

std::vector<TableMuRow> reproduce_table_mu() {
    const CausalGraph graph = build_cvd_graph();
    const Matrix contribution = contribution_matrix(graph.adjacency_matrix());
    const std::vector<bool> desirable = graph.desirable_mask();

    std::vector<TableMuRow> rows;
    for (const std::string& name : cvd_classifier_names()) {
        const ContributionBelief belief =
            belief_model1(contribution, build_classifier_prior(name, 0.0));
        TableMuRow row;
        row.classifier = name;
        row.mu = belief.mu;
        double d2 = 0.0, u2 = 0.0;
        for (std::size_t f = 0; f < belief.mu.size(); ++f) {
            const double sq = belief.mu[f] * belief.mu[f];
            if (desirable[f])
                d2 += sq;
            else
                u2 += sq;
        }
        row.l2_desirable = std::sqrt(d2);
        row.l2_undesirable = std::sqrt(u2);
        rows.push_back(std::move(row));
    }
    return rows;
}

SweepConfig SweepConfig::defaults() {
    SweepConfig config;
    config.classifiers = cvd_classifier_names();
    config.sigmas = {0.1, 0.5, 1.0, 2.0, 3.0};
    config.deltas = {0.1, 0.2, 0.3, 0.4, 0.5};
    config.alphas = {1.0, 10.0};
    config.seed = 42;
    return config;
}

void SweepConfig::validate() const {
    if (classifiers.empty() || sigmas.empty() || deltas.empty() || alphas.empty())
        throw SchemaError("sweep config: classifier/sigma/delta/alpha lists must be non-empty");
    for (const std::string& name : classifiers) {
        bool known = false;
        for (const std::string& candidate : cvd_classifier_names())
            known = known || candidate == name;
        if (!known) throw SchemaError("sweep config: unknown classifier " + name);
    }
    for (double s : sigmas)
        if (!(s >= 0.0)) throw SchemaError("sweep config: sigmas must be >= 0");
    for (double d : deltas)
        if (!(d > 0.0 && d <= 0.5)) throw SchemaError("sweep config: deltas must lie in (0, 0.5]");
    for (double a : alphas)
        if (!(a > 0.0)) throw SchemaError("sweep config: alphas must be > 0");
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    config.validate();
    const CausalGraph graph = build_cvd_graph();
    const Matrix contribution = contribution_matrix(graph.adjacency_matrix());
    const std::vector<bool> desirable = graph.desirable_mask();

    std::vector<SweepRow> rows;
    for (const std::string& name : config.classifiers) {
        for (double alpha : config.alphas) {
            for (double sigma : config.sigmas) {
                const ContributionBelief belief =
                    belief_model1(contribution, build_classifier_prior(name, sigma));
                const double threshold = chance_feasibility_threshold(belief);
                for (double delta : config.deltas) {
                    SweepRow row;
                    row.classifier = name;
                    row.alpha = alpha;
                    row.sigma = sigma;
                    row.delta = delta;
                    row.feasible = delta > threshold;
                    if (row.feasible) {
                        try {
                            const EffortProfile response =
                                best_response_chance_l2(belief, alpha, delta);
                            row.beta = beta_of(response.e, desirable);
                            row.cost = norm2(response.e);
                        } catch (const Error& err) {
                            row.feasible = false;
                            row.error = err.what();
                        }
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

}  // namespace stratcls
