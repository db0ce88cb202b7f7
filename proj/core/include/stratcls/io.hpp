#pragma once

#include <string>

#include "stratcls/case_study.hpp"
#include "stratcls/causal_graph.hpp"
#include "stratcls/incomplete_info.hpp"

namespace stratcls {

/// Floats in emitted files carry 12 significant digits, '.' decimal, no
/// locale, so golden outputs stay byte-stable.
std::string format_double(double v);

/// Write via temp file + rename in the target directory.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// --- graph JSON -----------------------------------------------------------
// {"features":[{"name":str,"desirable":bool}...],
//  "edges":[{"src":str,"dst":str,"weight":num}...]}
CausalGraph parse_graph_json(const std::string& text);
CausalGraph load_graph_file(const std::string& path);
std::string graph_to_json(const CausalGraph& graph);

// --- cost model JSON -------------------------------------------------------
// {"p":num, "weights":{featureName:num}}; weights default to 1.0 when the
// feature is omitted (or the key is absent entirely).
CostModel parse_cost_model_json(const std::string& text, const CausalGraph& graph);

// --- classifier JSON --------------------------------------------------------
// One of:
//   {"h0":[...]}                          deterministic classifier
//   {"mean":[...], "cov":[[...]]}         Gaussian prior over h
//   {"name":"DM", "sigma":num}            case-study prior (CVD feature set)
// The prior is degenerate (zero covariance) exactly when deterministic.
struct ClassifierSpec {
    GaussianPrior prior;
    bool has_uncertainty = false;
};
ClassifierSpec parse_classifier_json(const std::string& text, const CausalGraph& graph);

// --- belief JSON -------------------------------------------------------------
// One of:
//   {"mu":[...], "sigma":[[...]]}
//   {"model":"model1", "classifier_prior":{"mean":[...],"cov":[[...]]}}
//   {"model":"model2", "h0":[...], "weight_prior":{"mean":[...],"cov":[[...]]}}
// model1/model2 forms need the graph; model2's weight prior is indexed by
// the graph's edge declaration order.
ContributionBelief parse_belief_json(const std::string& text, const CausalGraph* graph);

// --- sweep config JSON --------------------------------------------------------
// {"classifiers":[...], "sigmas":[...], "deltas":[...], "alphas":[...],
//  "seed":int}; missing keys fall back to the default grid.
SweepConfig parse_sweep_config_json(const std::string& text);

// --- fuzzy score CSV ---------------------------------------------------------
// Header "src,dst,score", one survey row per line.
std::vector<FuzzyScoreRow> parse_fuzzy_csv(const std::string& text);

// --- CSV emitters ------------------------------------------------------------
std::string matrix_csv(const Matrix& m, const std::vector<Feature>& features);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string table_mu_csv(const std::vector<TableMuRow>& rows,
                         const std::vector<Feature>& features);

}  // namespace stratcls
