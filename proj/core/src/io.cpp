#include "stratcls/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stratcls/errors.hpp"

namespace stratcls {

using nlohmann::json;

namespace {

json parse_or_throw(const std::string& text, const char* what) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) throw SchemaError(std::string(what) + ": invalid JSON");
    return parsed;
}

Vector parse_vector(const json& node, const char* what) {
    if (!node.is_array()) throw SchemaError(std::string(what) + ": expected an array");
    Vector v;
    v.reserve(node.size());
    for (const auto& x : node) {
        if (!x.is_number()) throw SchemaError(std::string(what) + ": expected numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

Matrix parse_matrix(const json& node, const char* what) {
    if (!node.is_array() || node.empty())
        throw SchemaError(std::string(what) + ": expected a non-empty array of rows");
    const std::size_t rows = node.size();
    const std::size_t cols = node[0].is_array() ? node[0].size() : 0;
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const Vector row = parse_vector(node[i], what);
        if (row.size() != cols) throw SchemaError(std::string(what) + ": ragged rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = row[j];
    }
    return m;
}

GaussianPrior parse_prior(const json& node, const char* what) {
    if (!node.is_object() || !node.contains("mean"))
        throw SchemaError(std::string(what) + ": expected {mean, cov}");
    GaussianPrior prior;
    prior.mean = parse_vector(node["mean"], what);
    if (node.contains("cov")) {
        prior.cov = parse_matrix(node["cov"], what);
        if (prior.cov.rows() != prior.mean.size() || prior.cov.cols() != prior.mean.size())
            throw SchemaError(std::string(what) + ": cov dimensions differ from mean");
    } else {
        prior.cov = Matrix(prior.mean.size(), prior.mean.size());
    }
    return prior;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + temp.string() + " for writing");
        out << content;
        if (!out.flush()) throw Error("short write to " + temp.string());
    }
    fs::rename(temp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

CausalGraph parse_graph_json(const std::string& text) {
    const json root = parse_or_throw(text, "graph");
    if (!root.is_object() || !root.contains("features") || !root["features"].is_array())
        throw SchemaError("graph: expected {features:[...], edges:[...]}");

    std::vector<Feature> features;
    for (const auto& node : root["features"]) {
        if (!node.contains("name") || !node["name"].is_string())
            throw SchemaError("graph: feature entries need a string name");
        Feature f;
        f.name = node["name"].get<std::string>();
        f.desirable = node.value("desirable", false);
        features.push_back(std::move(f));
    }

    std::vector<Edge> edges;
    if (root.contains("edges")) {
        if (!root["edges"].is_array()) throw SchemaError("graph: edges must be an array");
        auto index_of = [&](const std::string& name) -> std::size_t {
            for (std::size_t i = 0; i < features.size(); ++i)
                if (features[i].name == name) return i;
            throw SchemaError("graph: edge references unknown feature " + name);
        };
        for (const auto& node : root["edges"]) {
            if (!node.contains("src") || !node.contains("dst") || !node.contains("weight") ||
                !node["weight"].is_number())
                throw SchemaError("graph: edge entries need src, dst and numeric weight");
            edges.push_back({index_of(node["src"].get<std::string>()),
                             index_of(node["dst"].get<std::string>()),
                             node["weight"].get<double>()});
        }
    }
    return CausalGraph(std::move(features), std::move(edges));
}

CausalGraph load_graph_file(const std::string& path) { return parse_graph_json(read_file(path)); }

std::string graph_to_json(const CausalGraph& graph) {
    json root;
    root["features"] = json::array();
    for (const Feature& f : graph.features())
        root["features"].push_back({{"name", f.name}, {"desirable", f.desirable}});
    root["edges"] = json::array();
    for (const Edge& e : graph.edges())
        root["edges"].push_back({{"src", graph.features()[e.src].name},
                                 {"dst", graph.features()[e.dst].name},
                                 {"weight", e.weight}});
    return root.dump(2) + "\n";
}

CostModel parse_cost_model_json(const std::string& text, const CausalGraph& graph) {
    const json root = parse_or_throw(text, "cost model");
    if (!root.is_object()) throw SchemaError("cost model: expected an object");
    CostModel model;
    model.p = root.value("p", 2.0);
    model.weights.assign(graph.size(), 1.0);
    if (root.contains("weights")) {
        if (!root["weights"].is_object())
            throw SchemaError("cost model: weights must map feature names to numbers");
        for (const auto& [name, value] : root["weights"].items()) {
            if (!value.is_number()) throw SchemaError("cost model: weights must be numeric");
            model.weights[graph.index_of(name)] = value.get<double>();
        }
    }
    try {
        model.validate();
    } catch (const DomainError& err) {
        throw SchemaError(std::string("cost model: ") + err.what());
    }
    return model;
}

ClassifierSpec parse_classifier_json(const std::string& text, const CausalGraph& graph) {
    const json root = parse_or_throw(text, "classifier");
    if (!root.is_object()) throw SchemaError("classifier: expected an object");
    ClassifierSpec spec;
    if (root.contains("h0")) {
        spec.prior = GaussianPrior::point_mass(parse_vector(root["h0"], "classifier h0"));
    } else if (root.contains("name")) {
        const double sigma = root.value("sigma", 0.0);
        try {
            spec.prior = build_classifier_prior(root["name"].get<std::string>(), sigma);
        } catch (const UnknownClassifier& err) {
            throw SchemaError(std::string("classifier: ") + err.what());
        }
        // Named priors live on the case-study feature set.
        const CausalGraph reference = build_cvd_graph();
        if (graph.size() != reference.size())
            throw SchemaError("classifier: named priors require the 8-feature CVD graph");
        for (std::size_t i = 0; i < reference.size(); ++i)
            if (graph.features()[i].name != reference.features()[i].name)
                throw SchemaError("classifier: named priors require the CVD feature order");
    } else if (root.contains("mean")) {
        spec.prior = parse_prior(root, "classifier prior");
    } else {
        throw SchemaError("classifier: expected h0, mean/cov, or name/sigma");
    }
    if (spec.prior.mean.size() != graph.size())
        throw SchemaError("classifier: length differs from the graph's feature count");
    spec.has_uncertainty = spec.prior.cov.max_abs() > 0.0;
    return spec;
}

ContributionBelief parse_belief_json(const std::string& text, const CausalGraph* graph) {
    const json root = parse_or_throw(text, "belief");
    if (!root.is_object()) throw SchemaError("belief: expected an object");
    if (root.contains("mu")) {
        ContributionBelief belief;
        belief.mu = parse_vector(root["mu"], "belief mu");
        if (!root.contains("sigma")) throw SchemaError("belief: missing sigma");
        belief.sigma = parse_matrix(root["sigma"], "belief sigma");
        if (belief.sigma.rows() != belief.mu.size() || belief.sigma.cols() != belief.mu.size())
            throw SchemaError("belief: sigma dimensions differ from mu");
        belief.sigma = symmetrized(belief.sigma);
        return belief;
    }
    const std::string model = root.value("model", "");
    if (model.empty()) throw SchemaError("belief: expected mu/sigma or a model form");
    if (graph == nullptr) throw SchemaError("belief: model forms require --graph");
    if (model == "model1") {
        if (!root.contains("classifier_prior"))
            throw SchemaError("belief: model1 needs classifier_prior");
        const GaussianPrior prior = parse_prior(root["classifier_prior"], "classifier_prior");
        return belief_model1(contribution_matrix(graph->adjacency_matrix()), prior);
    }
    if (model == "model2") {
        if (!root.contains("weight_prior") || !root.contains("h0"))
            throw SchemaError("belief: model2 needs h0 and weight_prior");
        const GaussianPrior prior = parse_prior(root["weight_prior"], "weight_prior");
        return belief_model2_linear(*graph, parse_vector(root["h0"], "belief h0"), prior);
    }
    throw SchemaError("belief: unknown model \"" + model + "\"");
}

SweepConfig parse_sweep_config_json(const std::string& text) {
    const json root = parse_or_throw(text, "sweep config");
    if (!root.is_object()) throw SchemaError("sweep config: expected an object");
    SweepConfig config = SweepConfig::defaults();
    if (root.contains("classifiers"))
        config.classifiers = root["classifiers"].get<std::vector<std::string>>();
    if (root.contains("sigmas")) config.sigmas = parse_vector(root["sigmas"], "sigmas");
    if (root.contains("deltas")) config.deltas = parse_vector(root["deltas"], "deltas");
    if (root.contains("alphas")) config.alphas = parse_vector(root["alphas"], "alphas");
    if (root.contains("seed")) config.seed = root["seed"].get<std::uint64_t>();
    config.validate();
    return config;
}

std::vector<FuzzyScoreRow> parse_fuzzy_csv(const std::string& text) {
    std::stringstream stream(text);
    std::string line;
    if (!std::getline(stream, line) || split_line(line) != std::vector<std::string>{"src", "dst", "score"})
        throw SchemaError("fuzzy scores: expected header src,dst,score");
    std::vector<FuzzyScoreRow> rows;
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 3) throw SchemaError("fuzzy scores: expected 3 fields per row");
        try {
            rows.push_back({fields[0], fields[1], std::stod(fields[2])});
        } catch (const std::exception&) {
            throw SchemaError("fuzzy scores: non-numeric score in row: " + line);
        }
    }
    return rows;
}

std::string matrix_csv(const Matrix& m, const std::vector<Feature>& features) {
    std::string out = "feature";
    for (const Feature& f : features) out += "," + f.name;
    out += "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out += features[i].name;
        for (std::size_t j = 0; j < m.cols(); ++j) out += "," + format_double(m(i, j));
        out += "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "classifier,alpha,sigma,delta,feasible,beta,cost\n";
    for (const SweepRow& row : rows) {
        out += row.classifier + "," + format_double(row.alpha) + "," + format_double(row.sigma) +
               "," + format_double(row.delta) + "," + (row.feasible ? "true" : "false") + ",";
        out += row.beta ? format_double(*row.beta) : "";
        out += ",";
        out += row.cost ? format_double(*row.cost) : "";
        out += "\n";
    }
    return out;
}

std::string table_mu_csv(const std::vector<TableMuRow>& rows,
                         const std::vector<Feature>& features) {
    std::string out = "classifier";
    for (const Feature& f : features) out += "," + f.name;
    out += ",l2_D,l2_U\n";
    for (const TableMuRow& row : rows) {
        out += row.classifier;
        for (double v : row.mu) out += "," + format_double(v);
        out += "," + format_double(row.l2_desirable) + "," + format_double(row.l2_undesirable);
        out += "\n";
    }
    return out;
}

}  // namespace stratcls
