// stratcls: command-line front door for the strategic-classification toolkit.
//
// Exit codes: 0 success, 2 schema/validation error, 3 graph error (cycles,
// depth), 4 infeasible program (feasibility threshold echoed), 5 numerical
// failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stratcls/case_study.hpp"
#include "stratcls/complete_info.hpp"
#include "stratcls/design_audit.hpp"
#include "stratcls/errors.hpp"
#include "stratcls/incomplete_info.hpp"
#include "stratcls/io.hpp"
#include "stratcls/numerics.hpp"

namespace {

using nlohmann::json;
using namespace stratcls;

constexpr int kExitSchema = 2;
constexpr int kExitGraph = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitNumerical = 5;

json vector_json(const Vector& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("STRATCLS_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw SchemaError("STRATCLS_SEED must be a nonnegative integer");
        }
    }
    return 42;
}

struct RespondArgs {
    std::string graph_path;
    std::string classifier_path;
    std::string cost_weights_path;
    std::string out_path;
    double alpha = 1.0;
    std::optional<double> delta;
    std::optional<double> p;
    bool verify = false;
};

int run_respond(const RespondArgs& args) {
    const CausalGraph graph = load_graph_file(args.graph_path);
    const Matrix contribution = contribution_matrix(graph.adjacency_matrix());
    const ClassifierSpec classifier = parse_classifier_json(read_file(args.classifier_path), graph);

    CostModel model = args.cost_weights_path.empty()
                          ? CostModel::uniform(graph.size())
                          : parse_cost_model_json(read_file(args.cost_weights_path), graph);
    if (args.p) model.p = *args.p;
    model.validate();

    json out;
    Vector effort;
    double margin = 0.0;
    bool uniform_weights = true;
    for (double w : model.weights) uniform_weights = uniform_weights && w == 1.0;

    if (!classifier.has_uncertainty) {
        const Vector ch = mat_vec(contribution, classifier.prior.mean);
        const EffortProfile response = model.p == 1.0
                                           ? best_response_l1(ch, model.weights, args.alpha)
                                           : best_response_lp(ch, model, args.alpha);
        effort = response.e;
        margin = args.alpha - dot(ch, effort);
    } else {
        if (!args.delta)
            throw SchemaError("respond: --delta is required when the classifier carries a covariance");
        const ContributionBelief belief = belief_model1(contribution, classifier.prior);
        EffortProfile response;
        if (model.p == 1.0) {
            response = best_response_chance_l1(belief, model.weights, args.alpha, *args.delta);
        } else if (model.p == 2.0 && uniform_weights) {
            response = best_response_chance_l2(belief, args.alpha, *args.delta);
        } else {
            throw SchemaError(
                "respond: chance-constrained responses support p=1 (weighted) or p=2 "
                "(unweighted) cost models");
        }
        effort = response.e;
        margin = chance_margin(belief, effort, args.alpha, *args.delta);
    }

    out["effort"] = vector_json(effort);
    out["cost"] = cost(model, effort);
    const bool zero = norm2(effort) == 0.0;
    if (zero)
        out["beta"] = nullptr;  // beta is undefined on the zero profile
    else
        out["beta"] = beta_of(effort, graph.desirable_mask());
    out["feasible"] = true;
    out["margin"] = margin;
    atomic_write_file(args.out_path, out.dump(2) + "\n");

    if (args.verify && margin > 1e-8) {
        std::cerr << "verify: margin " << format_double(margin) << " exceeds 1e-8\n";
        return kExitNumerical;
    }
    if (args.verify) std::cout << "verify: margin " << format_double(margin) << " <= 1e-8\n";
    return 0;
}

struct AuditArgs {
    std::string graph_path;
    std::string classifier_path;
    std::string cost_weights_path;
    std::string out_path;
    double alpha = 1.0;
    double beta = 0.5;
    std::optional<double> p;
};

int run_audit(const AuditArgs& args) {
    const CausalGraph graph = load_graph_file(args.graph_path);
    const Matrix contribution = contribution_matrix(graph.adjacency_matrix());
    const ClassifierSpec classifier = parse_classifier_json(read_file(args.classifier_path), graph);
    if (classifier.has_uncertainty)
        throw SchemaError("audit: expects a deterministic classifier (h0)");

    CostModel model = args.cost_weights_path.empty()
                          ? CostModel::uniform(graph.size())
                          : parse_cost_model_json(read_file(args.cost_weights_path), graph);
    if (args.p) model.p = *args.p;
    model.validate();

    const AuditReport report = audit_classifier(classifier.prior.mean, contribution, model,
                                                graph.desirable_mask(), args.beta, args.alpha);
    json out;
    out["classifier"] = vector_json(report.classifier);
    out["contribution"] = vector_json(report.contribution);
    out["effort"] = vector_json(report.effort);
    out["cost"] = report.cost_value;
    if (report.achieved_beta)
        out["achieved_beta"] = *report.achieved_beta;
    else
        out["achieved_beta"] = nullptr;
    out["desirability_check"] = report.desirability_check;
    out["undesirable_norm"] = report.undesirable_norm;
    out["zero_effort"] = report.zero_effort;
    if (!report.witness_notes.empty()) out["witness_notes"] = report.witness_notes;
    atomic_write_file(args.out_path, out.dump(2) + "\n");
    return 0;
}

struct FeasibilityArgs {
    std::string belief_path;
    std::string graph_path;
    std::string out_path;
    double alpha = 1.0;
    double delta = 0.1;
};

int run_feasibility(const FeasibilityArgs& args) {
    std::optional<CausalGraph> graph;
    if (!args.graph_path.empty()) graph = load_graph_file(args.graph_path);
    const ContributionBelief belief =
        parse_belief_json(read_file(args.belief_path), graph ? &*graph : nullptr);
    const FeasibilityVerdict verdict = feasibility(belief, args.alpha, args.delta);
    json out;
    out["feasible"] = verdict.feasible;
    out["threshold_delta"] = verdict.threshold_delta;
    out["norm_value"] = verdict.norm_value;
    if (args.out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        atomic_write_file(args.out_path, out.dump(2) + "\n");
    return 0;
}

int run_witness(const std::string& which, const std::string& out_path) {
    const WitnessRecord record = nonconvexity_witness(which);
    json out;
    out["case"] = record.which;
    out["z_first"] = vector_json(record.z_first);
    out["z_second"] = vector_json(record.z_second);
    out["midpoint"] = vector_json(record.midpoint);
    out["memberships"] =
        json::array({record.member_first, record.member_second, record.member_midpoint});
    json desirable = json::array();
    for (bool b : record.desirable) desirable.push_back(b);
    out["desirable"] = desirable;
    out["p"] = record.p;
    if (record.which == "lp") out["beta"] = record.beta;
    if (out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        atomic_write_file(out_path, out.dump(2) + "\n");
    return 0;
}

int run_sweep_command(const std::string& config_path, const std::string& out_path,
                      unsigned jobs, std::uint64_t seed) {
    SweepConfig config = SweepConfig::defaults();
    config.seed = seed;
    if (!config_path.empty()) {
        const std::string text = read_file(config_path);
        config = parse_sweep_config_json(text);
        const json root = json::parse(text, nullptr, false);
        if (root.is_object() && !root.contains("seed")) config.seed = seed;
    }
    (void)jobs;  // rows are cheap at this scale; order is fixed by config either way
    const std::vector<SweepRow> rows = run_sweep(config);
    atomic_write_file(out_path, sweep_csv(rows));
    return 0;
}

int run_case_study(const std::string& out_dir, std::uint64_t seed) {
    const CausalGraph graph = build_cvd_graph();
    const Matrix contribution = contribution_matrix(graph.adjacency_matrix());

    atomic_write_file(out_dir + "/cvd_graph.json", graph_to_json(graph));
    atomic_write_file(out_dir + "/contribution.csv", matrix_csv(contribution, graph.features()));

    const std::vector<TableMuRow> table = reproduce_table_mu();
    atomic_write_file(out_dir + "/table_mu.csv", table_mu_csv(table, graph.features()));

    SweepConfig config = SweepConfig::defaults();
    config.seed = seed;
    const std::vector<SweepRow> rows = run_sweep(config);
    atomic_write_file(out_dir + "/sweep.csv", sweep_csv(rows));

    auto beta_at = [&](const std::string& classifier, double alpha, double sigma,
                       double delta) -> std::optional<double> {
        for (const SweepRow& row : rows)
            if (row.classifier == classifier && row.alpha == alpha && row.sigma == sigma &&
                row.delta == delta)
                return row.beta;
        return std::nullopt;
    };

    // One plot-data file per figure panel: beta vs sigma at fixed delta
    // (alpha = 1), and beta vs delta at fixed (alpha, sigma).
    for (double delta : {0.1, 0.3, 0.5}) {
        std::string csv = "sigma";
        for (const std::string& name : config.classifiers) csv += "," + name;
        csv += "\n";
        for (double sigma : config.sigmas) {
            csv += format_double(sigma);
            for (const std::string& name : config.classifiers) {
                const auto beta = beta_at(name, 1.0, sigma, delta);
                csv += ",";
                csv += beta ? format_double(*beta) : "";
            }
            csv += "\n";
        }
        atomic_write_file(out_dir + "/fig3_delta" + format_double(delta) + ".csv", csv);
    }
    for (double alpha : {1.0, 10.0}) {
        for (double sigma : {3.0, 1.0, 0.1}) {
            std::string csv = "delta";
            for (const std::string& name : config.classifiers) csv += "," + name;
            csv += "\n";
            for (double delta : config.deltas) {
                csv += format_double(delta);
                for (const std::string& name : config.classifiers) {
                    const auto beta = beta_at(name, alpha, sigma, delta);
                    csv += ",";
                    csv += beta ? format_double(*beta) : "";
                }
                csv += "\n";
            }
            atomic_write_file(out_dir + "/fig4_alpha" + format_double(alpha) + "_sigma" +
                                  format_double(sigma) + ".csv",
                              csv);
        }
    }
    std::cout << "case-study outputs written to " << out_dir << "\n";
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"strategic-classification toolkit: causal-graph best responses, "
                 "classifier audits, and case-study sweeps"};
    app.require_subcommand(1);

    std::uint64_t seed = default_seed();
    app.add_option("--seed", seed, "base seed for Monte-Carlo components");

    // contribution
    auto* contribution_cmd =
        app.add_subcommand("contribution", "write the contribution matrix C as CSV");
    std::string graph_path, out_path;
    contribution_cmd->add_option("--graph", graph_path, "graph JSON")->required();
    contribution_cmd->add_option("--out", out_path, "output CSV path")->required();

    // respond
    auto* respond_cmd =
        app.add_subcommand("respond", "solve the agent best response for a classifier");
    RespondArgs respond_args;
    respond_cmd->add_option("--graph", respond_args.graph_path, "graph JSON")->required();
    respond_cmd->add_option("--classifier", respond_args.classifier_path, "classifier JSON")
        ->required();
    respond_cmd->add_option("--alpha", respond_args.alpha, "score shortfall")->required();
    double respond_delta = 0.0, respond_p = 0.0;
    auto* respond_delta_opt =
        respond_cmd->add_option("--delta", respond_delta, "failure tolerance in (0, 0.5]");
    auto* respond_p_opt = respond_cmd->add_option("--p", respond_p, "cost exponent (p >= 1)");
    respond_cmd->add_option("--cost-weights", respond_args.cost_weights_path,
                            "cost model JSON file");
    respond_cmd->add_option("--out", respond_args.out_path, "output JSON path")->required();
    respond_cmd->add_flag("--verify", respond_args.verify,
                          "re-check the emitted effort against the chance margin");

    // audit
    auto* audit_cmd = app.add_subcommand("audit", "audit a classifier for beta-desirability");
    AuditArgs audit_args;
    audit_cmd->add_option("--graph", audit_args.graph_path, "graph JSON")->required();
    audit_cmd->add_option("--classifier", audit_args.classifier_path, "classifier JSON")
        ->required();
    audit_cmd->add_option("--alpha", audit_args.alpha, "score shortfall");
    audit_cmd->add_option("--beta", audit_args.beta, "desirability target in (0,1)");
    double audit_p = 0.0;
    auto* audit_p_opt = audit_cmd->add_option("--p", audit_p, "cost exponent");
    audit_cmd->add_option("--cost-weights", audit_args.cost_weights_path, "cost model JSON");
    audit_cmd->add_option("--out", audit_args.out_path, "output JSON path")->required();

    // feasibility
    auto* feasibility_cmd =
        app.add_subcommand("feasibility", "classify a chance-constrained program's feasibility");
    FeasibilityArgs feasibility_args;
    feasibility_cmd->add_option("--belief", feasibility_args.belief_path, "belief JSON")
        ->required();
    feasibility_cmd->add_option("--graph", feasibility_args.graph_path,
                                "graph JSON (required for model1/model2 beliefs)");
    feasibility_cmd->add_option("--alpha", feasibility_args.alpha, "score shortfall");
    feasibility_cmd->add_option("--delta", feasibility_args.delta, "failure tolerance")
        ->required();
    feasibility_cmd->add_option("--out", feasibility_args.out_path, "output JSON (stdout if absent)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a (classifier, alpha, sigma, delta) sweep");
    std::string sweep_config_path, sweep_out_path;
    unsigned sweep_jobs = 1;
    sweep_cmd->add_option("--config", sweep_config_path, "sweep config JSON (defaults if absent)");
    sweep_cmd->add_option("--out", sweep_out_path, "output CSV path")->required();
    sweep_cmd->add_option("--jobs", sweep_jobs, "row-level parallelism");

    // case-study
    auto* case_cmd =
        app.add_subcommand("case-study", "reproduce the cardiovascular-disease experiment");
    std::string case_out_dir;
    case_cmd->add_option("--out", case_out_dir, "output directory")->required();

    // witness
    auto* witness_cmd =
        app.add_subcommand("witness", "emit a non-convexity witness record as JSON");
    std::string witness_case, witness_out;
    witness_cmd->add_option("--case", witness_case, "l1 or lp")->required();
    witness_cmd->add_option("--out", witness_out, "output JSON (stdout if absent)");

    CLI11_PARSE(app, argc, argv);

    if (contribution_cmd->parsed()) {
        const CausalGraph graph = load_graph_file(graph_path);
        const Matrix c = contribution_matrix(graph.adjacency_matrix());
        atomic_write_file(out_path, matrix_csv(c, graph.features()));
        return 0;
    }
    if (respond_cmd->parsed()) {
        if (*respond_delta_opt) respond_args.delta = respond_delta;
        if (*respond_p_opt) respond_args.p = respond_p;
        return run_respond(respond_args);
    }
    if (audit_cmd->parsed()) {
        if (*audit_p_opt) audit_args.p = audit_p;
        return run_audit(audit_args);
    }
    if (feasibility_cmd->parsed()) return run_feasibility(feasibility_args);
    if (sweep_cmd->parsed()) return run_sweep_command(sweep_config_path, sweep_out_path,
                                                      sweep_jobs, seed);
    if (case_cmd->parsed()) return run_case_study(case_out_dir, seed);
    if (witness_cmd->parsed()) return run_witness(witness_case, witness_out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const CycleDetected& err) {
        std::cerr << "graph error: " << err.what() << "\n";
        return kExitGraph;
    } catch (const DepthExceeded& err) {
        std::cerr << "graph error: " << err.what() << "\n";
        return kExitGraph;
    } catch (const Infeasible& err) {
        std::cerr << "infeasible: " << err.what() << "\n";
        if (err.threshold_delta() >= 0.0)
            std::cerr << "feasibility threshold delta* = "
                      << stratcls::format_double(err.threshold_delta()) << "\n";
        return kExitInfeasible;
    } catch (const SchemaError& err) {
        std::cerr << "schema error: " << err.what() << "\n";
        return kExitSchema;
    } catch (const DomainError& err) {
        std::cerr << "schema error: " << err.what() << "\n";
        return kExitSchema;
    } catch (const DimensionMismatch& err) {
        std::cerr << "schema error: " << err.what() << "\n";
        return kExitSchema;
    } catch (const PartitionError& err) {
        std::cerr << "schema error: " << err.what() << "\n";
        return kExitSchema;
    } catch (const PreconditionError& err) {
        std::cerr << "schema error: " << err.what() << "\n";
        return kExitSchema;
    } catch (const UnknownClassifier& err) {
        std::cerr << "schema error: " << err.what() << "\n";
        return kExitSchema;
    } catch (const stratcls::Error& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return kExitNumerical;
    } catch (const nlohmann::json::exception& err) {
        std::cerr << "schema error: " << err.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitNumerical;
    }
}
