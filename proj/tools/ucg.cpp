// ucg: command-line front end for unified chain graphs.
//
// Exit status: 0 success, 1 negative answer (separate, verify), 2 error, 64 usage.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ucg/causal.hpp"
#include "ucg/dataset_io.hpp"
#include "ucg/error.hpp"
#include "ucg/experiment.hpp"
#include "ucg/graph_io.hpp"
#include "ucg/markov.hpp"
#include "ucg/mle.hpp"
#include "ucg/model_io.hpp"
#include "ucg/separation.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kFailure = 2;
constexpr int kUsage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        ucg::write_text_file(out, text);
}

ucg::NodeSet names_to_set(const ucg::Ucg& g, const std::vector<std::string>& names) {
    ucg::NodeSet s(g.size());
    for (const auto& n : names) {
        if (!g.has_node(n)) throw ucg::Error(ucg::ErrorCode::UnknownNode, "unknown node '" + n + "'");
        s.insert(g.index_of(n));
    }
    return s;
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
        throw UsageError("expected NAME=VALUE, got '" + text + "'");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

json statement_json(const ucg::Ucg& g, const ucg::IndependenceStatement& s) {
    return {{"origin", std::string(ucg::to_string(s.origin))},
            {"x", g.names_of(s.x)},
            {"y", g.names_of(s.y)},
            {"z", g.names_of(s.z)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unified chain graphs: separation, Markov properties, estimation and interventions"};
    app.require_subcommand(1);

    std::string graph_path, model_path, data_path, out_path, report_path, config_path, log_path, property = "all";
    std::vector<std::string> xs, ys, zs, dos, mechanisms;
    double tol = 1e-8;
    std::size_t n = 0, replicates = 0;
    std::uint64_t seed = 1;

    auto* validate = app.add_subcommand("validate", "Check a graph file and print its chain components");
    validate->add_option("--graph", graph_path, "Graph JSON")->required();

    auto* separate = app.add_subcommand("separate", "Decide X separated from Y given Z");
    separate->add_option("--graph", graph_path, "Graph JSON")->required();
    separate->add_option("--x", xs, "Nodes of X")->required();
    separate->add_option("--y", ys, "Nodes of Y")->required();
    separate->add_option("--z", zs, "Nodes of Z");

    auto* verify = app.add_subcommand("verify", "Check a model against the Markov properties of its graph");
    verify->add_option("--graph", graph_path, "Graph JSON (must match the model's graph)");
    verify->add_option("--model", model_path, "Model JSON")->required();
    verify->add_option("--property", property, "local|pairwise|block|global|all")
        ->check(CLI::IsMember({"local", "pairwise", "block", "global", "all"}));
    verify->add_option("--tol", tol, "Absolute tolerance on conditional covariances");
    verify->add_option("--out", out_path, "Report JSON (default: standard output)");

    auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood fit of a graph to data");
    fit_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
    fit_cmd->add_option("--data", data_path, "Dataset CSV, one row per variable")->required();
    fit_cmd->add_option("--config", config_path, "Fit configuration JSON");
    fit_cmd->add_option("--out", out_path, "Fitted model JSON")->required();
    fit_cmd->add_option("--report", report_path, "Fit report JSON");

    auto* simulate_cmd = app.add_subcommand("simulate", "Draw a dataset from a model");
    simulate_cmd->add_option("--model", model_path, "Model JSON")->required();
    simulate_cmd->add_option("--n", n, "Number of instances")->required()->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", seed, "Random seed");
    simulate_cmd->add_option("--out", out_path, "Dataset CSV (default: standard output)");

    auto* intervene = app.add_subcommand("intervene", "Interventional distribution under do(X = x)");
    intervene->add_option("--model", model_path, "Model JSON")->required();
    intervene->add_option("--do", dos, "NAME=VALUE assignments")->required();
    intervene->add_option("--mechanism", mechanisms, "NAME=interfering|non_interfering (default interfering)");
    intervene->add_option("--out", out_path, "Distribution JSON (default: standard output)");

    auto* experiment = app.add_subcommand("experiment", "Run the parameter-estimation study");
    experiment->add_option("--config", config_path, "Experiment configuration JSON")->required();
    experiment->add_option("--replicates", replicates, "Override the replicate count");
    experiment->add_option("--out", out_path, "Results CSV (default: standard output)");
    experiment->add_option("--log", log_path, "Per-replicate JSON log");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*validate) {
            const ucg::Ucg g = ucg::load_graph(graph_path);
            const auto dec = ucg::chain_decomposition(g);
            std::cout << "valid: " << g.size() << " nodes, " << g.edges().size() << " edges\n";
            for (const auto& comp : dec.components) {
                std::string s;
                for (const auto& name : g.names_of(comp)) s += (s.empty() ? "" : ", ") + name;
                std::cout << "component {" << s << "}\n";
            }
            return kOk;
        }
        if (*separate) {
            const ucg::Ucg g = ucg::load_graph(graph_path);
            const bool sep = ucg::is_separated(g, names_to_set(g, xs), names_to_set(g, ys), names_to_set(g, zs));
            std::cout << (sep ? "separated" : "connected") << "\n";
            return sep ? kOk : kNegative;
        }
        if (*verify) {
            const ucg::UcgModel m = ucg::load_model(model_path);
            if (!graph_path.empty() &&
                ucg::serialize_graph(ucg::load_graph(graph_path)) != ucg::serialize_graph(m.graph))
                throw ucg::Error(ucg::ErrorCode::GraphMismatch, "model was built for a different graph");
            std::vector<ucg::Suite> suites;
            if (property == "all")
                suites = {ucg::Suite::Global, ucg::Suite::Block, ucg::Suite::Pairwise, ucg::Suite::Local};
            else
                suites = {*ucg::suite_from_string(property)};
            const ucg::JointGaussian jg = ucg::assemble_joint(m);
            json report = {{"tol", tol}, {"properties", json::object()}};
            bool ok = true;
            for (ucg::Suite s : suites) {
                const auto r = ucg::check_statements(jg, ucg::enumerate_suite(m.graph, s), tol);
                json failures = json::array();
                for (const auto& f : r.failures) {
                    json item = statement_json(m.graph, f.statement);
                    item["residual"] = f.residual;
                    failures.push_back(item);
                }
                report["properties"][std::string(ucg::to_string(s))] = {
                    {"total", r.total}, {"dropped", r.dropped}, {"passed", r.ok()}, {"failures", failures}};
                ok = ok && r.ok();
            }
            report["passed"] = ok;
            emit(report.dump(2) + "\n", out_path);
            return ok ? kOk : kNegative;
        }
        if (*fit_cmd) {
            const ucg::Ucg g = ucg::load_graph(graph_path);
            const ucg::Dataset d = ucg::load_dataset(data_path);
            ucg::FitConfig cfg;
            if (!config_path.empty()) {
                json j;
                try {
                    j = json::parse(ucg::read_text_file(config_path));
                    cfg.outer_tol = j.value("outer_tol", cfg.outer_tol);
                    cfg.outer_max = j.value("outer_max", cfg.outer_max);
                    cfg.ipf_tol = j.value("ipf_tol", cfg.ipf_tol);
                    cfg.ipf_max = j.value("ipf_max", cfg.ipf_max);
                } catch (const json::exception& e) {
                    throw ucg::Error(ucg::ErrorCode::ParseError, e.what());
                }
            }
            const ucg::FitResult r = ucg::fit(g, d, cfg);
            ucg::save_model(r.model, out_path);
            if (!report_path.empty()) {
                json comps = json::array();
                for (const auto& c : r.report.components) {
                    std::vector<std::string> k;
                    for (auto v : c.k) k.push_back(g.name(v));
                    comps.push_back({{"k", k},
                                     {"iterations", c.iterations},
                                     {"converged", c.converged},
                                     {"log_likelihood", c.log_likelihood}});
                }
                json rep = {{"iterations", r.report.iterations}, {"converged", r.report.converged}, {"components", comps}};
                ucg::write_text_file(report_path, rep.dump(2) + "\n");
            }
            return kOk;
        }
        if (*simulate_cmd) {
            const ucg::UcgModel m = ucg::load_model(model_path);
            emit(ucg::serialize_dataset(ucg::simulate(m, n, seed)), out_path);
            return kOk;
        }
        if (*intervene) {
            const ucg::UcgModel m = ucg::load_model(model_path);
            ucg::InterventionSpec spec;
            for (const auto& a : dos) {
                const auto [name, value] = split_assignment(a);
                try {
                    std::size_t used = 0;
                    spec.assignments[name] = std::stod(value, &used);
                    if (used != value.size()) throw std::invalid_argument(value);
                } catch (const std::exception&) {
                    throw UsageError("bad value in '" + a + "'");
                }
                spec.mechanism[name] = ucg::Mechanism::Interfering;
            }
            for (const auto& a : mechanisms) {
                const auto [name, kind] = split_assignment(a);
                const auto mech = ucg::mechanism_from_string(kind);
                if (!mech) throw UsageError("unknown mechanism '" + kind + "'");
                if (!spec.assignments.count(name)) throw UsageError("mechanism for '" + name + "' without --do");
                spec.mechanism[name] = *mech;
            }
            const ucg::JointGaussian jg = ucg::identified_effect(m, spec);
            json out = ucg::gaussian_to_json(jg);
            json d = json::object();
            for (const auto& [name, value] : spec.assignments) d[name] = value;
            out["do"] = d;
            emit(out.dump(2) + "\n", out_path);
            return kOk;
        }
        if (*experiment) {
            json j;
            try {
                j = json::parse(ucg::read_text_file(config_path));
            } catch (const json::exception& e) {
                throw ucg::Error(ucg::ErrorCode::ParseError, e.what());
            }
            ucg::ExperimentConfig cfg = ucg::experiment_config_from_json(j);
            if (replicates > 0) cfg.replicates = replicates;
            const ucg::ExperimentResult r = ucg::run_experiment(cfg);
            emit(ucg::rows_to_csv(r.rows), out_path);
            if (!log_path.empty()) ucg::write_text_file(log_path, ucg::replicate_log_json(r, cfg).dump(2) + "\n");
            if (r.failed_replicates > 0) std::cerr << r.failed_replicates << " replicate(s) failed\n";
            return kOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    } catch (const ucg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}
