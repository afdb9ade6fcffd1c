#include "ucg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <thread>

#include "ucg/error.hpp"
#include "ucg/random.hpp"

namespace ucg {

using nlohmann::json;

ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig c;
    try {
        c.replicates = j.value("replicates", c.replicates);
        c.n_mo = j.value("n_mo", c.n_mo);
        c.n_fa = j.value("n_fa", c.n_fa);
        c.n_k = j.value("n_k", c.n_k);
        c.p_edge = j.value("p_edge", c.p_edge);
        c.sample_sizes = j.value("sample_sizes", c.sample_sizes);
        c.zero_fraction = j.value("zero_fraction", c.zero_fraction);
        c.master_seed = j.value("master_seed", c.master_seed);
        c.threads = j.value("threads", c.threads);
        if (j.contains("fit")) {
            const auto& f = j.at("fit");
            c.fit.outer_tol = f.value("outer_tol", c.fit.outer_tol);
            c.fit.outer_max = f.value("outer_max", c.fit.outer_max);
            c.fit.ipf_tol = f.value("ipf_tol", c.fit.ipf_tol);
            c.fit.ipf_max = f.value("ipf_max", c.fit.ipf_max);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    validate_experiment_config(c);
    return c;
}

json experiment_config_to_json(const ExperimentConfig& c) {
    return {{"replicates", c.replicates},
            {"n_mo", c.n_mo},
            {"n_fa", c.n_fa},
            {"n_k", c.n_k},
            {"p_edge", c.p_edge},
            {"sample_sizes", c.sample_sizes},
            {"zero_fraction", c.zero_fraction},
            {"master_seed", c.master_seed},
            {"threads", c.threads},
            {"fit",
             {{"outer_tol", c.fit.outer_tol},
              {"outer_max", c.fit.outer_max},
              {"ipf_tol", c.fit.ipf_tol},
              {"ipf_max", c.fit.ipf_max}}}};
}

void validate_experiment_config(const ExperimentConfig& c) {
    if (c.replicates == 0 || c.n_mo == 0 || c.n_fa == 0 || c.n_k == 0)
        throw Error(ErrorCode::InvalidArgument, "replicates and node counts must be positive");
    if (!(c.p_edge > 0.0 && c.p_edge < 1.0)) throw Error(ErrorCode::InvalidArgument, "p_edge must lie in (0, 1)");
    if (!(c.zero_fraction >= 0.0 && c.zero_fraction < 1.0))
        throw Error(ErrorCode::InvalidArgument, "zero_fraction must lie in [0, 1)");
    if (c.sample_sizes.empty()) throw Error(ErrorCode::InvalidArgument, "no sample sizes");
    for (auto n : c.sample_sizes)
        if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample sizes must be positive");
    validate_config(c.fit);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

QuantileRow summarize(const std::string& criterion, std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double mean =
        values.empty() ? nan : std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return {criterion,
            values.empty() ? nan : values.front(),
            quantile_sorted(values, 0.25),
            quantile_sorted(values, 0.5),
            mean,
            quantile_sorted(values, 0.75),
            values.empty() ? nan : values.back()};
}

const QuantileRow& ExperimentResult::row(const std::string& criterion) const {
    for (const auto& r : rows)
        if (r.criterion == criterion) return r;
    throw Error(ErrorCode::InvalidArgument, "no row '" + criterion + "'");
}

namespace {

ReplicateLog run_replicate(const ExperimentConfig& cfg, std::size_t r) {
    ReplicateLog log;
    log.replicate = r;
    log.seed = splitmix64(cfg.master_seed + r);
    try {
        const Ucg g = random_ucg(cfg.n_mo, cfg.n_fa, cfg.n_k, cfg.p_edge, splitmix64(log.seed + 0));
        log.edges_solid = g.count_edges(EdgeKind::SolidDirected);
        log.edges_dashed = g.count_edges(EdgeKind::DashedDirected);
        log.edges_undirected = g.count_edges(EdgeKind::Undirected);
        ParamOptions opt;
        opt.zero_fraction = cfg.zero_fraction;
        opt.dense_root = true;
        const UcgModel truth = random_params(g, splitmix64(log.seed + 1), opt);
        for (std::size_t s = 0; s < cfg.sample_sizes.size(); ++s) {
            const Dataset data = simulate(truth, cfg.sample_sizes[s], splitmix64(log.seed + 2 + s));
            const FitResult fitted = fit(g, data, cfg.fit);
            const FitMetrics mt = metrics(truth, fitted.model, data);
            log.iterations.push_back(fitted.report.iterations);
            log.converged.push_back(fitted.report.converged);
            log.residual_difference.push_back(mt.residual_difference);
            double worst = std::numeric_limits<double>::infinity();
            for (const auto& cf : fitted.report.components)
                for (std::size_t i = 1; i < cf.log_likelihood.size(); ++i)
                    worst = std::min(worst, cf.log_likelihood[i] - cf.log_likelihood[i - 1]);
            log.worst_likelihood_step.push_back(worst);
            log.metrics.push_back(mt);
        }
    } catch (const Error& e) {
        log.failed = true;
        log.error = e.what();
    }
    return log;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate_experiment_config(cfg);
    ExperimentResult result;
    result.replicates.resize(cfg.replicates);
    std::size_t threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    threads = std::min(threads, cfg.replicates);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t r = next++; r < cfg.replicates; r = next++) result.replicates[r] = run_replicate(cfg, r);
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<double> solid, dashed, undirected;
    for (const auto& log : result.replicates) {
        if (log.failed) {
            ++result.failed_replicates;
            continue;
        }
        solid.push_back(static_cast<double>(log.edges_solid));
        dashed.push_back(static_cast<double>(log.edges_dashed));
        undirected.push_back(static_cast<double>(log.edges_undirected));
    }
    result.rows.push_back(summarize("edges/solid", solid));
    result.rows.push_back(summarize("edges/dashed", dashed));
    result.rows.push_back(summarize("edges/undirected", undirected));
    for (std::size_t s = 0; s < cfg.sample_sizes.size(); ++s) {
        const std::string prefix = "n=" + std::to_string(cfg.sample_sizes[s]) + "/";
        std::vector<double> iterations, residual, weighted;
        BlockDiffs kk, kfa, bfa, bmo;
        const auto pool = [](BlockDiffs& into, const BlockDiffs& from) {
            into.relative.insert(into.relative.end(), from.relative.begin(), from.relative.end());
            into.absolute.insert(into.absolute.end(), from.absolute.begin(), from.absolute.end());
        };
        for (const auto& log : result.replicates) {
            if (log.failed) continue;
            iterations.push_back(static_cast<double>(log.iterations[s]));
            residual.push_back(log.metrics[s].residual_difference);
            weighted.push_back(log.metrics[s].weighted_residual_difference);
            pool(kk, log.metrics[s].omega_kk);
            pool(kfa, log.metrics[s].omega_kfa);
            pool(bfa, log.metrics[s].beta_fa);
            pool(bmo, log.metrics[s].beta_mo);
        }
        result.rows.push_back(summarize(prefix + "iterations", iterations));
        result.rows.push_back(summarize(prefix + "omega_kk_relative", kk.relative));
        result.rows.push_back(summarize(prefix + "omega_kfa_relative", kfa.relative));
        result.rows.push_back(summarize(prefix + "beta_fa_relative", bfa.relative));
        result.rows.push_back(summarize(prefix + "beta_mo_relative", bmo.relative));
        if (cfg.zero_fraction > 0.0) {
            result.rows.push_back(summarize(prefix + "omega_kk_absolute", kk.absolute));
            result.rows.push_back(summarize(prefix + "omega_kfa_absolute", kfa.absolute));
            result.rows.push_back(summarize(prefix + "beta_fa_absolute", bfa.absolute));
            result.rows.push_back(summarize(prefix + "beta_mo_absolute", bmo.absolute));
        }
        result.rows.push_back(summarize(prefix + "residual_difference", residual));
        result.rows.push_back(summarize(prefix + "weighted_residual_difference", weighted));
    }
    return result;
}

std::string rows_to_csv(const std::vector<QuantileRow>& rows) {
    std::string out = "criterion,min,q1,median,mean,q3,max\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.criterion.c_str(), r.min, r.q1, r.median,
                      r.mean, r.q3, r.max);
        out += buf;
    }
    return out;
}

json replicate_log_json(const ExperimentResult& r, const ExperimentConfig& cfg) {
    json reps = json::array();
    for (const auto& log : r.replicates) {
        json j = {{"replicate", log.replicate}, {"seed", log.seed}, {"failed", log.failed}};
        if (log.failed) {
            j["error"] = log.error;
        } else {
            j["edges"] = {{"solid", log.edges_solid}, {"dashed", log.edges_dashed}, {"undirected", log.edges_undirected}};
            json sizes = json::array();
            for (std::size_t s = 0; s < log.iterations.size(); ++s)
                sizes.push_back({{"n", cfg.sample_sizes[s]},
                                 {"iterations", log.iterations[s]},
                                 {"converged", static_cast<bool>(log.converged[s])},
                                 {"residual_difference", log.residual_difference[s]},
                                 {"worst_likelihood_step", log.worst_likelihood_step[s]}});
            j["fits"] = sizes;
        }
        reps.push_back(j);
    }
    return {{"config", experiment_config_to_json(cfg)}, {"failed_replicates", r.failed_replicates}, {"replicates", reps}};
}

}  // namespace ucg
