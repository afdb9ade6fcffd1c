#ifndef UCG_EXPERIMENT_HPP
#define UCG_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucg/mle.hpp"

namespace ucg {

struct ExperimentConfig {
    std::size_t replicates = 100;
    std::size_t n_mo = 5;
    std::size_t n_fa = 5;
    std::size_t n_k = 10;
    double p_edge = 0.2;
    std::vector<std::size_t> sample_sizes{500, 2500, 5000};
    double zero_fraction = 0.0;
    std::uint64_t master_seed = 1;
    FitConfig fit;
    /// Worker threads; 0 means one per hardware thread.
    std::size_t threads = 0;
};

/// Field names as in the struct; missing fields keep their defaults.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);
void validate_experiment_config(const ExperimentConfig& cfg);

struct QuantileRow {
    std::string criterion;
    double min, q1, median, mean, q3, max;
};

/// Type-7 quantile (linear interpolation between order statistics) of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p);
QuantileRow summarize(const std::string& criterion, std::vector<double> values);

struct ReplicateLog {
    std::size_t replicate;
    std::uint64_t seed;
    bool failed = false;
    std::string error;
    std::size_t edges_solid = 0, edges_dashed = 0, edges_undirected = 0;
    std::vector<std::size_t> iterations;        // per sample size
    std::vector<bool> converged;                // per sample size
    std::vector<double> residual_difference;    // per sample size
    /// Most negative step of the per-instance log-likelihood over outer iterations, per sample size.
    std::vector<double> worst_likelihood_step;
    std::vector<FitMetrics> metrics;            // per sample size
};

struct ExperimentResult {
    std::vector<QuantileRow> rows;
    std::vector<ReplicateLog> replicates;
    std::size_t failed_replicates = 0;

    /// The row with this label; throws InvalidArgument if absent.
    const QuantileRow& row(const std::string& criterion) const;
};

/// Per replicate r (seed splitmix64(master_seed + r)): random graph, random
/// parameters with a dense parent block, then for each sample size a fresh
/// sample, a fit and its metrics. Rows pool every parameter of every replicate.
/// Labels: "edges/solid", "edges/dashed", "edges/undirected" and per size
/// "n=<size>/iterations", ".../omega_kk_relative", ".../omega_kfa_relative",
/// ".../beta_fa_relative", ".../beta_mo_relative", the matching "_absolute"
/// rows for zeroed parameters, ".../residual_difference" and
/// ".../weighted_residual_difference".
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Header `criterion,min,q1,median,mean,q3,max`, one line per row.
std::string rows_to_csv(const std::vector<QuantileRow>& rows);
nlohmann::json replicate_log_json(const ExperimentResult& r, const ExperimentConfig& cfg);

}  // namespace ucg

#endif  // UCG_EXPERIMENT_HPP
