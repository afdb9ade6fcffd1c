#include "doctest.h"

#include <algorithm>

#include "ucg/error.hpp"
#include "ucg/experiment.hpp"

using namespace ucg;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.replicates = 4;
    cfg.n_mo = 2;
    cfg.n_fa = 2;
    cfg.n_k = 4;
    cfg.p_edge = 0.5;
    cfg.sample_sizes = {100, 400};
    cfg.master_seed = 9;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST_CASE("type 7 quantiles") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 1.0) == 4.0);
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_sorted(v, 0.75) == doctest::Approx(3.25));
    CHECK(quantile_sorted({5.0}, 0.3) == 5.0);
    const QuantileRow r = summarize("x", {4, 1, 3, 2, 10});
    CHECK(r.min == 1.0);
    CHECK(r.median == 3.0);
    CHECK(r.mean == doctest::Approx(4.0));
    CHECK(r.max == 10.0);
    CHECK(r.q1 <= r.median);
    CHECK(r.median <= r.q3);
}

TEST_CASE("fixed seeds reproduce the table, whatever the thread count") {
    const ExperimentConfig cfg = small_config();
    const auto a = rows_to_csv(run_experiment(cfg).rows);
    const auto b = rows_to_csv(run_experiment(cfg).rows);
    CHECK(a == b);
    ExperimentConfig threaded = cfg;
    threaded.threads = 3;
    CHECK(rows_to_csv(run_experiment(threaded).rows) == a);
    CHECK(a.rfind("criterion,min,q1,median,mean,q3,max\n", 0) == 0);
    ExperimentConfig other = cfg;
    other.master_seed = 10;
    CHECK(rows_to_csv(run_experiment(other).rows) != a);
}

TEST_CASE("rows cover each sample size") {
    ExperimentConfig cfg = small_config();
    cfg.zero_fraction = 0.25;
    const ExperimentResult r = run_experiment(cfg);
    CHECK(r.failed_replicates == 0);
    CHECK(r.replicates.size() == 4);
    for (const char* label : {"edges/solid", "edges/dashed", "edges/undirected", "n=100/iterations",
                              "n=400/beta_mo_relative", "n=400/omega_kk_relative", "n=100/beta_fa_relative",
                              "n=100/omega_kfa_relative", "n=400/residual_difference",
                              "n=100/weighted_residual_difference"})
        CHECK_NOTHROW(r.row(label));
    CHECK_THROWS_AS(r.row("n=7/iterations"), Error);
    for (const QuantileRow& q : r.rows) {
        CHECK(q.min <= q.q1);
        CHECK(q.q1 <= q.median);
        CHECK(q.median <= q.q3);
        CHECK(q.q3 <= q.max);
    }
    const auto log = replicate_log_json(r, cfg);
    CHECK(log.at("replicates").size() == 4);
}

TEST_CASE("config json") {
    ExperimentConfig cfg = small_config();
    cfg.fit.outer_max = 7;
    const ExperimentConfig back = experiment_config_from_json(experiment_config_to_json(cfg));
    CHECK(back.replicates == 4);
    CHECK(back.sample_sizes == cfg.sample_sizes);
    CHECK(back.fit.outer_max == 7);
    CHECK(experiment_config_from_json(nlohmann::json::object()).n_k == 10);
    ExperimentConfig bad = cfg;
    bad.p_edge = 1.0;
    CHECK_THROWS_AS(validate_experiment_config(bad), Error);
    bad = cfg;
    bad.replicates = 0;
    CHECK_THROWS_AS(validate_experiment_config(bad), Error);
    bad = cfg;
    bad.sample_sizes.clear();
    CHECK_THROWS_AS(validate_experiment_config(bad), Error);
}
