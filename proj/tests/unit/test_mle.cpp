#include "doctest.h"

#include <random>

#include "support.hpp"
#include "ucg/error.hpp"
#include "ucg/mle.hpp"
#include "ucg/model.hpp"

using namespace ucg;
using ucg::testing::set;

namespace {

// Gradient ascent on log det(omega) - tr(s omega) with the gradient projected
// onto the free positions. Near the optimum the objective stops resolving
// improvements, so a step is also taken when it shrinks the projected gradient.
Matrix projected_gradient(const Matrix& s, const Mask& free) {
    const auto objective = [&](const Matrix& o) {
        Eigen::LLT<Matrix> llt(o);
        if (llt.info() != Eigen::Success) return -1e300;
        const Matrix l = llt.matrixL();
        return 2.0 * l.diagonal().array().log().sum() - (s.cwiseProduct(o)).sum();
    };
    const auto gradient = [&](const Matrix& o) {
        Matrix grad = o.inverse() - s;
        for (Eigen::Index r = 0; r < grad.rows(); ++r)
            for (Eigen::Index c = 0; c < grad.cols(); ++c)
                if (!free(r, c)) grad(r, c) = 0.0;
        return grad;
    };
    Matrix o = s.diagonal().cwiseInverse().asDiagonal();
    double value = objective(o);
    Matrix grad = gradient(o);
    double step = 1.0;
    for (int it = 0; it < 1000000 && grad.cwiseAbs().maxCoeff() > 1e-14; ++it) {
        bool moved = false;
        for (step *= 2.0; step > 1e-20; step *= 0.5) {
            const Matrix cand = o + step * grad;
            const double v = objective(cand);
            if (v < -1e299) continue;
            const Matrix g = gradient(cand);
            if (v > value || g.norm() < grad.norm()) {
                o = cand;
                value = std::max(v, value);
                grad = g;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    return o;
}

double gls_objective(const Matrix& y, const Matrix& m, const Matrix& w, const Matrix& beta) {
    const Matrix r = y - beta * m;
    return (w * r * r.transpose()).trace();
}

}  // namespace

TEST_CASE("maximal cliques") {
    // triangle 0-1-2 plus pendant 3 on 2
    std::vector<std::uint64_t> adj{0b0110, 0b0101, 0b1011, 0b0100};
    const auto cliques = maximal_cliques(adj);
    CHECK(cliques == std::vector<std::vector<std::size_t>>{{0, 1, 2}, {2, 3}});
    CHECK(maximal_cliques({0, 0}) == std::vector<std::vector<std::size_t>>{{0}, {1}});
}

TEST_CASE("saturated and independence fits") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    Matrix data(3, 200);
    for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = z(rng);
    data.row(1) += 0.5 * data.row(0);
    data.row(2) -= 0.3 * data.row(1);
    const Matrix s = second_moment(data);

    Matrix full = Matrix::Identity(3, 3);
    const std::size_t sweeps = ipf(s, {0b110, 0b101, 0b011}, full, 1e-12, 50);
    CHECK((full - s.inverse()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(sweeps <= 2);

    Matrix indep = Matrix::Identity(3, 3);
    ipf(s, {0, 0, 0}, indep, 1e-12, 50);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(indep(i, i) == doctest::Approx(1.0 / s(i, i)));
    CHECK(indep(0, 1) == 0.0);
}

TEST_CASE("ipf step with a missing father edge matches projected gradient") {
    using V = std::vector<EdgeSpec>;
    const Ucg g = build_ucg({"F", "C1", "C2"}, V{{"F", "C1", EdgeKind::SolidDirected}, {"C1", "C2", EdgeKind::Undirected}});
    const UcgModel truth = random_params(g, 12);
    const Dataset d = simulate(truth, 400, 3);
    const ZeroPattern p = zero_pattern(g, set(g, {"C1", "C2"}));
    FitConfig cfg;
    cfg.ipf_tol = 1e-13;
    cfg.ipf_max = 10000;
    const IpfResult r = ipf_step(d.rows({"C1", "C2"}), d.rows({"F"}), p, cfg);
    CHECK(r.omega_kfa(1, 0) == 0.0);

    Matrix stacked(3, 400);
    stacked << d.rows({"C1", "C2"}), d.rows({"F"});
    Mask free = Mask::Constant(3, 3, true);
    free(1, 2) = free(2, 1) = false;
    const Matrix oracle = projected_gradient(second_moment(stacked), free);
    CHECK((r.omega - oracle).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("generalized least squares") {
    Matrix y(2, 4), m(2, 4);
    y << 1.0, 2.0, -1.0, 0.5, 0.3, -0.7, 1.1, 2.0;
    m << 0.4, 1.0, -0.2, 0.9, 1.5, -0.3, 0.8, 0.1;
    const Mask none = Mask::Constant(2, 2, false);
    CHECK(gls_step(y, m, Matrix::Identity(2, 2), none).isZero());

    const Mask all = Mask::Constant(2, 2, true);
    const Matrix ols = y * m.transpose() * (m * m.transpose()).inverse();
    CHECK((gls_step(y, m, Matrix::Identity(2, 2), all) - ols).cwiseAbs().maxCoeff() < 1e-12);

    Matrix w(2, 2);
    w << 2, 1, 1, 2;
    Mask diag = Mask::Constant(2, 2, false);
    diag(0, 0) = diag(1, 1) = true;
    const Matrix beta = gls_step(y, m, w, diag);
    CHECK(beta(0, 1) == 0.0);
    CHECK(beta(1, 0) == 0.0);
    // coordinate descent on the two free entries as the numeric oracle
    Matrix b = Matrix::Zero(2, 2);
    for (int sweep = 0; sweep < 2000; ++sweep)
        for (int i = 0; i < 2; ++i) {
            // objective is quadratic in b(i,i): evaluate at three points and jump to the vertex
            const double x0 = b(i, i);
            Matrix lo = b, hi = b;
            lo(i, i) = x0 - 1.0;
            hi(i, i) = x0 + 1.0;
            const double f0 = gls_objective(y, m, w, b), fl = gls_objective(y, m, w, lo), fh = gls_objective(y, m, w, hi);
            b(i, i) = x0 - (fh - fl) / (2.0 * (fh - 2.0 * f0 + fl));
        }
    CHECK((beta - b).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(gls_objective(y, m, w, beta) <= gls_objective(y, m, w, b) + 1e-12);
}

TEST_CASE("fits without mothers stop after one iteration") {
    using V = std::vector<EdgeSpec>;
    const Ucg g = build_ucg({"F1", "F2", "C1", "C2"}, V{{"F1", "C1", EdgeKind::SolidDirected},
                                                      {"F2", "C2", EdgeKind::SolidDirected},
                                                      {"C1", "C2", EdgeKind::Undirected}});
    const UcgModel truth = random_params(g, 2);
    const FitResult fr = fit(g, simulate(truth, 1000, 6));
    CHECK(fr.report.iterations == 1);
    CHECK(fr.report.converged);
    validate_model(fr.model);
}

TEST_CASE("mothers only recovers per node least squares") {
    using V = std::vector<EdgeSpec>;
    const Ucg g = build_ucg({"M1", "M2", "C1", "C2"}, V{{"M1", "C1", EdgeKind::DashedDirected},
                                                      {"M2", "C1", EdgeKind::DashedDirected},
                                                      {"M2", "C2", EdgeKind::DashedDirected}});
    const UcgModel truth = random_params(g, 7);
    const Dataset d = simulate(truth, 500, 8);
    const FitResult fr = fit(g, d);
    CHECK(fr.report.converged);
    for (const ComponentParams& cp : fr.model.components) {
        if (cp.k.front() != g.index_of("C1")) continue;
        const Matrix y = d.rows({"C1"}), m = d.rows({"M1", "M2"});
        const Matrix ols = y * m.transpose() * (m * m.transpose()).inverse();
        CHECK((cp.beta_mo - ols).cwiseAbs().maxCoeff() < 1e-9);
        const Matrix r = y - ols * m;
        CHECK(cp.omega_kk(0, 0) == doctest::Approx(1.0 / second_moment(r)(0, 0)).epsilon(1e-9));
    }
}

TEST_CASE("likelihood never decreases") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Ucg g = random_ucg(3, 3, 5, 0.4, seed);
        const UcgModel truth = random_params(g, seed, {0.0, true});
        const FitResult fr = fit(g, simulate(truth, 300, seed + 50));
        for (const ComponentFit& cf : fr.report.components)
            for (std::size_t i = 1; i < cf.log_likelihood.size(); ++i)
                CHECK(cf.log_likelihood[i] >= cf.log_likelihood[i - 1] - 1e-9);
    }
}

TEST_CASE("estimates approach the truth") {
    const Ucg g = random_ucg(3, 3, 5, 0.5, 3);
    const UcgModel truth = random_params(g, 4, {0.0, true});
    const FitResult fr = fit(g, simulate(truth, 200000, 5));
    const FitMetrics fm = metrics(truth, fr.model, simulate(truth, 10, 1));
    for (double v : fm.beta_mo.relative) CHECK(v < 0.1);
}

TEST_CASE("metric formulas") {
    using V = std::vector<EdgeSpec>;
    const Ucg g = build_ucg({"M", "C"}, V{{"M", "C", EdgeKind::DashedDirected}});
    UcgModel truth;
    truth.graph = g;
    truth.components = {ComponentParams{{0}, {}, {}, Matrix(1, 0), Matrix::Constant(1, 1, 1.0), Matrix(1, 0)},
                        ComponentParams{{1}, {0}, {}, Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0), Matrix(1, 0)}};
    const Dataset d = simulate(truth, 50, 2);
    const FitMetrics same = metrics(truth, truth, d);
    for (double v : same.beta_mo.relative) CHECK(v == 0.0);
    for (double v : same.omega_kk.relative) CHECK(v == 0.0);
    CHECK(same.residual_difference == 0.0);

    UcgModel est = truth;
    est.components[1].beta_mo(0, 0) = 1.0;
    const FitMetrics half = metrics(truth, est, d);
    REQUIRE(half.beta_mo.relative.size() == 1);
    CHECK(half.beta_mo.relative[0] == doctest::Approx(0.5));

    UcgModel zero = truth;
    zero.components[1].beta_mo(0, 0) = 0.0;
    UcgModel near = zero;
    near.components[1].beta_mo(0, 0) = 0.06;
    const FitMetrics z = metrics(zero, near, d);
    CHECK(z.beta_mo.relative.empty());
    REQUIRE(z.beta_mo.absolute.size() == 1);
    CHECK(z.beta_mo.absolute[0] == doctest::Approx(0.06));

    UcgModel other;
    other.graph = build_ucg({"M", "C"}, V{{"M", "C", EdgeKind::SolidDirected}});
    other.components = {truth.components[0],
                        ComponentParams{{1}, {}, {0}, Matrix(1, 0), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 0.5)}};
    CHECK_THROWS_AS(metrics(truth, other, d), Error);
}

TEST_CASE("configuration and data checks") {
    FitConfig bad;
    bad.outer_tol = 0.0;
    CHECK_THROWS_AS(validate_config(bad), Error);
    bad = FitConfig{};
    bad.ipf_max = 0;
    CHECK_THROWS_AS(validate_config(bad), Error);
    const Ucg g = ucg::testing::spillover_graph();
    CHECK_THROWS_AS(fit(g, simulate(random_params(g, 1), 5, 1)), Error);
}
