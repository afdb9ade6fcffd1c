#include "ucg/mle.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "ucg/error.hpp"
#include "ucg/graph_io.hpp"

namespace ucg {

void validate_config(const FitConfig& cfg) {
    if (!(cfg.outer_tol > 0.0) || !(cfg.ipf_tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "fit tolerances must be positive");
    if (cfg.outer_max < 1 || cfg.ipf_max < 1) throw Error(ErrorCode::InvalidArgument, "iteration caps must be at least 1");
}

std::vector<std::vector<std::size_t>> maximal_cliques(const std::vector<std::uint64_t>& adjacency) {
    const std::size_t n = adjacency.size();
    if (n > 64) throw Error(ErrorCode::GraphTooLarge, "clique enumeration limited to 64 nodes");
    std::vector<std::vector<std::size_t>> out;
    const auto bits = [](std::uint64_t m) {
        std::vector<std::size_t> v;
        while (m) {
            v.push_back(static_cast<std::size_t>(std::countr_zero(m)));
            m &= m - 1;
        }
        return v;
    };
    const auto bk = [&](auto&& self, std::uint64_t r, std::uint64_t p, std::uint64_t x) -> void {
        if (p == 0 && x == 0) {
            out.push_back(bits(r));
            return;
        }
        // Pivot on the candidate with most neighbours in p.
        std::uint64_t px = p | x;
        std::size_t pivot = static_cast<std::size_t>(std::countr_zero(px));
        int best = -1;
        for (std::size_t u : bits(px)) {
            const int c = std::popcount(p & adjacency[u]);
            if (c > best) {
                best = c;
                pivot = u;
            }
        }
        for (std::size_t v : bits(p & ~adjacency[pivot])) {
            const std::uint64_t bit = std::uint64_t{1} << v;
            self(self, r | bit, p & adjacency[v], x & adjacency[v]);
            p &= ~bit;
            x |= bit;
        }
    };
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    if (n > 0) bk(bk, 0, all, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t ipf(const Matrix& s, const std::vector<std::uint64_t>& adjacency, Matrix& omega, double tol,
                std::size_t max_sweeps) {
    const auto cliques = maximal_cliques(adjacency);
    std::vector<Matrix> target;
    for (const auto& c : cliques) {
        const Matrix s_cc = submatrix(s, c, c);
        if (!is_positive_definite(s_cc))
            throw Error(ErrorCode::SingularSampleCovariance, "sample covariance of a clique is not positive definite");
        target.push_back(spd_inverse(s_cc));
    }
    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        const Matrix before = omega;
        for (std::size_t k = 0; k < cliques.size(); ++k) {
            const auto& c = cliques[k];
            const Matrix sigma = spd_inverse(omega);
            const Matrix update = target[k] - spd_inverse(submatrix(sigma, c, c));
            Matrix block = submatrix(omega, c, c) + update;
            set_submatrix(omega, c, c, block);
            omega = symmetrize(omega);
        }
        if (max_abs(omega - before) < tol) return sweep;
    }
    return max_sweeps;
}

IpfResult ipf_step(const Matrix& residuals, const Matrix& fathers, const ZeroPattern& pattern, const FitConfig& cfg,
                   const Matrix& start) {
    const auto nk = static_cast<Eigen::Index>(pattern.k.size());
    const auto nf = static_cast<Eigen::Index>(pattern.fa.size());
    if (residuals.rows() != nk || fathers.rows() != nf || residuals.cols() != fathers.cols())
        throw Error(ErrorCode::InvalidArgument, "residual and father data do not match the pattern");
    const Eigen::Index p = nk + nf;
    Matrix stacked(p, residuals.cols());
    stacked << residuals, fathers;
    const Matrix s = second_moment(stacked);

    std::vector<std::uint64_t> adj(static_cast<std::size_t>(p), 0);
    const auto join = [&](Eigen::Index a, Eigen::Index b) {
        adj[a] |= std::uint64_t{1} << b;
        adj[b] |= std::uint64_t{1} << a;
    };
    for (Eigen::Index a = 0; a < nf; ++a)
        for (Eigen::Index b = a + 1; b < nf; ++b) join(nk + a, nk + b);
    for (Eigen::Index a = 0; a < nk; ++a) {
        for (Eigen::Index b = a + 1; b < nk; ++b)
            if (pattern.omega_kk(a, b)) join(a, b);
        for (Eigen::Index f = 0; f < nf; ++f)
            if (pattern.omega_fa(a, f)) join(a, nk + f);
    }

    Matrix omega;
    if (start.rows() == p && start.cols() == p) {
        omega = start;
    } else {
        omega = Matrix::Zero(p, p);
        for (Eigen::Index i = 0; i < p; ++i) {
            if (!(s(i, i) > 0.0)) throw Error(ErrorCode::SingularSampleCovariance, "a variable has zero sample variance");
            omega(i, i) = 1.0 / s(i, i);
        }
    }
    IpfResult r;
    r.sweeps = ipf(s, adj, omega, cfg.ipf_tol, cfg.ipf_max);
    // Clean structural zeros of round-off.
    for (Eigen::Index a = 0; a < p; ++a)
        for (Eigen::Index b = 0; b < p; ++b)
            if (a != b && !((adj[a] >> b) & 1u)) omega(a, b) = 0.0;
    r.omega = omega;
    r.omega_kk = omega.topLeftCorner(nk, nk);
    r.omega_kfa = omega.topRightCorner(nk, nf);
    return r;
}

Matrix gls_step(const Matrix& y, const Matrix& m, const Matrix& w, const Mask& free) {
    const Eigen::Index nk = y.rows(), nm = m.rows();
    if (m.cols() != y.cols() || w.rows() != nk || w.cols() != nk || free.rows() != nk || free.cols() != nm)
        throw Error(ErrorCode::InvalidArgument, "generalized least squares inputs do not conform");
    std::vector<std::pair<Eigen::Index, Eigen::Index>> coords;
    for (Eigen::Index i = 0; i < nk; ++i)
        for (Eigen::Index j = 0; j < nm; ++j)
            if (free(i, j)) coords.emplace_back(i, j);
    Matrix beta = Matrix::Zero(nk, nm);
    if (coords.empty()) return beta;
    const Matrix mm = m * m.transpose();
    const Matrix rhs_full = w * y * m.transpose();
    const auto q = static_cast<Eigen::Index>(coords.size());
    Matrix a(q, q);
    Vector rhs(q);
    for (Eigen::Index r = 0; r < q; ++r) {
        const auto [i, j] = coords[r];
        rhs(r) = rhs_full(i, j);
        for (Eigen::Index c = 0; c < q; ++c) {
            const auto [k, l] = coords[c];
            a(r, c) = w(i, k) * mm(l, j);
        }
    }
    Eigen::LLT<Matrix> llt(symmetrize(a));
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "generalized least squares system is singular");
    const Vector x = llt.solve(rhs);
    for (Eigen::Index r = 0; r < q; ++r) beta(coords[r].first, coords[r].second) = x(r);
    return beta;
}

namespace {

std::vector<std::string> names(const Ucg& g, const Indices& idx) {
    std::vector<std::string> out;
    for (auto v : idx) out.push_back(g.name(v));
    return out;
}

Matrix residual(const ComponentParams& cp, const Dataset& data, const Ucg& g) {
    Matrix r = data.rows(names(g, cp.k));
    const Indices pa = cp.pa();
    if (!pa.empty()) r -= cp.beta() * data.rows(names(g, pa));
    return r;
}

}  // namespace

double conditional_log_likelihood(const ComponentParams& cp, const Dataset& data, const Ucg& g) {
    const Matrix r = residual(cp, data, g);
    const Matrix s = second_moment(r);
    const double k = static_cast<double>(cp.k.size());
    return 0.5 * log_det_spd(cp.omega_kk) - 0.5 * (cp.omega_kk.cwiseProduct(s)).sum() -
           0.5 * k * std::log(2.0 * std::numbers::pi);
}

FitResult fit(const Ucg& g, const Dataset& data, const FitConfig& cfg) {
    validate_config(cfg);
    const std::size_t n = data.instances();
    if (n <= g.size())
        throw Error(ErrorCode::SingularSampleCovariance,
                    "need more instances (" + std::to_string(n) + ") than variables (" + std::to_string(g.size()) + ")");
    FitResult result;
    result.model.graph = g;
    const auto dec = chain_decomposition(g);
    for (const NodeSet& comp : dec.components) {
        const ZeroPattern p = zero_pattern(g, comp);
        ComponentParams cp;
        cp.k = p.k;
        cp.mo = p.mo;
        cp.fa = p.fa;
        cp.beta_mo = Matrix::Zero(p.k.size(), p.mo.size());
        const Matrix d_k = data.rows(names(g, p.k));
        const Matrix d_mo = data.rows(names(g, p.mo));
        const Matrix d_fa = data.rows(names(g, p.fa));

        ComponentFit cf;
        cf.k = p.k;
        Matrix warm;
        Matrix prev_kk, prev_kfa, prev_mo;
        for (std::size_t it = 1; it <= cfg.outer_max; ++it) {
            const Matrix res = p.mo.empty() ? d_k : Matrix(d_k - cp.beta_mo * d_mo);
            IpfResult step = ipf_step(res, d_fa, p, cfg, warm);
            cp.omega_kk = step.omega_kk;
            cp.omega_kfa = step.omega_kfa;
            warm = step.omega;
            const Matrix beta_fa = cp.beta_fa();
            if (!p.mo.empty()) {
                const Matrix y = p.fa.empty() ? d_k : Matrix(d_k - beta_fa * d_fa);
                cp.beta_mo = gls_step(y, d_mo, cp.omega_kk, p.beta_mo);
            }
            cf.iterations = it;
            cf.log_likelihood.push_back(conditional_log_likelihood(cp, data, g));
            if (p.mo.empty()) {
                cf.converged = true;
                break;
            }
            if (it > 1) {
                const double change = std::max({max_abs(cp.omega_kk - prev_kk), max_abs(cp.omega_kfa - prev_kfa),
                                                max_abs(cp.beta_mo - prev_mo)});
                if (change < cfg.outer_tol) {
                    cf.converged = true;
                    break;
                }
            }
            prev_kk = cp.omega_kk;
            prev_kfa = cp.omega_kfa;
            prev_mo = cp.beta_mo;
        }
        result.report.iterations = std::max(result.report.iterations, cf.iterations);
        result.report.converged = result.report.converged && cf.converged;
        result.report.components.push_back(std::move(cf));
        result.model.components.push_back(std::move(cp));
    }
    return result;
}

FitMetrics metrics(const UcgModel& truth, const UcgModel& est, const Dataset& data) {
    if (serialize_graph(truth.graph) != serialize_graph(est.graph))
        throw Error(ErrorCode::GraphMismatch, "estimate and truth use different graphs");
    const Ucg& g = truth.graph;
    FitMetrics out;
    const auto record = [](BlockDiffs& b, double theta, double hat) {
        if (theta != 0.0)
            b.relative.push_back(std::abs((theta - hat) / theta));
        else
            b.absolute.push_back(std::abs(hat));
    };
    for (const ComponentParams& t : truth.components) {
        const ComponentParams* e = nullptr;
        for (const auto& c : est.components)
            if (c.k == t.k) e = &c;
        if (e == nullptr) throw Error(ErrorCode::GraphMismatch, "estimate lacks a component of the truth");
        const ZeroPattern p = zero_pattern(g, NodeSet::from_indices(g.size(), t.k));
        for (Eigen::Index r = 0; r < p.omega_kk.rows(); ++r)
            for (Eigen::Index c = r; c < p.omega_kk.cols(); ++c)
                if (p.omega_kk(r, c)) record(out.omega_kk, t.omega_kk(r, c), e->omega_kk(r, c));
        for (Eigen::Index r = 0; r < p.omega_fa.rows(); ++r)
            for (Eigen::Index c = 0; c < p.omega_fa.cols(); ++c)
                if (p.omega_fa(r, c)) record(out.omega_kfa, t.omega_kfa(r, c), e->omega_kfa(r, c));
        const Matrix bt = t.beta_fa(), be = e->beta_fa();
        for (Eigen::Index r = 0; r < bt.rows(); ++r)
            for (Eigen::Index c = 0; c < bt.cols(); ++c) record(out.beta_fa, bt(r, c), be(r, c));
        for (Eigen::Index r = 0; r < p.beta_mo.rows(); ++r)
            for (Eigen::Index c = 0; c < p.beta_mo.cols(); ++c)
                if (p.beta_mo(r, c)) record(out.beta_mo, t.beta_mo(r, c), e->beta_mo(r, c));

        const Matrix rt = residual(t, data, g), re = residual(*e, data, g);
        out.residual_truth += rt.squaredNorm();
        out.residual_estimate += re.squaredNorm();
        out.weighted_residual_difference +=
            (e->omega_kk.cwiseProduct(re * re.transpose())).sum() - (t.omega_kk.cwiseProduct(rt * rt.transpose())).sum();
    }
    out.residual_difference = out.residual_estimate - out.residual_truth;
    return out;
}

}  // namespace ucg
