#include "ucg/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ucg/error.hpp"

namespace ucg {

namespace {

void check_indices(std::size_t n, const Indices& a, const Indices& b, const Indices& c = {}) {
    std::vector<bool> used(n, false);
    for (const Indices* s : {&a, &b, &c})
        for (std::size_t v : *s) {
            if (v >= n) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
            if (used[v]) throw Error(ErrorCode::InvalidArgument, "variable sets must be disjoint and duplicate free");
            used[v] = true;
        }
}

std::vector<std::string> names_at(const std::vector<std::string>& names, const Indices& idx) {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(names[i]);
    return out;
}

Indices to_indices(const NodeSet& s) { return s.members(); }

}  // namespace

JointGaussian::JointGaussian(std::vector<std::string> variables, Matrix sigma)
    : JointGaussian(std::move(variables), std::move(sigma), Vector()) {}

JointGaussian::JointGaussian(std::vector<std::string> variables, Matrix sigma, Vector mean)
    : variables_(std::move(variables)), sigma_(std::move(sigma)), mean_(std::move(mean)) {
    const auto n = static_cast<Eigen::Index>(variables_.size());
    if (sigma_.rows() != n || sigma_.cols() != n)
        throw Error(ErrorCode::InvalidArgument, "covariance shape does not match the variable list");
    if (mean_.size() == 0) mean_ = Vector::Zero(n);
    if (mean_.size() != n) throw Error(ErrorCode::InvalidArgument, "mean length does not match the variable list");
    const double scale = std::max(1.0, max_abs(sigma_));
    if (max_abs(sigma_ - sigma_.transpose()) > 1e-12 * scale)
        throw Error(ErrorCode::InvalidArgument, "covariance is not symmetric");
    if (!is_positive_definite(sigma_)) throw Error(ErrorCode::SingularMatrix, "covariance is not positive definite");
}

std::size_t JointGaussian::index_of(const std::string& name) const {
    const auto it = std::find(variables_.begin(), variables_.end(), name);
    if (it == variables_.end()) throw Error(ErrorCode::UnknownNode, "unknown variable '" + name + "'");
    return static_cast<std::size_t>(it - variables_.begin());
}

Indices JointGaussian::indices_of(const std::vector<std::string>& names) const {
    Indices out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(index_of(n));
    return out;
}

JointGaussian JointGaussian::marginal(const Indices& keep) const {
    check_indices(size(), keep, {});
    return JointGaussian(names_at(variables_, keep), submatrix(sigma_, keep, keep), subvector(mean_, keep));
}

ConditionalGaussian condition(const JointGaussian& jg, const Indices& k, const Indices& pa) {
    check_indices(jg.size(), k, pa);
    const Matrix& s = jg.sigma();
    ConditionalGaussian cg;
    cg.targets = names_at(jg.variables(), k);
    cg.givens = names_at(jg.variables(), pa);
    const Matrix s_kk = submatrix(s, k, k);
    const Matrix s_kp = submatrix(s, k, pa);
    const Matrix s_pp = submatrix(s, pa, pa);
    if (pa.empty()) {
        cg.beta = Matrix(k.size(), 0);
        cg.lambda = s_kk;
        return cg;
    }
    cg.beta = spd_solve(s_pp, s_kp.transpose()).transpose();
    cg.lambda = symmetrize(s_kk - cg.beta * s_kp.transpose());
#ifndef NDEBUG
    {
        Indices all = k;
        all.insert(all.end(), pa.begin(), pa.end());
        const Matrix omega = spd_inverse(submatrix(s, all, all));
        const auto nk = static_cast<Eigen::Index>(k.size());
        const Matrix o_kk = omega.topLeftCorner(nk, nk);
        const Matrix o_kp = omega.topRightCorner(nk, omega.cols() - nk);
        const Matrix lambda2 = spd_inverse(o_kk);
        const Matrix beta2 = -lambda2 * o_kp;
        const double scale = std::max({1.0, max_abs(cg.beta), max_abs(cg.lambda)});
        if (max_abs(beta2 - cg.beta) > 1e-10 * scale || max_abs(lambda2 - cg.lambda) > 1e-10 * scale)
            throw Error(ErrorCode::SingularMatrix, "covariance and precision forms of the conditional disagree");
    }
#endif
    return cg;
}

Matrix conditional_cross_covariance(const JointGaussian& jg, const Indices& x, const Indices& y, const Indices& z) {
    check_indices(jg.size(), x, y, z);
    const Matrix& s = jg.sigma();
    Matrix out = submatrix(s, x, y);
    if (!z.empty()) out -= submatrix(s, x, z) * spd_solve(submatrix(s, z, z), submatrix(s, z, y));
    return out;
}

bool is_ci(const JointGaussian& jg, const Indices& x, const Indices& y, const Indices& z, double tol) {
    return max_abs(conditional_cross_covariance(jg, x, y, z)) < tol;
}

bool is_ci(const JointGaussian& jg, const NodeSet& x, const NodeSet& y, const NodeSet& z, double tol) {
    if (x.universe() != jg.size() || y.universe() != jg.size() || z.universe() != jg.size())
        throw Error(ErrorCode::InvalidArgument, "node sets do not match the variable list");
    return is_ci(jg, to_indices(x), to_indices(y), to_indices(z), tol);
}

Indices Dataset::rows_of(const std::vector<std::string>& names) const {
    Indices out;
    out.reserve(names.size());
    for (const auto& n : names) {
        const auto it = std::find(variables.begin(), variables.end(), n);
        if (it == variables.end()) throw Error(ErrorCode::UnknownNode, "dataset has no variable '" + n + "'");
        out.push_back(static_cast<std::size_t>(it - variables.begin()));
    }
    return out;
}

Matrix Dataset::rows(const std::vector<std::string>& names) const {
    const Indices idx = rows_of(names);
    Matrix out(idx.size(), values.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(r) = values.row(idx[r]);
    return out;
}

namespace {

Matrix standard_normals(Eigen::Index rows, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix e(rows, static_cast<Eigen::Index>(n));
    for (Eigen::Index c = 0; c < e.cols(); ++c)
        for (Eigen::Index r = 0; r < rows; ++r) e(r, c) = normal(rng);
    return e;
}

Matrix cholesky_factor(const Matrix& s) {
    if (s.size() == 0) return s;
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularMatrix, "covariance is not positive definite");
    return llt.matrixL();
}

}  // namespace

Dataset sample(const JointGaussian& jg, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
    Dataset d;
    d.variables = jg.variables();
    d.values = cholesky_factor(jg.sigma()) * standard_normals(static_cast<Eigen::Index>(jg.size()), n, seed);
    d.values.colwise() += jg.mean();
    return d;
}

Dataset sample(const ConditionalGaussian& cg, const Matrix& givens, std::uint64_t seed) {
    if (givens.rows() != static_cast<Eigen::Index>(cg.givens.size()))
        throw Error(ErrorCode::InvalidArgument, "given rows do not match the conditional");
    if (givens.cols() == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
    Dataset d;
    d.variables = cg.targets;
    const auto n = static_cast<std::size_t>(givens.cols());
    d.values = cholesky_factor(cg.lambda) * standard_normals(static_cast<Eigen::Index>(cg.targets.size()), n, seed);
    if (!cg.givens.empty()) d.values += cg.beta * givens;
    return d;
}

Matrix second_moment(const Matrix& a) {
    if (a.cols() == 0) throw Error(ErrorCode::InvalidArgument, "no instances");
    return symmetrize(a * a.transpose() / static_cast<double>(a.cols()));
}

std::vector<std::vector<NodeIndex>> simple_paths(const Ucg& g, NodeIndex i, NodeIndex l) {
    std::vector<std::vector<NodeIndex>> out;
    std::vector<NodeIndex> path{i};
    std::vector<bool> on_path(g.size(), false);
    on_path[i] = true;
    const auto dfs = [&](auto&& self, NodeIndex v) -> void {
        if (v == l) {
            out.push_back(path);
            return;
        }
        for (const Incidence& inc : g.incident(v)) {
            if (on_path[inc.other]) continue;
            on_path[inc.other] = true;
            path.push_back(inc.other);
            self(self, inc.other);
            path.pop_back();
            on_path[inc.other] = false;
        }
    };
    dfs(dfs, i);
    return out;
}

namespace {

void check_undirected(const Ucg& g_k, NodeIndex i, NodeIndex l, Eigen::Index dim) {
    if (g_k.size() > kPathSumMaxNodes)
        throw Error(ErrorCode::GraphTooLarge, "path sums limited to " + std::to_string(kPathSumMaxNodes) + " nodes");
    if (i >= g_k.size() || l >= g_k.size()) throw Error(ErrorCode::UnknownNode, "node index out of range");
    if (dim != static_cast<Eigen::Index>(g_k.size()))
        throw Error(ErrorCode::InvalidArgument, "matrix does not match the graph");
    for (const Edge& e : g_k.edges())
        if (e.kind != EdgeKind::Undirected) throw Error(ErrorCode::InvalidArgument, "graph must be undirected");
}

Indices complement(std::size_t n, const std::vector<NodeIndex>& removed) {
    std::vector<bool> drop(n, false);
    for (NodeIndex v : removed) drop[v] = true;
    Indices out;
    for (std::size_t v = 0; v < n; ++v)
        if (!drop[v]) out.push_back(v);
    return out;
}

}  // namespace

double precision_path_sum(const Matrix& omega, const Ucg& g_k, NodeIndex i, NodeIndex l) {
    check_undirected(g_k, i, l, omega.rows());
    const double det = determinant(omega);
    double total = 0.0;
    for (const auto& path : simple_paths(g_k, i, l)) {
        const Indices rest = complement(g_k.size(), path);
        double term = determinant(submatrix(omega, rest, rest)) / det;
        for (std::size_t n = 0; n + 1 < path.size(); ++n) term *= omega(path[n], path[n + 1]);
        if (path.size() % 2 == 0) term = -term;  // (-1)^{|path|+1}
        total += term;
    }
    return total;
}

double inflation_factor(const JointGaussian& jg, NodeIndex node, const Indices& given) {
    const Indices rest = complement(jg.size(), {node});
    const double partial = condition(jg, {node}, given).lambda(0, 0);
    const double full = condition(jg, {node}, rest).lambda(0, 0);
    return partial / full;
}

double undirected_cov_decomposition(const JointGaussian& jg, const Ucg& g_k, NodeIndex i, NodeIndex l) {
    check_undirected(g_k, i, l, static_cast<Eigen::Index>(jg.size()));
    if (jg.variables() != g_k.nodes()) throw Error(ErrorCode::InvalidArgument, "variables must follow the graph's node order");
    const std::size_t n = g_k.size();
    for (NodeIndex a = 0; a < n; ++a)
        for (NodeIndex b = a + 1; b < n; ++b) {
            if (g_k.adjacent(a, b)) continue;
            if (!is_ci(jg, Indices{a}, Indices{b}, complement(n, {a, b}), 1e-8))
                throw Error(ErrorCode::MarkovViolation,
                            g_k.name(a) + " and " + g_k.name(b) + " are dependent given the rest but not adjacent");
        }
    double total = 0.0;
    for (const auto& path : simple_paths(g_k, i, l)) {
        double term = jg.sigma()(path[0], path[0]);
        Indices before{path[0]};
        for (std::size_t k = 1; k < path.size(); ++k) {
            const NodeIndex cur = path[k], prev = path[k - 1];
            Indices given{prev};
            for (std::size_t v : complement(n, {cur, prev})) given.push_back(v);
            const double coefficient = condition(jg, {cur}, given).beta(0, 0);
            term *= coefficient * inflation_factor(jg, cur, before);
            before.push_back(cur);
        }
        total += term;
    }
    return total;
}

}  // namespace ucg
