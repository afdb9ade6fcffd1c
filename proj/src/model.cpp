#include "ucg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ucg/error.hpp"
#include "ucg/random.hpp"

namespace ucg {

namespace {

std::size_t position(const Indices& list, std::size_t v) {
    return static_cast<std::size_t>(std::lower_bound(list.begin(), list.end(), v) - list.begin());
}

void require_component(const Ucg& g, const NodeSet& k) {
    const auto dec = chain_decomposition(g);
    if (std::find(dec.components.begin(), dec.components.end(), k) == dec.components.end())
        throw Error(ErrorCode::NotAComponent, "{" + [&] {
            std::string s;
            for (const auto& n : g.names_of(k)) s += (s.empty() ? "" : ",") + n;
            return s;
        }() + "} is not a chain component");
}

}  // namespace

ZeroPattern zero_pattern(const Ucg& g, const NodeSet& k) {
    require_component(g, k);
    ZeroPattern p;
    p.k = k.members();
    p.mo = mothers(g, k).members();
    p.fa = fathers(g, k).members();
    const auto nk = static_cast<Eigen::Index>(p.k.size());
    p.beta_mo = Mask::Constant(nk, static_cast<Eigen::Index>(p.mo.size()), false);
    p.omega_fa = Mask::Constant(nk, static_cast<Eigen::Index>(p.fa.size()), false);
    p.omega_kk = Mask::Constant(nk, nk, false);
    for (Eigen::Index r = 0; r < nk; ++r) {
        const NodeIndex i = p.k[r];
        p.omega_kk(r, r) = true;
        for (std::size_t c = 0; c < p.mo.size(); ++c) p.beta_mo(r, c) = g.has_edge(p.mo[c], i, EdgeKind::DashedDirected);
        for (std::size_t c = 0; c < p.fa.size(); ++c) p.omega_fa(r, c) = g.has_edge(p.fa[c], i, EdgeKind::SolidDirected);
        for (Eigen::Index c = 0; c < nk; ++c)
            if (c != r) p.omega_kk(r, c) = g.has_edge(std::min(i, p.k[c]), std::max(i, p.k[c]), EdgeKind::Undirected);
    }
    return p;
}

Mask literal_beta_restrictions(const Ucg& g, const NodeSet& k) {
    const Indices pa = parents(g, k).members();
    const NodeSet mo_k = mothers(g, k);
    const Indices rows = k.members();
    Mask restricted = Mask::Constant(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(pa.size()), false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const NodeSet mo_i = mothers(g, NodeSet(g.size(), {rows[r]}));
        for (std::size_t c = 0; c < pa.size(); ++c)
            restricted(r, c) = mo_k.contains(pa[c]) && !mo_i.contains(pa[c]);
    }
    return restricted;
}

Matrix ComponentParams::beta_fa() const {
    if (fa.empty()) return Matrix(k.size(), 0);
    return -spd_solve(omega_kk, omega_kfa);
}

Indices ComponentParams::pa() const {
    Indices out = mo;
    out.insert(out.end(), fa.begin(), fa.end());
    std::sort(out.begin(), out.end());
    return out;
}

Matrix ComponentParams::beta() const {
    const Indices p = pa();
    Matrix out = Matrix::Zero(k.size(), p.size());
    const Matrix bf = beta_fa();
    for (std::size_t c = 0; c < mo.size(); ++c) out.col(position(p, mo[c])) = beta_mo.col(c);
    for (std::size_t c = 0; c < fa.size(); ++c) out.col(position(p, fa[c])) = bf.col(c);
    return out;
}

void validate_model(const UcgModel& m) {
    const Ucg& g = m.graph;
    const auto dec = chain_decomposition(g);
    NodeSet covered(g.size());
    if (m.root) {
        for (std::size_t v : m.root->nodes) {
            if (v >= g.size()) throw Error(ErrorCode::InvalidArgument, "root block node out of range");
            covered.insert(v);
        }
        if (!parents(g, covered).empty()) throw Error(ErrorCode::InvalidArgument, "root block variables must be parentless");
        const auto n = static_cast<Eigen::Index>(m.root->nodes.size());
        if (m.root->precision.rows() != n || m.root->precision.cols() != n || !is_positive_definite(m.root->precision))
            throw Error(ErrorCode::SingularMatrix, "root block precision is not positive definite");
    }
    std::size_t next = 0;
    for (const NodeSet& comp : dec.components) {
        if (comp.is_subset_of(covered)) continue;
        if (comp.intersects(covered)) throw Error(ErrorCode::InvalidArgument, "root block splits a chain component");
        if (next >= m.components.size()) throw Error(ErrorCode::InvalidArgument, "missing component parameters");
        const ComponentParams& cp = m.components[next++];
        const ZeroPattern p = zero_pattern(g, comp);
        if (cp.k != p.k || cp.mo != p.mo || cp.fa != p.fa)
            throw Error(ErrorCode::InvalidArgument, "component parameters do not follow the topological order");
        if (cp.beta_mo.rows() != p.beta_mo.rows() || cp.beta_mo.cols() != p.beta_mo.cols() ||
            cp.omega_kfa.rows() != p.omega_fa.rows() || cp.omega_kfa.cols() != p.omega_fa.cols() ||
            cp.omega_kk.rows() != p.omega_kk.rows() || cp.omega_kk.cols() != p.omega_kk.cols())
            throw Error(ErrorCode::InvalidArgument, "component parameter shapes do not match the graph");
        if ((cp.beta_mo.array() != 0.0 && !p.beta_mo).any() || (cp.omega_kfa.array() != 0.0 && !p.omega_fa).any() ||
            (cp.omega_kk.array() != 0.0 && !p.omega_kk).any())
            throw Error(ErrorCode::InvalidArgument, "nonzero parameter at a position without an edge");
        if (max_abs(cp.omega_kk - cp.omega_kk.transpose()) > 0.0)
            throw Error(ErrorCode::InvalidArgument, "omega_KK is not symmetric");
        if (!is_positive_definite(cp.omega_kk)) throw Error(ErrorCode::SingularMatrix, "omega_KK is not positive definite");
    }
    if (next != m.components.size()) throw Error(ErrorCode::InvalidArgument, "too many component parameter blocks");
}

std::vector<Factor> factors(const UcgModel& m) {
    std::vector<Factor> out;
    if (m.root) out.push_back({m.root->nodes, {}, Matrix(m.root->nodes.size(), 0), spd_inverse(m.root->precision)});
    for (const ComponentParams& cp : m.components) out.push_back({cp.k, cp.pa(), cp.beta(), cp.lambda()});
    return out;
}

JointGaussian assemble_joint(const UcgModel& m) {
    const std::size_t n = m.graph.size();
    Matrix sigma = Matrix::Zero(n, n);
    Indices done;
    for (const Factor& f : factors(m)) {
        // Sigma_{K,U} = beta Sigma_{Pa,U}; Sigma_{K,K} = Lambda + beta Sigma_{Pa,Pa} beta^T.
        const Matrix s_k_done = f.beta * submatrix(sigma, f.pa, done);
        const Matrix s_kk = f.lambda + f.beta * submatrix(sigma, f.pa, f.pa) * f.beta.transpose();
        set_submatrix(sigma, f.k, done, s_k_done);
        set_submatrix(sigma, done, f.k, s_k_done.transpose());
        set_submatrix(sigma, f.k, f.k, symmetrize(s_kk));
        done.insert(done.end(), f.k.begin(), f.k.end());
    }
    if (done.size() != n) throw Error(ErrorCode::InvalidArgument, "model does not cover every variable");
    return JointGaussian(m.graph.nodes(), symmetrize(sigma));
}

Dataset simulate(const UcgModel& m, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
    const Ucg& g = m.graph;
    Dataset d;
    d.variables = g.nodes();
    d.values = Matrix::Zero(g.size(), n);
    std::uint64_t stream = 0;
    const auto put = [&](const Indices& rows, const Matrix& values) {
        for (std::size_t r = 0; r < rows.size(); ++r) d.values.row(rows[r]) = values.row(r);
    };
    if (m.root) {
        const auto& nodes = m.root->nodes;
        std::vector<std::string> names;
        for (auto v : nodes) names.push_back(g.name(v));
        put(nodes, sample(JointGaussian(names, spd_inverse(m.root->precision)), n, splitmix64(seed + stream++)).values);
    }
    for (const ComponentParams& cp : m.components) {
        ConditionalGaussian cg;
        for (auto v : cp.k) cg.targets.push_back(g.name(v));
        const Indices pa = cp.pa();
        for (auto v : pa) cg.givens.push_back(g.name(v));
        cg.beta = cp.beta();
        cg.lambda = cp.lambda();
        Matrix givens(pa.size(), n);
        for (std::size_t r = 0; r < pa.size(); ++r) givens.row(r) = d.values.row(pa[r]);
        put(cp.k, sample(cg, givens, splitmix64(seed + stream++)).values);
    }
    return d;
}

std::size_t count_edge_parameters(const UcgModel& m) {
    std::size_t total = 0;
    for (const ComponentParams& cp : m.components) {
        const ZeroPattern p = zero_pattern(m.graph, NodeSet::from_indices(m.graph.size(), cp.k));
        total += p.beta_mo.count() + p.omega_fa.count() + (p.omega_kk.count() - p.k.size()) / 2;
    }
    return total;
}

Ucg random_ucg(std::size_t n_mo, std::size_t n_fa, std::size_t n_k, double p_edge, std::uint64_t seed,
               std::size_t max_attempts) {
    if (n_mo == 0 || n_fa == 0 || n_k == 0) throw Error(ErrorCode::InvalidArgument, "node counts must be positive");
    if (!(p_edge > 0.0 && p_edge < 1.0)) throw Error(ErrorCode::InvalidArgument, "edge probability must lie in (0, 1)");
    std::vector<std::string> nodes;
    for (std::size_t i = 1; i <= n_mo; ++i) nodes.push_back("M" + std::to_string(i));
    for (std::size_t i = 1; i <= n_fa; ++i) nodes.push_back("F" + std::to_string(i));
    for (std::size_t i = 1; i <= n_k; ++i) nodes.push_back("C" + std::to_string(i));
    const std::size_t n_pa = n_mo + n_fa;
    Rng rng(seed);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<Edge> edges;
        std::vector<bool> has_child(n_pa, false);
        for (std::size_t p = 0; p < n_pa; ++p)
            for (std::size_t c = 0; c < n_k; ++c)
                if (bernoulli(rng, p_edge)) {
                    edges.push_back({p, n_pa + c, p < n_mo ? EdgeKind::DashedDirected : EdgeKind::SolidDirected});
                    has_child[p] = true;
                }
        std::vector<std::size_t> group(n_k);
        std::iota(group.begin(), group.end(), 0);
        const auto find = [&](std::size_t v) {
            while (group[v] != v) v = group[v] = group[group[v]];
            return v;
        };
        std::size_t groups = n_k;
        for (std::size_t a = 0; a < n_k; ++a)
            for (std::size_t b = a + 1; b < n_k; ++b)
                if (bernoulli(rng, p_edge)) {
                    edges.push_back({n_pa + a, n_pa + b, EdgeKind::Undirected});
                    const auto ra = find(a), rb = find(b);
                    if (ra != rb) {
                        group[ra] = rb;
                        --groups;
                    }
                }
        if (groups == 1 && std::all_of(has_child.begin(), has_child.end(), [](bool b) { return b; }))
            return build_ucg(nodes, edges);
    }
    throw Error(ErrorCode::RejectionLimit, "no admissible graph after " + std::to_string(max_attempts) + " attempts");
}

Ucg random_chain_graph(std::size_t n, double p_edge, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "node count must be positive");
    Rng rng(seed);
    std::vector<std::string> nodes;
    for (std::size_t i = 1; i <= n; ++i) nodes.push_back("V" + std::to_string(i));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> block(n);
    std::size_t current = 0;
    for (std::size_t pos = 0; pos < n; ++pos) {
        if (pos > 0 && bernoulli(rng, 0.5)) ++current;
        block[order[pos]] = current;
    }
    std::vector<Edge> edges;
    for (std::size_t pa = 0; pa < n; ++pa)
        for (std::size_t pb = pa + 1; pb < n; ++pb) {
            if (!bernoulli(rng, p_edge)) continue;
            const std::size_t a = order[pa], b = order[pb];
            if (block[a] == block[b])
                edges.push_back({std::min(a, b), std::max(a, b), EdgeKind::Undirected});
            else
                edges.push_back({a, b, bernoulli(rng, 0.5) ? EdgeKind::SolidDirected : EdgeKind::DashedDirected});
        }
    const Ucg raw = build_ucg(nodes, edges, Validation::SkipFaMo);
    const auto dec = chain_decomposition(raw);
    for (const NodeSet& comp : dec.components) {
        const NodeSet both = fathers(raw, comp) & mothers(raw, comp);
        for (NodeIndex j : both.members()) {
            const EdgeKind kind = bernoulli(rng, 0.5) ? EdgeKind::SolidDirected : EdgeKind::DashedDirected;
            for (Edge& e : edges)
                if (e.from == j && comp.contains(e.to)) e.kind = kind;
        }
    }
    return build_ucg(nodes, edges);
}

namespace {

struct Slot {
    std::size_t component;
    int block;  // 0 beta_mo, 1 omega_kfa, 2 omega_kk (upper triangle)
    Eigen::Index row, col;
};

Matrix random_dense_precision(std::size_t n, Rng& rng, std::size_t max_attempts) {
    const auto dim = static_cast<Eigen::Index>(n);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        Matrix p(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            p(r, r) = uniform(rng, 0.0, 30.0);
            for (Eigen::Index c = r + 1; c < dim; ++c) p(r, c) = p(c, r) = uniform(rng, -3.0, 3.0);
        }
        if (is_positive_definite(p)) return p;
    }
    throw Error(ErrorCode::RejectionLimit, "no positive definite precision after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace

UcgModel random_params(const Ucg& g, std::uint64_t seed, const ParamOptions& options) {
    if (!(options.zero_fraction >= 0.0 && options.zero_fraction <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "zero fraction must lie in [0, 1]");
    Rng rng(seed);
    UcgModel m;
    m.graph = g;
    const auto dec = chain_decomposition(g);
    std::vector<ZeroPattern> patterns;
    if (options.dense_root) {
        RootBlock root;
        for (const NodeSet& comp : dec.components)
            if (parents(g, comp).empty())
                for (auto v : comp.members()) root.nodes.push_back(v);
        std::sort(root.nodes.begin(), root.nodes.end());
        m.root = std::move(root);
    }
    for (const NodeSet& comp : dec.components) {
        if (m.root && parents(g, comp).empty()) continue;
        patterns.push_back(zero_pattern(g, comp));
    }

    std::vector<Slot> slots;
    for (std::size_t c = 0; c < patterns.size(); ++c) {
        const ZeroPattern& p = patterns[c];
        for (Eigen::Index r = 0; r < p.beta_mo.rows(); ++r)
            for (Eigen::Index s = 0; s < p.beta_mo.cols(); ++s)
                if (p.beta_mo(r, s)) slots.push_back({c, 0, r, s});
        for (Eigen::Index r = 0; r < p.omega_fa.rows(); ++r)
            for (Eigen::Index s = 0; s < p.omega_fa.cols(); ++s)
                if (p.omega_fa(r, s)) slots.push_back({c, 1, r, s});
        for (Eigen::Index r = 0; r < p.omega_kk.rows(); ++r)
            for (Eigen::Index s = r + 1; s < p.omega_kk.cols(); ++s)
                if (p.omega_kk(r, s)) slots.push_back({c, 2, r, s});
    }
    const auto n_zero = static_cast<std::size_t>(std::floor(options.zero_fraction * static_cast<double>(slots.size())));
    std::vector<std::size_t> pick(slots.size());
    std::iota(pick.begin(), pick.end(), 0);
    std::shuffle(pick.begin(), pick.end(), rng);
    std::vector<Mask> zeroed_beta, zeroed_fa, zeroed_kk;
    for (const ZeroPattern& p : patterns) {
        zeroed_beta.push_back(Mask::Constant(p.beta_mo.rows(), p.beta_mo.cols(), false));
        zeroed_fa.push_back(Mask::Constant(p.omega_fa.rows(), p.omega_fa.cols(), false));
        zeroed_kk.push_back(Mask::Constant(p.omega_kk.rows(), p.omega_kk.cols(), false));
    }
    for (std::size_t z = 0; z < n_zero; ++z) {
        const Slot& s = slots[pick[z]];
        auto& mask = s.block == 0 ? zeroed_beta[s.component] : s.block == 1 ? zeroed_fa[s.component] : zeroed_kk[s.component];
        mask(s.row, s.col) = true;
        if (s.block == 2) mask(s.col, s.row) = true;
    }

    if (m.root) m.root->precision = random_dense_precision(m.root->nodes.size(), rng, options.max_attempts);

    for (std::size_t c = 0; c < patterns.size(); ++c) {
        const ZeroPattern& p = patterns[c];
        ComponentParams cp;
        cp.k = p.k;
        cp.mo = p.mo;
        cp.fa = p.fa;
        const auto draw = [&](const Mask& free, const Mask& zeroed) {
            Matrix out = Matrix::Zero(free.rows(), free.cols());
            for (Eigen::Index r = 0; r < free.rows(); ++r)
                for (Eigen::Index s = 0; s < free.cols(); ++s)
                    if (free(r, s) && !zeroed(r, s)) out(r, s) = uniform(rng, -3.0, 3.0);
            return out;
        };
        cp.beta_mo = draw(p.beta_mo, zeroed_beta[c]);
        cp.omega_kfa = draw(p.omega_fa, zeroed_fa[c]);
        const auto nk = p.omega_kk.rows();
        bool ok = false;
        for (std::size_t attempt = 0; attempt < options.max_attempts && !ok; ++attempt) {
            cp.omega_kk = Matrix::Zero(nk, nk);
            for (Eigen::Index r = 0; r < nk; ++r) {
                cp.omega_kk(r, r) = uniform(rng, 0.0, 30.0);
                for (Eigen::Index s = r + 1; s < nk; ++s)
                    if (p.omega_kk(r, s) && !zeroed_kk[c](r, s))
                        cp.omega_kk(r, s) = cp.omega_kk(s, r) = uniform(rng, -3.0, 3.0);
            }
            ok = is_positive_definite(cp.omega_kk);
        }
        if (!ok)
            throw Error(ErrorCode::RejectionLimit,
                        "no positive definite omega_KK after " + std::to_string(options.max_attempts) + " attempts");
        m.components.push_back(std::move(cp));
    }
    return m;
}

}  // namespace ucg
