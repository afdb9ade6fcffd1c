#include "support.hpp"

#include <deque>
#include <functional>
#include <random>

namespace ucg::testing {

Ucg spillover_graph() {
    return build_ucg({"V1", "G1", "V2", "G2", "D1", "D2"},
                     std::vector<EdgeSpec>{{"V1", "D1", EdgeKind::SolidDirected},
                                           {"G1", "D1", EdgeKind::DashedDirected},
                                           {"V2", "D2", EdgeKind::SolidDirected},
                                           {"G2", "D2", EdgeKind::DashedDirected},
                                           {"D1", "D2", EdgeKind::Undirected}});
}

Ucg four_chain() {
    return build_ucg({"1", "2", "3", "4"}, std::vector<EdgeSpec>{{"1", "3", EdgeKind::SolidDirected},
                                                                 {"3", "4", EdgeKind::Undirected},
                                                                 {"2", "4", EdgeKind::SolidDirected}});
}

NodeSet set(const Ucg& g, const std::vector<std::string>& names) { return g.set_of(names); }

Indices to_indices(const NodeSet& s) {
    return s.members();
}

End end_at(const Ucg& g, NodeIndex at, NodeIndex other) {
    const auto e = g.edge_between(at, other);
    if (!e) return End::None;
    if (e->kind == EdgeKind::Undirected) return End::Line;
    if (e->to != at) return End::Tail;
    return e->kind == EdgeKind::SolidDirected ? End::Solid : End::Dashed;
}

namespace {

struct Requirements {
    std::uint64_t must_in = 0;
    std::uint64_t must_out = 0;
    std::vector<std::uint64_t> sections;  // each needs a member in Z
};

Requirements requirements(const Ucg& g, const std::vector<NodeIndex>& r) {
    Requirements req;
    const std::size_t len = r.size();
    req.must_out |= std::uint64_t{1} << r.front();
    req.must_out |= std::uint64_t{1} << r.back();
    std::vector<bool> in_section(len, false);
    std::size_t p = 0;
    while (p < len) {
        std::size_t q = p;
        while (q + 1 < len && end_at(g, r[q], r[q + 1]) == End::Line) ++q;
        if (p > 0 && q + 1 < len && end_at(g, r[p], r[p - 1]) == End::Solid &&
            end_at(g, r[q], r[q + 1]) == End::Solid) {
            std::uint64_t members = 0;
            for (std::size_t k = p; k <= q; ++k) {
                members |= std::uint64_t{1} << r[k];
                in_section[k] = true;
            }
            req.sections.push_back(members);
        }
        p = q + 1;
    }
    for (std::size_t k = 1; k + 1 < len; ++k) {
        const End left = end_at(g, r[k], r[k - 1]);
        const End right = end_at(g, r[k], r[k + 1]);
        const bool collider = (left == End::Dashed && right != End::Tail) || (right == End::Dashed && left != End::Tail);
        if (collider)
            req.must_in |= std::uint64_t{1} << r[k];
        else if (!in_section[k])
            req.must_out |= std::uint64_t{1} << r[k];
    }
    return req;
}

bool satisfied(const Requirements& req, std::uint64_t z) {
    if ((z & req.must_in) != req.must_in) return false;
    if (z & req.must_out) return false;
    for (std::uint64_t s : req.sections)
        if ((z & s) == 0) return false;
    return true;
}

}  // namespace

bool route_open(const Ucg& g, const std::vector<NodeIndex>& route, const NodeSet& z) {
    std::uint64_t mask = 0;
    for (NodeIndex v : z.members()) mask |= std::uint64_t{1} << v;
    return satisfied(requirements(g, route), mask);
}

bool WalkTable::separated(std::uint64_t x, std::uint64_t y, std::uint64_t z) const {
    for (std::size_t a = 0; a < n; ++a) {
        if (!((x >> a) & 1u)) continue;
        for (std::size_t b = 0; b < n; ++b)
            if (((y >> b) & 1u) && open[a][b][z]) return false;
    }
    return true;
}

WalkTable enumerate_walks(const Ucg& g, std::size_t max_nodes) {
    WalkTable t;
    t.n = g.size();
    const std::uint64_t masks = std::uint64_t{1} << t.n;
    t.open.assign(t.n, std::vector<std::vector<bool>>(t.n, std::vector<bool>(masks, false)));
    std::vector<NodeIndex> walk;
    std::function<void()> extend = [&]() {
        const NodeIndex last = walk.back();
        if (walk.size() >= 2 && last != walk.front()) {
            const Requirements req = requirements(g, walk);
            auto& row = t.open[walk.front()][last];
            for (std::uint64_t z = 0; z < masks; ++z)
                if (!row[z] && satisfied(req, z)) row[z] = true;
        }
        if (walk.size() == max_nodes) return;
        for (NodeIndex next = 0; next < t.n; ++next) {
            if (!g.adjacent(last, next)) continue;
            walk.push_back(next);
            extend();
            walk.pop_back();
        }
    };
    for (NodeIndex a = 0; a < t.n; ++a) {
        walk = {a};
        extend();
    }
    return t;
}

bool moral_separated(const Ucg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    const std::size_t n = g.size();
    std::vector<bool> an(n, false);
    std::deque<NodeIndex> todo;
    for (NodeIndex v : (x | y | z).members()) {
        an[v] = true;
        todo.push_back(v);
    }
    while (!todo.empty()) {
        const NodeIndex v = todo.front();
        todo.pop_front();
        for (NodeIndex u = 0; u < n; ++u) {
            const End mark_v = end_at(g, v, u);
            if (an[u] || mark_v == End::None || mark_v == End::Tail) continue;
            an[u] = true;
            todo.push_back(u);
        }
    }
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const Edge& e : g.edges())
        if (an[e.from] && an[e.to]) adj[e.from][e.to] = adj[e.to][e.from] = true;
    // chain components of the anterior subgraph, then their parents pairwise joined
    std::vector<int> comp(n, -1);
    int count = 0;
    for (NodeIndex s = 0; s < n; ++s) {
        if (!an[s] || comp[s] >= 0) continue;
        comp[s] = count;
        std::deque<NodeIndex> q{s};
        while (!q.empty()) {
            const NodeIndex v = q.front();
            q.pop_front();
            for (NodeIndex u = 0; u < n; ++u)
                if (an[u] && comp[u] < 0 && end_at(g, v, u) == End::Line) {
                    comp[u] = count;
                    q.push_back(u);
                }
        }
        ++count;
    }
    for (int c = 0; c < count; ++c) {
        std::vector<NodeIndex> pa;
        for (NodeIndex u = 0; u < n; ++u) {
            if (!an[u]) continue;
            for (NodeIndex v = 0; v < n; ++v)
                if (comp[v] == c && end_at(g, u, v) == End::Tail) {
                    pa.push_back(u);
                    break;
                }
        }
        for (NodeIndex a : pa)
            for (NodeIndex b : pa)
                if (a != b) adj[a][b] = true;
    }
    std::vector<bool> seen(n, false);
    std::deque<NodeIndex> q;
    for (NodeIndex v : x.members()) {
        seen[v] = true;
        q.push_back(v);
    }
    while (!q.empty()) {
        const NodeIndex v = q.front();
        q.pop_front();
        if (y.contains(v)) return false;
        for (NodeIndex u = 0; u < n; ++u)
            if (adj[v][u] && !seen[u] && !z.contains(u)) {
                seen[u] = true;
                q.push_back(u);
            }
    }
    return true;
}

Matrix amp_covariance(const Ucg& g, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(g.size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(0.5, 1.5);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    std::bernoulli_distribution sign(0.5);
    Matrix b = Matrix::Zero(n, n);
    Matrix omega = Matrix::Zero(n, n);
    for (const Edge& e : g.edges()) {
        const auto from = static_cast<Eigen::Index>(e.from);
        const auto to = static_cast<Eigen::Index>(e.to);
        if (e.kind == EdgeKind::DashedDirected) {
            b(to, from) = (sign(rng) ? 1.0 : -1.0) * coef(rng);
        } else if (e.kind == EdgeKind::Undirected) {
            omega(from, to) = omega(to, from) = off(rng);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) omega(i, i) = omega.row(i).cwiseAbs().sum() + coef(rng);
    const Matrix lambda = omega.inverse();
    const Matrix a = (Matrix::Identity(n, n) - b).inverse();
    return a * lambda * a.transpose();
}

}  // namespace ucg::testing
