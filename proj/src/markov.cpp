#include "ucg/markov.hpp"

#include "ucg/error.hpp"
#include "ucg/random.hpp"
#include "ucg/separation.hpp"

namespace ucg {

std::string_view to_string(Origin o) {
    switch (o) {
        case Origin::Global: return "global";
        case Origin::B1: return "B1";
        case Origin::B2: return "B2";
        case Origin::B3: return "B3";
        case Origin::P1: return "P1";
        case Origin::P2: return "P2";
        case Origin::L1: return "L1";
        case Origin::L2: return "L2";
    }
    return "?";
}

std::string_view to_string(Suite s) {
    switch (s) {
        case Suite::Global: return "global";
        case Suite::Block: return "block";
        case Suite::Pairwise: return "pairwise";
        case Suite::Local: return "local";
    }
    return "?";
}

std::optional<Suite> suite_from_string(std::string_view text) {
    for (Suite s : {Suite::Global, Suite::Block, Suite::Pairwise, Suite::Local})
        if (text == to_string(s)) return s;
    return std::nullopt;
}

std::vector<Origin> origins_of(Suite s) {
    switch (s) {
        case Suite::Global: return {Origin::Global};
        case Suite::Block: return {Origin::B1, Origin::B2, Origin::B3};
        case Suite::Pairwise: return {Origin::P1, Origin::P2};
        case Suite::Local: return {Origin::L1, Origin::L2};
    }
    return {};
}

namespace {

struct Collector {
    Enumeration out;
    Origin origin;

    void add(const NodeSet& x, const NodeSet& y, const NodeSet& z) {
        if (x.empty() || y.empty()) {
            ++out.dropped;
            return;
        }
        if (x.intersects(y) || x.intersects(z) || y.intersects(z))
            throw Error(ErrorCode::InvalidQuery, std::string("overlapping sets in a ") + std::string(to_string(origin)) + " statement");
        out.statements.push_back({x, y, z, origin});
    }
};

}  // namespace

Enumeration enumerate_property(const Ucg& g, Origin which) {
    Collector c{{}, which};
    const std::size_t n = g.size();
    const auto single = [&](NodeIndex v) { return NodeSet(n, {v}); };

    if (which == Origin::Global) {
        if (n > kGlobalMaxNodes)
            throw Error(ErrorCode::GraphTooLarge, "global enumeration limited to " + std::to_string(kGlobalMaxNodes) + " nodes");
        for_each_disjoint_triple(n, TripleOrder::Unordered, [&](const NodeSet& x, const NodeSet& y, const NodeSet& z) {
            if (is_separated(g, x, y, z)) c.out.statements.push_back({x, y, z, Origin::Global});
        });
        return c.out;
    }

    const auto dec = chain_decomposition(g);
    for (const NodeSet& k : dec.components) {
        const NodeSets sk = node_sets(g, k);
        for (NodeIndex i : k.members()) {
            const NodeSet si = single(i);
            const NodeSets s = node_sets(g, si);
            switch (which) {
                case Origin::B1:
                    c.add(si, sk.nd - k - sk.fa - s.mo, sk.fa | s.mo);
                    break;
                case Origin::B2:
                    c.add(si, sk.nd - k - s.fa - sk.mo, ((k - si) | s.fa) | sk.mo);
                    break;
                case Origin::B3:
                    for (NodeIndex j : ((k - si) - s.ne).members()) {
                        if (j < i) continue;  // each unordered pair once
                        c.add(si, single(j), (k - si - single(j)) | sk.pa);
                    }
                    break;
                case Origin::P1:
                    for (NodeIndex j : (s.nd - k - sk.fa - s.mo).members()) {
                        if (g.adjacent(i, j)) continue;
                        c.add(si, single(j), s.nd - k - single(j));
                    }
                    break;
                case Origin::P2:
                    for (NodeIndex j : (s.nd - si - s.fa - sk.mo).members()) {
                        if (g.adjacent(i, j)) continue;
                        c.add(si, single(j), s.nd - si - single(j));
                    }
                    break;
                case Origin::L1:
                    c.add(si, s.nd - k - sk.fa - s.mo, sk.fa | s.mo);
                    break;
                case Origin::L2: {
                    const NodeSet mo_ne = mothers(g, s.ne);
                    c.add(si, s.nd - si - s.pa - s.ne - mo_ne, (s.pa | s.ne) | mo_ne);
                    break;
                }
                case Origin::Global:
                    break;
            }
        }
    }
    return c.out;
}

Enumeration enumerate_suite(const Ucg& g, Suite which) {
    Enumeration out;
    for (Origin o : origins_of(which)) {
        Enumeration e = enumerate_property(g, o);
        out.dropped += e.dropped;
        out.statements.insert(out.statements.end(), e.statements.begin(), e.statements.end());
    }
    return out;
}

PropertyReport check_statements(const JointGaussian& jg, const Enumeration& e, double tol) {
    PropertyReport r;
    r.total = e.statements.size();
    r.dropped = e.dropped;
    for (const auto& s : e.statements) {
        const double residual = max_abs(conditional_cross_covariance(jg, s.x.members(), s.y.members(), s.z.members()));
        if (!(residual < tol)) r.failures.push_back({s, residual});
    }
    return r;
}

PropertyReport check_property(const UcgModel& m, Suite which, double tol) {
    return check_statements(assemble_joint(m), enumerate_suite(m.graph, which), tol);
}

namespace {

// Makes one structurally zero parameter nonzero. Returns false if the graph has none.
bool perturb(UcgModel& m, Rng& rng) {
    struct Target {
        std::size_t comp;
        int block;
        Eigen::Index r, c;
    };
    std::vector<Target> targets;
    for (std::size_t ci = 0; ci < m.components.size(); ++ci) {
        const auto& cp = m.components[ci];
        const ZeroPattern p = zero_pattern(m.graph, NodeSet::from_indices(m.graph.size(), cp.k));
        for (Eigen::Index r = 0; r < p.beta_mo.rows(); ++r)
            for (Eigen::Index c = 0; c < p.beta_mo.cols(); ++c)
                if (!p.beta_mo(r, c)) targets.push_back({ci, 0, r, c});
        for (Eigen::Index r = 0; r < p.omega_fa.rows(); ++r)
            for (Eigen::Index c = 0; c < p.omega_fa.cols(); ++c)
                if (!p.omega_fa(r, c)) targets.push_back({ci, 1, r, c});
        for (Eigen::Index r = 0; r < p.omega_kk.rows(); ++r)
            for (Eigen::Index c = r + 1; c < p.omega_kk.cols(); ++c)
                if (!p.omega_kk(r, c)) targets.push_back({ci, 2, r, c});
    }
    if (targets.empty()) return false;
    const Target t = targets[std::uniform_int_distribution<std::size_t>(0, targets.size() - 1)(rng)];
    auto& cp = m.components[t.comp];
    const auto value = [&] {
        const double v = uniform(rng, 0.5, 3.0);
        return bernoulli(rng, 0.5) ? v : -v;
    };
    if (t.block == 0) {
        cp.beta_mo(t.r, t.c) = value();
    } else if (t.block == 1) {
        cp.omega_kfa(t.r, t.c) = value();
    } else {
        // Shrink until the precision stays positive definite.
        double v = value();
        for (int tries = 0; tries < 60; ++tries, v *= 0.8) {
            Matrix o = cp.omega_kk;
            o(t.r, t.c) = o(t.c, t.r) = v;
            if (is_positive_definite(o)) {
                cp.omega_kk = o;
                return true;
            }
        }
        return false;
    }
    return true;
}

}  // namespace

EquivalenceReport cross_equivalence(const Ucg& g, std::size_t trials, std::uint64_t seed, double tol) {
    if (g.size() > kGlobalMaxNodes) throw Error(ErrorCode::GraphTooLarge, "cross equivalence limited to 8 nodes");
    EquivalenceReport report;
    if (trials == 0) return report;
    const Suite suites[] = {Suite::Global, Suite::Block, Suite::Pairwise, Suite::Local};
    std::vector<Enumeration> enumerations;
    for (Suite s : suites) enumerations.push_back(enumerate_suite(g, s));
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t s = splitmix64(seed + t);
        UcgModel m = random_params(g, s);
        ++report.trials;
        const JointGaussian jg = assemble_joint(m);
        bool all = true;
        for (std::size_t k = 0; k < 4; ++k)
            if (!check_statements(jg, enumerations[k], tol).ok()) {
                ++report.suite_failures[k];
                all = false;
            }
        if (all) ++report.all_passed;

        Rng rng(splitmix64(s ^ 0x5bd1e995ULL));
        if (!perturb(m, rng)) continue;
        ++report.perturbed;
        const JointGaussian bad = assemble_joint(m);
        bool broken = false;
        for (std::size_t k = 0; k < 4 && !broken; ++k) broken = !check_statements(bad, enumerations[k], tol).ok();
        if (broken) ++report.detected;
    }
    return report;
}

}  // namespace ucg
