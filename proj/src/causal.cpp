#include "ucg/causal.hpp"

#include <algorithm>

#include "ucg/error.hpp"
#include "ucg/separation.hpp"

namespace ucg {

std::string_view to_string(Mechanism m) { return m == Mechanism::Interfering ? "interfering" : "non_interfering"; }

std::optional<Mechanism> mechanism_from_string(std::string_view text) {
    if (text == "interfering") return Mechanism::Interfering;
    if (text == "non_interfering" || text == "noninterfering" || text == "non-interfering") return Mechanism::NonInterfering;
    return std::nullopt;
}

void InterventionSpec::validate(const Ucg& g) const {
    for (const auto& [name, value] : assignments) {
        if (!g.has_node(name)) throw Error(ErrorCode::UnknownNode, "intervention on unknown node '" + name + "'");
        if (!mechanism.count(name)) throw Error(ErrorCode::InvalidArgument, "no mechanism given for '" + name + "'");
    }
    for (const auto& [name, m] : mechanism) {
        if (!g.has_node(name)) throw Error(ErrorCode::UnknownNode, "mechanism for unknown node '" + name + "'");
        if (!assignments.count(name)) throw Error(ErrorCode::InvalidArgument, "mechanism for '" + name + "' without a value");
    }
}

std::vector<std::string> InterventionSpec::targets() const {
    std::vector<std::string> out;
    for (const auto& [name, value] : assignments) out.push_back(name);
    return out;
}

InterventionSpec interfering_spec(const Ucg& g, const NodeSet& x) {
    InterventionSpec spec;
    for (NodeIndex v : x.members()) {
        spec.assignments[g.name(v)] = 0.0;
        spec.mechanism[g.name(v)] = Mechanism::Interfering;
    }
    return spec;
}

const std::string& AugmentedUcg::indicator_of(const std::string& variable) const {
    for (const auto& [v, f] : f_nodes)
        if (v == variable) return f;
    throw Error(ErrorCode::UnknownNode, "no indicator for '" + variable + "'");
}

AugmentedUcg augment(const Ucg& g, const InterventionSpec& spec, const NodeSet& done) {
    for (const auto& [name, m] : spec.mechanism) {
        if (!g.has_node(name)) throw Error(ErrorCode::UnknownNode, "mechanism for unknown node '" + name + "'");
        if (done.contains(g.index_of(name)))
            throw Error(ErrorCode::OverlappingTargets, "'" + name + "' is already intervened on");
    }
    const Ucg base = induced_subgraph(g, g.all() - done);
    std::vector<std::string> nodes = base.nodes();
    std::vector<EdgeSpec> edges;
    for (const Edge& e : base.edges()) edges.push_back({base.name(e.from), base.name(e.to), e.kind});
    AugmentedUcg out;
    for (const auto& [name, m] : spec.mechanism) {
        std::string f = "F_" + name;
        while (std::find(nodes.begin(), nodes.end(), f) != nodes.end()) f += "_";
        nodes.push_back(f);
        edges.push_back({f, name, m == Mechanism::Interfering ? EdgeKind::SolidDirected : EdgeKind::DashedDirected});
        out.f_nodes.emplace_back(name, f);
    }
    out.graph = build_ucg(nodes, edges, Validation::SkipFaMo);
    return out;
}

namespace {

NodeSet translate(const Ucg& from, const NodeSet& s, const Ucg& to) {
    NodeSet out(to.size());
    for (NodeIndex v : s.members()) out.insert(to.index_of(from.name(v)));
    return out;
}

NodeSet indicators(const AugmentedUcg& a, const Ucg& g, const NodeSet& vars) {
    NodeSet out(a.graph.size());
    for (NodeIndex v : vars.members()) out.insert(a.graph.index_of(a.indicator_of(g.name(v))));
    return out;
}

InterventionSpec restrict_spec(const Ucg& g, const InterventionSpec& spec, const NodeSet& z) {
    InterventionSpec out;
    for (NodeIndex v : z.members()) {
        const auto it = spec.mechanism.find(g.name(v));
        if (it == spec.mechanism.end())
            throw Error(ErrorCode::InvalidQuery, "no mechanism for '" + g.name(v) + "'");
        out.mechanism[g.name(v)] = it->second;
        const auto a = spec.assignments.find(g.name(v));
        out.assignments[g.name(v)] = a == spec.assignments.end() ? 0.0 : a->second;
    }
    return out;
}

std::string join_names(const Ucg& g, const NodeSet& s) {
    std::string out;
    for (const auto& n : g.names_of(s)) out += (out.empty() ? "" : ",") + n;
    return out;
}

}  // namespace

bool rule_applies(const Ucg& g, int rule, const NodeSet& x, const NodeSet& y, const NodeSet& z, const NodeSet& w,
                  const InterventionSpec& spec) {
    if (rule < 1 || rule > 3) throw Error(ErrorCode::InvalidQuery, "rule must be 1, 2 or 3");
    for (const NodeSet* s : {&x, &y, &z, &w})
        if (s->universe() != g.size()) throw Error(ErrorCode::InvalidQuery, "sets do not belong to this graph");
    const NodeSet* sets[] = {&x, &y, &z, &w};
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            if (sets[a]->intersects(*sets[b])) throw Error(ErrorCode::InvalidQuery, "X, Y, Z and W must be disjoint");
    if (y.empty()) throw Error(ErrorCode::InvalidQuery, "Y must be non-empty");
    if (z.empty()) return true;
    if (rule == 1) {
        const AugmentedUcg a = augment(g, InterventionSpec{}, x);
        return is_separated(a.graph, translate(g, y, a.graph), translate(g, z, a.graph), translate(g, w, a.graph));
    }
    const AugmentedUcg a = augment(g, restrict_spec(g, spec, z), x);
    const NodeSet cond = rule == 2 ? (w | z) : w;
    return is_separated(a.graph, translate(g, y, a.graph), indicators(a, g, z), translate(g, cond, a.graph));
}

JointGaussian identified_effect(const UcgModel& m, const InterventionSpec& spec) {
    const Ucg& g = m.graph;
    spec.validate(g);
    const std::size_t n = g.size();
    const auto dec = chain_decomposition(g);
    NodeSet x(n);
    Vector value = Vector::Zero(n);
    for (const auto& [name, v] : spec.assignments) {
        const NodeIndex i = g.index_of(name);
        if (spec.mechanism.at(name) == Mechanism::NonInterfering && dec.components[dec.component_of[i]].size() > 1)
            throw Error(ErrorCode::NonInterferingUnsupported,
                        "no closed form for a non-interfering intervention on '" + name + "' inside a component");
        x.insert(i);
        value(i) = v;
    }

    // Mean and covariance over all of V; intervened rows hold their constant and zero variance.
    Vector mu = Vector::Zero(n);
    Matrix sigma = Matrix::Zero(n, n);
    Indices done;
    for (const Factor& f : factors(m)) {
        Indices t, zk;
        std::vector<Eigen::Index> t_rows, z_rows;
        for (std::size_t r = 0; r < f.k.size(); ++r) {
            if (x.contains(f.k[r])) {
                zk.push_back(f.k[r]);
                z_rows.push_back(static_cast<Eigen::Index>(r));
            } else {
                t.push_back(f.k[r]);
                t_rows.push_back(static_cast<Eigen::Index>(r));
            }
        }
        for (auto v : zk) mu(v) = value(v);
        if (!t.empty()) {
            // T | Pa, Z_K = z: T = A Pa + c + eta.
            Matrix a = f.beta(t_rows, Eigen::all);
            Matrix cov = f.lambda(t_rows, t_rows);
            Vector c = Vector::Zero(static_cast<Eigen::Index>(t.size()));
            if (!zk.empty()) {
                const Matrix l_zz = f.lambda(z_rows, z_rows);
                const Matrix gain = spd_solve(l_zz, f.lambda(z_rows, t_rows)).transpose();
                a -= gain * f.beta(z_rows, Eigen::all);
                c = gain * subvector(value, zk);
                cov -= gain * f.lambda(z_rows, t_rows);
            }
            const Matrix s_t_done = a * submatrix(sigma, f.pa, done);
            const Matrix s_tt = cov + a * submatrix(sigma, f.pa, f.pa) * a.transpose();
            set_submatrix(sigma, t, done, s_t_done);
            set_submatrix(sigma, done, t, s_t_done.transpose());
            set_submatrix(sigma, t, t, symmetrize(s_tt));
            const Vector mt = f.pa.empty() ? c : Vector(a * subvector(mu, f.pa) + c);
            for (std::size_t r = 0; r < t.size(); ++r) mu(t[r]) = mt(r);
        }
        done.insert(done.end(), f.k.begin(), f.k.end());
    }
    const Indices keep = (g.all() - x).members();
    std::vector<std::string> names;
    for (auto v : keep) names.push_back(g.name(v));
    return JointGaussian(names, symmetrize(submatrix(sigma, keep, keep)), subvector(mu, keep));
}

bool CorollaryReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CorollaryCheck& c) { return c.passed; });
}

CorollaryReport verify_corollary_steps(const Ucg& g, const NodeSet& x) {
    CorollaryReport report;
    const auto dec = chain_decomposition(g);
    const InterventionSpec spec = interfering_spec(g, x);
    NodeSet earlier(g.size());
    for (const NodeSet& k : dec.components) {
        const NodeSet y = k - x;
        const NodeSet pa = parents(g, k);
        const std::string label = join_names(g, k);
        if (!y.empty()) {
            const auto separated_in = [&](const NodeSet& done, const NodeSet& targets, const NodeSet& cond) {
                if (targets.empty()) return true;
                const AugmentedUcg a = augment(g, restrict_spec(g, spec, targets), done);
                return is_separated(a.graph, translate(g, y, a.graph), indicators(a, g, targets),
                                    translate(g, cond, a.graph));
            };
            {
                const NodeSet rest = earlier - pa - x;
                bool passed = true;
                if (!rest.empty()) {
                    const Ucg sub = induced_subgraph(g, g.all() - x);
                    passed = is_separated(sub, translate(g, y, sub), translate(g, rest, sub), translate(g, pa - x, sub));
                }
                report.checks.push_back({label, "factorization", passed});
            }
            report.checks.push_back({label, "rule2-parents", separated_in(x - pa, pa & x, pa)});
            report.checks.push_back({label, "rule2-component", separated_in(x - pa - k, k & x, pa | (k & x))});
            report.checks.push_back({label, "rule3-rest", separated_in(g.empty_set(), x - pa - k, pa | (k & x))});
        }
        earlier |= k;
    }
    return report;
}

}  // namespace ucg
