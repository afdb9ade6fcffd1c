#include "ucg/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>

#include "ucg/error.hpp"

namespace ucg {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::DuplicateNode: return "DuplicateNode";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::SemidirectedCycle: return "SemidirectedCycle";
        case ErrorCode::FaMoOverlap: return "FaMoOverlap";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::InvalidQuery: return "InvalidQuery";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::GraphTooLarge: return "GraphTooLarge";
        case ErrorCode::NodeSetMismatch: return "NodeSetMismatch";
        case ErrorCode::GraphMismatch: return "GraphMismatch";
        case ErrorCode::NotAComponent: return "NotAComponent";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::SingularSampleCovariance: return "SingularSampleCovariance";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::MarkovViolation: return "MarkovViolation";
        case ErrorCode::RejectionLimit: return "RejectionLimit";
        case ErrorCode::OverlappingTargets: return "OverlappingTargets";
        case ErrorCode::NonInterferingUnsupported: return "NonInterferingUnsupported";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::string_view to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::Undirected: return "undirected";
        case EdgeKind::SolidDirected: return "solid_directed";
        case EdgeKind::DashedDirected: return "dashed_directed";
    }
    return "undirected";
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view text) {
    if (text == "undirected") return EdgeKind::Undirected;
    if (text == "solid_directed") return EdgeKind::SolidDirected;
    if (text == "dashed_directed") return EdgeKind::DashedDirected;
    return std::nullopt;
}

namespace {

std::string arrow(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::Undirected: return " - ";
        case EdgeKind::SolidDirected: return " -> ";
        case EdgeKind::DashedDirected: return " --> ";
    }
    return " ? ";
}

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
    std::vector<std::size_t> parent;
};

// Undirected-connected groups, numbered by smallest member.
std::vector<std::size_t> undirected_groups(const Ucg& g, std::size_t& count) {
    UnionFind uf(g.size());
    for (const Edge& e : g.edges())
        if (e.kind == EdgeKind::Undirected) uf.unite(e.from, e.to);
    std::vector<std::size_t> label(g.size(), g.size());
    count = 0;
    std::vector<std::size_t> root_label(g.size(), g.size());
    for (NodeIndex v = 0; v < g.size(); ++v) {
        const std::size_t r = uf.find(v);
        if (root_label[r] == g.size()) root_label[r] = count++;
        label[v] = root_label[r];
    }
    return label;
}

std::vector<NodeIndex> undirected_path(const Ucg& g, NodeIndex from, NodeIndex to) {
    std::vector<NodeIndex> prev(g.size(), g.size());
    std::deque<NodeIndex> queue{from};
    prev[from] = from;
    while (!queue.empty()) {
        const NodeIndex v = queue.front();
        queue.pop_front();
        if (v == to) break;
        for (const Incidence& inc : g.incident(v)) {
            if (inc.here != Mark::Line || prev[inc.other] != g.size()) continue;
            prev[inc.other] = v;
            queue.push_back(inc.other);
        }
    }
    std::vector<NodeIndex> path;
    for (NodeIndex v = to; v != from; v = prev[v]) path.push_back(v);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
}

void validate_cycles(const Ucg& g) {
    std::size_t count = 0;
    const auto group = undirected_groups(g, count);

    for (const Edge& e : g.edges()) {
        if (e.kind == EdgeKind::Undirected || group[e.from] != group[e.to]) continue;
        const auto back = undirected_path(g, e.to, e.from);
        std::ostringstream msg;
        msg << "cycle " << g.name(e.from) << arrow(e.kind) << g.name(e.to);
        for (std::size_t i = 1; i < back.size(); ++i) msg << " - " << g.name(back[i]);
        throw Error(ErrorCode::SemidirectedCycle, msg.str());
    }

    // Cycle check on the contracted component graph.
    std::vector<std::vector<std::pair<std::size_t, const Edge*>>> succ(count);
    for (const Edge& e : g.edges())
        if (e.kind != EdgeKind::Undirected) succ[group[e.from]].push_back({group[e.to], &e});

    enum class Colour { White, Grey, Black };
    std::vector<Colour> colour(count, Colour::White);
    std::vector<const Edge*> stack_edges;
    std::vector<std::size_t> stack_nodes;

    std::function<bool(std::size_t)> dfs = [&](std::size_t c) -> bool {
        colour[c] = Colour::Grey;
        stack_nodes.push_back(c);
        for (auto [d, edge] : succ[c]) {
            stack_edges.push_back(edge);
            if (colour[d] == Colour::Grey) {
                std::ostringstream msg;
                msg << "cycle";
                auto start = std::find(stack_nodes.begin(), stack_nodes.end(), d) - stack_nodes.begin();
                for (std::size_t i = static_cast<std::size_t>(start); i < stack_edges.size(); ++i) {
                    const Edge* s = stack_edges[i];
                    msg << (i == static_cast<std::size_t>(start) ? " " : ", ") << g.name(s->from) << arrow(s->kind)
                        << g.name(s->to);
                }
                throw Error(ErrorCode::SemidirectedCycle, msg.str());
            }
            if (colour[d] == Colour::White) dfs(d);
            stack_edges.pop_back();
        }
        stack_nodes.pop_back();
        colour[c] = Colour::Black;
        return false;
    };
    for (std::size_t c = 0; c < count; ++c)
        if (colour[c] == Colour::White) dfs(c);
}

void validate_fa_mo(const Ucg& g) {
    const auto cd = chain_decomposition(g);
    for (const NodeSet& k : cd.components) {
        const NodeSet overlap = fathers(g, k) & mothers(g, k);
        if (overlap.empty()) continue;
        std::ostringstream msg;
        msg << "node(s)";
        for (auto v : overlap.members()) msg << ' ' << g.name(v);
        msg << " both father and mother of component {";
        bool first = true;
        for (auto v : k.members()) {
            msg << (first ? "" : ",") << g.name(v);
            first = false;
        }
        msg << '}';
        throw Error(ErrorCode::FaMoOverlap, msg.str());
    }
}

}  // namespace

NodeIndex Ucg::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(name) + "'");
    return it->second;
}

bool Ucg::has_node(std::string_view name) const { return index_.count(std::string(name)) != 0; }

bool Ucg::adjacent(NodeIndex a, NodeIndex b) const { return edge_between(a, b).has_value(); }

std::optional<Edge> Ucg::edge_between(NodeIndex a, NodeIndex b) const {
    for (const Incidence& inc : incidence_.at(a)) {
        if (inc.other != b) continue;
        if (inc.here == Mark::Line) return Edge{std::min(a, b), std::max(a, b), EdgeKind::Undirected};
        if (inc.here == Mark::Tail)
            return Edge{a, b, inc.there == Mark::SolidHead ? EdgeKind::SolidDirected : EdgeKind::DashedDirected};
        return Edge{b, a, inc.here == Mark::SolidHead ? EdgeKind::SolidDirected : EdgeKind::DashedDirected};
    }
    return std::nullopt;
}

bool Ucg::has_edge(NodeIndex from, NodeIndex to, EdgeKind kind) const {
    auto e = edge_between(from, to);
    if (!e || e->kind != kind) return false;
    return kind == EdgeKind::Undirected || e->from == from;
}

NodeSet Ucg::set_of(const std::vector<std::string>& names) const {
    NodeSet s(size());
    for (const auto& n : names) s.insert(index_of(n));
    return s;
}

std::vector<std::string> Ucg::names_of(const NodeSet& s) const {
    std::vector<std::string> out;
    for (auto v : s.members()) out.push_back(names_.at(v));
    return out;
}

std::size_t Ucg::count_edges(EdgeKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [kind](const Edge& e) { return e.kind == kind; }));
}

Ucg build_ucg(const std::vector<std::string>& nodes, const std::vector<Edge>& edges, Validation validation) {
    Ucg g;
    g.names_ = nodes;
    for (NodeIndex v = 0; v < nodes.size(); ++v) {
        if (nodes[v].empty()) throw Error(ErrorCode::InvalidArgument, "empty node name");
        if (!g.index_.emplace(nodes[v], v).second)
            throw Error(ErrorCode::DuplicateNode, "node '" + nodes[v] + "' listed twice");
    }
    g.incidence_.assign(nodes.size(), {});
    std::vector<std::pair<NodeIndex, NodeIndex>> seen;
    for (Edge e : edges) {
        if (e.from >= nodes.size() || e.to >= nodes.size())
            throw Error(ErrorCode::UnknownNode, "edge endpoint out of range");
        if (e.from == e.to) throw Error(ErrorCode::SelfLoop, "self-loop at " + nodes[e.from]);
        if (e.kind == EdgeKind::Undirected && e.to < e.from) std::swap(e.from, e.to);
        seen.emplace_back(std::min(e.from, e.to), std::max(e.from, e.to));
        g.edges_.push_back(e);
    }
    std::vector<std::pair<NodeIndex, NodeIndex>> sorted = seen;
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
        throw Error(ErrorCode::DuplicateEdge,
                    "more than one edge between " + nodes[dup->first] + " and " + nodes[dup->second]);

    std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    for (const Edge& e : g.edges_) {
        switch (e.kind) {
            case EdgeKind::Undirected:
                g.incidence_[e.from].push_back({e.to, Mark::Line, Mark::Line});
                g.incidence_[e.to].push_back({e.from, Mark::Line, Mark::Line});
                break;
            case EdgeKind::SolidDirected:
                g.incidence_[e.from].push_back({e.to, Mark::Tail, Mark::SolidHead});
                g.incidence_[e.to].push_back({e.from, Mark::SolidHead, Mark::Tail});
                break;
            case EdgeKind::DashedDirected:
                g.incidence_[e.from].push_back({e.to, Mark::Tail, Mark::DashedHead});
                g.incidence_[e.to].push_back({e.from, Mark::DashedHead, Mark::Tail});
                break;
        }
    }
    for (auto& list : g.incidence_)
        std::sort(list.begin(), list.end(), [](const Incidence& a, const Incidence& b) { return a.other < b.other; });

    validate_cycles(g);
    if (validation == Validation::Full) validate_fa_mo(g);
    return g;
}

Ucg build_ucg(const std::vector<std::string>& nodes, const std::vector<EdgeSpec>& edges, Validation validation) {
    std::unordered_map<std::string, NodeIndex> index;
    for (NodeIndex v = 0; v < nodes.size(); ++v) index.emplace(nodes[v], v);
    auto lookup = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw Error(ErrorCode::UnknownNode, "edge mentions unknown node '" + name + "'");
        return it->second;
    };
    std::vector<Edge> resolved;
    resolved.reserve(edges.size());
    for (const auto& e : edges) resolved.push_back({lookup(e.from), lookup(e.to), e.kind});
    return build_ucg(nodes, resolved, validation);
}

ChainDecomposition chain_decomposition(const Ucg& g) {
    std::size_t count = 0;
    const auto group = undirected_groups(g, count);

    std::vector<std::vector<std::size_t>> succ(count);
    std::vector<std::size_t> indegree(count, 0);
    for (const Edge& e : g.edges()) {
        if (e.kind == EdgeKind::Undirected) continue;
        succ[group[e.from]].push_back(group[e.to]);
        ++indegree[group[e.to]];
    }
    // Groups are numbered by smallest member, so a min-heap on the label breaks ties by node order.
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t c = 0; c < count; ++c)
        if (indegree[c] == 0) ready.push(c);

    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const std::size_t c = ready.top();
        ready.pop();
        order.push_back(c);
        for (std::size_t d : succ[c])
            if (--indegree[d] == 0) ready.push(d);
    }
    if (order.size() != count) throw Error(ErrorCode::SemidirectedCycle, "component graph is cyclic");

    std::vector<std::size_t> position(count);
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

    ChainDecomposition cd;
    cd.components.assign(count, NodeSet(g.size()));
    cd.component_of.resize(g.size());
    for (NodeIndex v = 0; v < g.size(); ++v) {
        cd.component_of[v] = position[group[v]];
        cd.components[position[group[v]]].insert(v);
    }
    return cd;
}

namespace {

template <typename Pred>
NodeSet collect(const Ucg& g, const NodeSet& x, Pred pred) {
    NodeSet out(g.size());
    for (NodeIndex v : x.members())
        for (const Incidence& inc : g.incident(v))
            if (pred(inc)) out.insert(inc.other);
    return out;
}

}  // namespace

NodeSet parents(const Ucg& g, const NodeSet& x) {
    return collect(g, x, [](const Incidence& i) { return i.there == Mark::Tail; });
}

NodeSet fathers(const Ucg& g, const NodeSet& x) {
    return collect(g, x, [](const Incidence& i) { return i.here == Mark::SolidHead; });
}

NodeSet mothers(const Ucg& g, const NodeSet& x) {
    return collect(g, x, [](const Incidence& i) { return i.here == Mark::DashedHead; });
}

NodeSet neighbours(const Ucg& g, const NodeSet& x) {
    return collect(g, x, [](const Incidence& i) { return i.here == Mark::Line; });
}

NodeSet adjacents(const Ucg& g, const NodeSet& x) {
    return collect(g, x, [](const Incidence&) { return true; });
}

NodeSet non_descendants(const Ucg& g, const NodeSet& x) {
    const std::size_t n = g.size();
    // State (v, seen_directed); a node is a descendant when reached after a directed edge.
    std::vector<std::array<bool, 2>> visited(n, {false, false});
    std::deque<std::pair<NodeIndex, int>> queue;
    for (NodeIndex v : x.members()) {
        visited[v][0] = true;
        queue.emplace_back(v, 0);
    }
    while (!queue.empty()) {
        auto [v, directed] = queue.front();
        queue.pop_front();
        for (const Incidence& inc : g.incident(v)) {
            int next = -1;
            if (inc.here == Mark::Line) next = directed;
            else if (inc.here == Mark::Tail) next = 1;
            if (next < 0 || visited[inc.other][next]) continue;
            visited[inc.other][next] = true;
            queue.emplace_back(inc.other, next);
        }
    }
    NodeSet nd(n);
    for (NodeIndex v = 0; v < n; ++v)
        if (!visited[v][1]) nd.insert(v);
    return nd;
}

NodeSets node_sets(const Ucg& g, const NodeSet& x) {
    if (x.universe() != g.size()) throw Error(ErrorCode::UnknownNode, "node set does not belong to this graph");
    return NodeSets{parents(g, x),    mothers(g, x),  fathers(g, x),
                    neighbours(g, x), adjacents(g, x), non_descendants(g, x)};
}

Ucg induced_subgraph(const Ucg& g, const NodeSet& u) {
    if (u.universe() != g.size()) throw Error(ErrorCode::UnknownNode, "node set does not belong to this graph");
    std::vector<NodeIndex> keep = u.members();
    std::vector<NodeIndex> remap(g.size(), g.size());
    std::vector<std::string> names;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        remap[keep[i]] = i;
        names.push_back(g.name(keep[i]));
    }
    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        if (u.contains(e.from) && u.contains(e.to)) edges.push_back({remap[e.from], remap[e.to], e.kind});
    return build_ucg(names, edges, Validation::SkipFaMo);
}

}  // namespace ucg
