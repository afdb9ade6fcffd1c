#include "ucg/separation.hpp"

#include <array>
#include <bit>
#include <deque>
#include <set>
#include <tuple>

#include "ucg/error.hpp"

namespace ucg {

void validate_query(const Ucg& g, const SeparationQuery& q) {
    const std::size_t n = g.size();
    if (q.x.universe() != n || q.y.universe() != n || q.z.universe() != n)
        throw Error(ErrorCode::InvalidQuery, "query sets do not belong to this graph");
    if (q.x.empty() || q.y.empty()) throw Error(ErrorCode::InvalidQuery, "X and Y must be non-empty");
    if (q.x.intersects(q.y) || q.x.intersects(q.z) || q.y.intersects(q.z))
        throw Error(ErrorCode::InvalidQuery, "X, Y and Z must be pairwise disjoint");
}

namespace {

enum Arrival : int {
    TailIn = 0,            // route start, or arrived over an edge whose tail is here
    SolidHeadIn,           // arrived over A -> v
    DashedHeadIn,          // arrived over A --> v
    SectionAfterSolid,     // inside a section opened by A -> C1, no member in Z so far
    SectionAfterSolidHit,  // inside a section opened by A -> C1, some member in Z
    SectionPlain,          // inside any other section
    ArrivalCount
};

// Whether leaving v over an edge whose mark at v is `leave` keeps the route open.
bool may_leave(Arrival state, Mark leave, bool in_z) {
    switch (state) {
        case TailIn:
            return !in_z;
        case SolidHeadIn:
            switch (leave) {
                case Mark::Tail: return !in_z;
                case Mark::SolidHead:   // singleton collider section
                case Mark::DashedHead:  // collider node
                    return in_z;
                case Mark::Line: return true;
            }
            break;
        case DashedHeadIn:
            return leave == Mark::Tail ? !in_z : in_z;
        case SectionPlain:
            return leave == Mark::DashedHead ? in_z : !in_z;
        case SectionAfterSolid:
            switch (leave) {
                case Mark::Line: return true;
                case Mark::SolidHead: return in_z;  // collider section needs a member in Z
                case Mark::Tail: return !in_z;
                case Mark::DashedHead: return in_z;
            }
            break;
        case SectionAfterSolidHit:
            return leave == Mark::Line || leave == Mark::SolidHead;
        default:
            break;
    }
    return false;
}

Arrival arrive(Arrival state, Mark leave, Mark there, bool in_z) {
    switch (there) {
        case Mark::Tail: return TailIn;
        case Mark::SolidHead: return SolidHeadIn;
        case Mark::DashedHead: return DashedHeadIn;
        case Mark::Line: break;
    }
    (void)leave;
    switch (state) {
        case SolidHeadIn:
        case SectionAfterSolid:
            return in_z ? SectionAfterSolidHit : SectionAfterSolid;
        case SectionAfterSolidHit:
            return SectionAfterSolidHit;
        default:
            return SectionPlain;
    }
}

}  // namespace

bool is_separated(const Ucg& g, const SeparationQuery& q) {
    validate_query(g, q);
    const std::size_t n = g.size();
    std::vector<std::array<bool, ArrivalCount>> seen(n);
    for (auto& s : seen) s.fill(false);
    std::deque<std::pair<NodeIndex, Arrival>> queue;
    for (NodeIndex x : q.x.members()) {
        seen[x][TailIn] = true;
        queue.emplace_back(x, TailIn);
    }
    while (!queue.empty()) {
        const auto [v, state] = queue.front();
        queue.pop_front();
        if (q.y.contains(v) && state != SectionAfterSolidHit) return false;
        const bool in_z = q.z.contains(v);
        for (const Incidence& inc : g.incident(v)) {
            if (!may_leave(state, inc.here, in_z)) continue;
            const Arrival next = arrive(state, inc.here, inc.there, in_z);
            if (seen[inc.other][next]) continue;
            seen[inc.other][next] = true;
            queue.emplace_back(inc.other, next);
        }
    }
    return true;
}

bool is_separated(const Ucg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    return is_separated(g, SeparationQuery{x, y, z});
}

namespace {

struct RouteMarks {
    std::vector<Mark> left;   // left[k]: mark at route[k] of the edge to route[k-1]
    std::vector<Mark> right;  // right[k]: mark at route[k] of the edge to route[k+1]
};

RouteMarks route_marks(const Ucg& g, const std::vector<NodeIndex>& route) {
    RouteMarks m;
    m.left.assign(route.size(), Mark::Tail);
    m.right.assign(route.size(), Mark::Tail);
    for (std::size_t k = 0; k + 1 < route.size(); ++k) {
        bool found = false;
        for (const Incidence& inc : g.incident(route[k])) {
            if (inc.other != route[k + 1]) continue;
            m.right[k] = inc.here;
            m.left[k + 1] = inc.there;
            found = true;
            break;
        }
        if (!found)
            throw Error(ErrorCode::InvalidArgument,
                        "route steps between non-adjacent nodes " + g.name(route[k]) + " and " + g.name(route[k + 1]));
    }
    return m;
}

bool is_collider_node(const RouteMarks& m, std::size_t k, std::size_t length) {
    if (k == 0 || k + 1 >= length) return false;
    const Mark a = m.left[k], d = m.right[k];
    return (a == Mark::DashedHead && d != Mark::Tail) || (d == Mark::DashedHead && a != Mark::Tail);
}

// Checks positions [0, upto) whose sections are closed before `upto`.
bool closed_positions_ok(const RouteMarks& m, const std::vector<NodeIndex>& route, const NodeSet& z,
                         std::size_t upto) {
    const std::size_t length = route.size();
    std::size_t p = 0;
    while (p < upto) {
        std::size_t q = p;
        while (q + 1 < length && m.right[q] == Mark::Line) ++q;
        if (q >= upto) break;  // section still open
        const bool collider_section =
            p > 0 && q + 1 < length && m.left[p] == Mark::SolidHead && m.right[q] == Mark::SolidHead;
        if (collider_section) {
            bool hit = false;
            for (std::size_t k = p; k <= q; ++k) hit = hit || z.contains(route[k]);
            if (!hit) return false;
        } else {
            for (std::size_t k = p; k <= q; ++k) {
                const bool collider = is_collider_node(m, k, length);
                if (collider != z.contains(route[k])) return false;
            }
        }
        p = q + 1;
    }
    return true;
}

}  // namespace

bool is_z_open_route(const Ucg& g, const std::vector<NodeIndex>& route, const NodeSet& z) {
    if (route.empty()) return false;
    const RouteMarks m = route_marks(g, route);
    return closed_positions_ok(m, route, z, route.size());
}

bool route_oracle(const Ucg& g, const SeparationQuery& q) {
    validate_query(g, q);
    if (g.size() > kRouteOracleMaxNodes)
        throw Error(ErrorCode::GraphTooLarge, "route oracle limited to " + std::to_string(kRouteOracleMaxNodes) + " nodes");
    const std::size_t max_nodes = 6 * g.size() + 1;

    // Signature of a prefix: last node, mark entering the open tail section,
    // whether that section has more than one node, whether its first node is
    // in Z, and whether any node strictly between its first and last is in Z.
    using Signature = std::tuple<NodeIndex, int, bool, bool, bool>;
    auto signature_of = [&](const std::vector<NodeIndex>& route, const RouteMarks& m, std::size_t start) {
        const std::size_t last = route.size() - 1;
        const int entry = start == 0 ? -1 : static_cast<int>(m.left[start]);
        bool inner_hit = false;
        for (std::size_t k = start + 1; k < last; ++k) inner_hit = inner_hit || q.z.contains(route[k]);
        return Signature{route[last], entry, last > start, q.z.contains(route[start]), inner_hit};
    };

    std::set<Signature> expanded;
    std::deque<std::vector<NodeIndex>> frontier;
    for (NodeIndex x : q.x.members()) frontier.push_back({x});

    while (!frontier.empty()) {
        std::vector<NodeIndex> route = std::move(frontier.front());
        frontier.pop_front();
        const RouteMarks m = route_marks(g, route);

        std::size_t start = route.size() - 1;
        while (start > 0 && m.right[start - 1] == Mark::Line) --start;
        if (!closed_positions_ok(m, route, q.z, start)) continue;

        if (route.size() > 1 && q.y.contains(route.back()) && is_z_open_route(g, route, q.z)) return false;
        if (!expanded.insert(signature_of(route, m, start)).second) continue;
        if (route.size() >= max_nodes) continue;

        for (const Incidence& inc : g.incident(route.back())) {
            std::vector<NodeIndex> next = route;
            next.push_back(inc.other);
            frontier.push_back(std::move(next));
        }
    }
    return true;
}

bool has_pure_collider_route(const Ucg& g, NodeIndex i, NodeIndex j) {
    if (i >= g.size() || j >= g.size()) throw Error(ErrorCode::UnknownNode, "node index out of range");
    if (i == j) throw Error(ErrorCode::InvalidArgument, "pure collider routes join distinct nodes");
    if (g.adjacent(i, j)) return true;

    const auto dashed_children = [&](NodeIndex a) {
        NodeSet out(g.size());
        for (const Incidence& inc : g.incident(a))
            if (inc.here == Mark::Tail && inc.there == Mark::DashedHead) out.insert(inc.other);
        return out;
    };
    const auto solid_children = [&](NodeIndex a) {
        NodeSet out(g.size());
        for (const Incidence& inc : g.incident(a))
            if (inc.here == Mark::Tail && inc.there == Mark::SolidHead) out.insert(inc.other);
        return out;
    };
    // Nodes C with b -o C where b's mark is not a head at b (b --> C, b - C, b -> C).
    const auto pointed_or_joined = [&](NodeIndex b) {
        NodeSet out(g.size());
        for (const Incidence& inc : g.incident(b))
            if (inc.here == Mark::Tail || inc.here == Mark::Line) out.insert(inc.other);
        return out;
    };

    const NodeSet dashed_i = dashed_children(i), dashed_j = dashed_children(j);
    // A --> C <-- B, A --> C - B, A --> C <- B (either orientation).
    if (dashed_i.intersects(pointed_or_joined(j)) || dashed_j.intersects(pointed_or_joined(i))) return true;
    // A --> C1 - C2 <-- B.
    for (NodeIndex c1 : dashed_i.members())
        if (neighbours(g, NodeSet(g.size(), {c1})).intersects(dashed_j)) return true;

    // A -> C1 - ... - Cn <- B: solid children of i and j sharing a chain component.
    const NodeSet solid_i = solid_children(i), solid_j = solid_children(j);
    if (solid_i.empty() || solid_j.empty()) return false;
    std::vector<bool> seen(g.size(), false);
    std::deque<NodeIndex> queue;
    for (NodeIndex c : solid_i.members()) {
        seen[c] = true;
        queue.push_back(c);
    }
    while (!queue.empty()) {
        const NodeIndex v = queue.front();
        queue.pop_front();
        if (solid_j.contains(v)) return true;
        for (const Incidence& inc : g.incident(v))
            if (inc.here == Mark::Line && !seen[inc.other]) {
                seen[inc.other] = true;
                queue.push_back(inc.other);
            }
    }
    return false;
}

void for_each_disjoint_triple(std::size_t n, TripleOrder order,
                              const std::function<void(const NodeSet&, const NodeSet&, const NodeSet&)>& visit) {
    if (n > 16) throw Error(ErrorCode::GraphTooLarge, "triple enumeration limited to 16 nodes");
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 4;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t x = 0, y = 0, z = 0, c = code;
        for (std::size_t v = 0; v < n; ++v, c /= 4) {
            const auto bit = std::uint64_t{1} << v;
            switch (c % 4) {
                case 1: x |= bit; break;
                case 2: y |= bit; break;
                case 3: z |= bit; break;
                default: break;
            }
        }
        if (x == 0 || y == 0) continue;
        if (order == TripleOrder::Unordered && std::countr_zero(y) < std::countr_zero(x)) continue;
        visit(NodeSet::from_mask(n, x), NodeSet::from_mask(n, y), NodeSet::from_mask(n, z));
    }
}

bool same_separations(const Ucg& g, const Ucg& h) {
    if (g.size() != h.size()) throw Error(ErrorCode::NodeSetMismatch, "graphs have different node counts");
    if (g.size() > kSameSeparationsMaxNodes)
        throw Error(ErrorCode::GraphTooLarge, "separation comparison limited to 8 nodes");
    std::vector<NodeIndex> to_h(g.size());
    for (NodeIndex v = 0; v < g.size(); ++v) {
        if (!h.has_node(g.name(v)))
            throw Error(ErrorCode::NodeSetMismatch, "node '" + g.name(v) + "' missing from second graph");
        to_h[v] = h.index_of(g.name(v));
    }
    auto map = [&](const NodeSet& s) {
        NodeSet out(h.size());
        for (NodeIndex v : s.members()) out.insert(to_h[v]);
        return out;
    };
    bool same = true;
    for_each_disjoint_triple(g.size(), TripleOrder::Unordered, [&](const NodeSet& x, const NodeSet& y, const NodeSet& z) {
        if (!same) return;
        if (is_separated(g, x, y, z) != is_separated(h, map(x), map(y), map(z))) same = false;
    });
    return same;
}

}  // namespace ucg
