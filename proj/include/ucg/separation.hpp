#ifndef UCG_SEPARATION_HPP
#define UCG_SEPARATION_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "ucg/graph.hpp"

namespace ucg {

struct SeparationQuery {
    NodeSet x;
    NodeSet y;
    NodeSet z;
};

/// Throws InvalidQuery unless x, y, z are pairwise disjoint subsets of V with x, y non-empty.
void validate_query(const Ucg& g, const SeparationQuery& q);

/// X separated from Y given Z: no Z-open route between them. Collider nodes
/// (A --> C <-- B, A --> C - B, A --> C <- B) must lie in Z, collider sections
/// (A -> C1 - ... - Cn <- B) need a member in Z, and every other node on the
/// route must lie outside Z.
///
/// Decided by breadth-first search over (node, arrival) states, where the
/// arrival records the mark the route left at the node and, inside an
/// undirected section, whether the section opened with a solid head and has
/// already met Z. A shortest Z-open route never repeats a state, so the search
/// is exact.
bool is_separated(const Ucg& g, const SeparationQuery& q);
bool is_separated(const Ucg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z);

/// Checks a concrete route (consecutive nodes adjacent, repeats allowed)
/// against the Z-open conditions by classifying every node occurrence from
/// its neighbours on the route.
bool is_z_open_route(const Ucg& g, const std::vector<NodeIndex>& route, const NodeSet& z);

inline constexpr std::size_t kRouteOracleMaxNodes = 10;

/// Independent decision procedure for small graphs (|V| <= 10): enumerates
/// routes breadth first up to 6|V| edges, judging each one with
/// is_z_open_route. Prefixes whose open tail section and last node coincide
/// have identical continuations, so only the first of them is extended.
bool route_oracle(const Ucg& g, const SeparationQuery& q);

/// A route between i and j whose intermediate nodes are all collider nodes or
/// lie in collider sections.
bool has_pure_collider_route(const Ucg& g, NodeIndex i, NodeIndex j);

inline constexpr std::size_t kSameSeparationsMaxNodes = 8;

/// True iff both graphs (same node names, any order) separate exactly the same triples.
bool same_separations(const Ucg& g, const Ucg& h);

enum class TripleOrder { Ordered, Unordered };

/// Calls visit(x, y, z) for every triple of pairwise disjoint subsets of an
/// n-node universe with x, y non-empty. Unordered visits {x, y} once (the side
/// holding the smallest index comes first). Limited to n <= 16.
void for_each_disjoint_triple(std::size_t n, TripleOrder order,
                              const std::function<void(const NodeSet&, const NodeSet&, const NodeSet&)>& visit);

}  // namespace ucg

#endif  // UCG_SEPARATION_HPP
