#ifndef UCG_GRAPH_HPP
#define UCG_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ucg/node_set.hpp"

namespace ucg {

enum class EdgeKind { Undirected, SolidDirected, DashedDirected };

std::string_view to_string(EdgeKind kind);
std::optional<EdgeKind> edge_kind_from_string(std::string_view text);

/// The symbol an edge leaves at one of its endpoints.
enum class Mark { Tail, SolidHead, DashedHead, Line };

/// Edge as supplied by a caller, naming its endpoints.
struct EdgeSpec {
    std::string from;
    std::string to;
    EdgeKind kind;
};

/// Stored edge. Undirected edges keep the endpoint with the smaller node index in `from`.
struct Edge {
    NodeIndex from;
    NodeIndex to;
    EdgeKind kind;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// One edge seen from one of its endpoints.
struct Incidence {
    NodeIndex other;
    Mark here;   // mark at the endpoint owning this record
    Mark there;  // mark at `other`
};

enum class Validation { Full, SkipFaMo };

/// Unified chain graph: undirected, solid directed and dashed directed edges,
/// at most one edge per node pair, no semidirected cycles and, unless built
/// with Validation::SkipFaMo, disjoint fathers and mothers for every chain
/// component. Immutable once built.
class Ucg {
public:
    Ucg() = default;

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& nodes() const noexcept { return names_; }
    const std::string& name(NodeIndex v) const { return names_.at(v); }
    NodeIndex index_of(std::string_view name) const;
    bool has_node(std::string_view name) const;

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Incidence>& incident(NodeIndex v) const { return incidence_.at(v); }

    bool adjacent(NodeIndex a, NodeIndex b) const;
    /// Kind of the edge joining a and b, if any (orientation-free lookup).
    std::optional<Edge> edge_between(NodeIndex a, NodeIndex b) const;
    bool has_edge(NodeIndex from, NodeIndex to, EdgeKind kind) const;

    NodeSet empty_set() const { return NodeSet(size()); }
    NodeSet all() const { return NodeSet::full(size()); }
    NodeSet set_of(const std::vector<std::string>& names) const;
    std::vector<std::string> names_of(const NodeSet& s) const;

    std::size_t count_edges(EdgeKind kind) const;

    friend Ucg build_ucg(const std::vector<std::string>& nodes, const std::vector<EdgeSpec>& edges,
                         Validation validation);
    friend Ucg build_ucg(const std::vector<std::string>& nodes, const std::vector<Edge>& edges,
                         Validation validation);

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> incidence_;
};

Ucg build_ucg(const std::vector<std::string>& nodes, const std::vector<EdgeSpec>& edges,
              Validation validation = Validation::Full);
Ucg build_ucg(const std::vector<std::string>& nodes, const std::vector<Edge>& edges,
              Validation validation = Validation::Full);

/// Chain components in a topological order; ties broken by smallest member index.
struct ChainDecomposition {
    std::vector<NodeSet> components;
    std::vector<std::size_t> component_of;
};

ChainDecomposition chain_decomposition(const Ucg& g);

NodeSet parents(const Ucg& g, const NodeSet& x);
NodeSet fathers(const Ucg& g, const NodeSet& x);
NodeSet mothers(const Ucg& g, const NodeSet& x);
NodeSet neighbours(const Ucg& g, const NodeSet& x);
NodeSet adjacents(const Ucg& g, const NodeSet& x);
/// Nodes B with no route A -o ... -> ... -o B or A -o ... -> ... -o B (dashed) from any A in x.
NodeSet non_descendants(const Ucg& g, const NodeSet& x);

struct NodeSets {
    NodeSet pa, mo, fa, ne, ad, nd;
};

NodeSets node_sets(const Ucg& g, const NodeSet& x);

/// Subgraph induced by u, keeping g's node order. The Fa/Mo requirement is not
/// re-validated because interventional subgraphs are built from it.
Ucg induced_subgraph(const Ucg& g, const NodeSet& u);

}  // namespace ucg

#endif  // UCG_GRAPH_HPP
