#ifndef UCG_TESTS_SUPPORT_HPP
#define UCG_TESTS_SUPPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ucg/gaussian.hpp"
#include "ucg/graph.hpp"
#include "ucg/linalg.hpp"
#include "ucg/model.hpp"

namespace ucg::testing {

// V1 -> D1, G1 --> D1, V2 -> D2, G2 --> D2, D1 - D2
Ucg spillover_graph();
// 1 -> 3 - 4 <- 2
Ucg four_chain();

NodeSet set(const Ucg& g, const std::vector<std::string>& names);

/// Edge mark at `at` of the edge joining at and other.
enum class End { None, Tail, Solid, Dashed, Line };
End end_at(const Ucg& g, NodeIndex at, NodeIndex other);

/// Second, separately written reading of the route conditions: occurrences
/// are classified by looking at the raw edges on both sides, sections by
/// scanning maximal runs of undirected edges.
bool route_open(const Ucg& g, const std::vector<NodeIndex>& route, const NodeSet& z);

/// open[a][b] is the set of Z masks under which some walk of at most
/// max_nodes nodes from a to b is open. Small graphs only (|V| <= 6).
struct WalkTable {
    std::size_t n = 0;
    std::vector<std::vector<std::vector<bool>>> open;
    bool separated(std::uint64_t x, std::uint64_t y, std::uint64_t z) const;
};
WalkTable enumerate_walks(const Ucg& g, std::size_t max_nodes);

/// LWF reading (solid edges only): separation in the moral graph of the
/// anterior set of X u Y u Z, where parents of each chain component are
/// joined pairwise.
bool moral_separated(const Ucg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z);

/// Covariance of the AMP structural system V = B V + e, with B supported on
/// dashed edges and e independent across components with precision supported
/// on undirected edges. Entries drawn from the given seed.
Matrix amp_covariance(const Ucg& g, std::uint64_t seed);

Indices to_indices(const NodeSet& s);

}  // namespace ucg::testing

#endif  // UCG_TESTS_SUPPORT_HPP
