#ifndef UCG_MODEL_HPP
#define UCG_MODEL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ucg/gaussian.hpp"
#include "ucg/graph.hpp"

namespace ucg {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Free (true) and structurally zero (false) positions for one chain component.
/// Index lists are sorted node indices.
struct ZeroPattern {
    Indices k, mo, fa;
    Mask beta_mo;   // |K| x |Mo(K)|, free iff j --> i
    Mask omega_fa;  // |K| x |Fa(K)|, free iff j -> i
    Mask omega_kk;  // |K| x |K|, free iff i = j or i - j
};

/// Throws NotAComponent unless k is a chain component of g.
ZeroPattern zero_pattern(const Ucg& g, const NodeSet& k);

/// Zero restrictions on beta over Pa(K) columns when the mother/father split is
/// applied literally without requiring Fa(K) and Mo(K) to be disjoint: column j
/// is restricted in row i iff j is in Mo(K) but not Mo(i). Columns follow the
/// sorted Pa(K).
Mask literal_beta_restrictions(const Ucg& g, const NodeSet& k);

/// Parameters of p(K | Pa(K)). The father block of beta is derived, never stored.
struct ComponentParams {
    Indices k, mo, fa;
    Matrix beta_mo;
    Matrix omega_kk;
    Matrix omega_kfa;

    Matrix lambda() const { return spd_inverse(omega_kk); }
    Matrix beta_fa() const;
    /// Sorted Pa(K) = Mo(K) u Fa(K).
    Indices pa() const;
    /// beta over pa().
    Matrix beta() const;
};

/// Dense precision for a set of parentless variables, replacing their own
/// component parameters (used for the parent marginal of the estimation study).
struct RootBlock {
    Indices nodes;
    Matrix precision;
};

struct UcgModel {
    Ucg graph;
    /// In topological order; components covered by the root block are absent.
    std::vector<ComponentParams> components;
    std::optional<RootBlock> root;
};

/// p(K | Pa) for one block of the factorization: a chain component, or the root block (no parents).
struct Factor {
    Indices k, pa;
    Matrix beta;
    Matrix lambda;
};

/// The model's factors in topological order, root block first.
std::vector<Factor> factors(const UcgModel& m);

/// Checks shapes, masks (structural zeros exactly zero) and positive definiteness.
void validate_model(const UcgModel& m);

JointGaussian assemble_joint(const UcgModel& m);

Dataset simulate(const UcgModel& m, std::size_t n, std::uint64_t seed);

/// Parameters that share an axis-aligned position with an edge of the graph.
std::size_t count_edge_parameters(const UcgModel& m);

inline constexpr std::size_t kDefaultRejectionCap = 100000;

/// Mothers M1.., fathers F1.., children C1..; mother --> child, father -> child
/// and child - child edges drawn independently with probability p_edge until
/// every parent has a child and the children form one chain component.
Ucg random_ucg(std::size_t n_mo, std::size_t n_fa, std::size_t n_k, double p_edge, std::uint64_t seed,
               std::size_t max_attempts = kDefaultRejectionCap);

/// General chain graph on n nodes V1..Vn: a random node order cut into blocks,
/// undirected edges within blocks and directed edges of random kind from
/// earlier to later blocks, each with probability p_edge. Parents that would be
/// both father and mother of a component have their edges into it unified.
Ucg random_chain_graph(std::size_t n, double p_edge, std::uint64_t seed);

struct ParamOptions {
    double zero_fraction = 0.0;
    /// Give all parentless components one joint dense precision block.
    bool dense_root = false;
    std::size_t max_attempts = kDefaultRejectionCap;
};

/// beta_Mo, omega_KFa and off-diagonal omega_KK free entries ~ U[-3, 3],
/// omega_KK diagonal ~ U[0, 30], resampled until positive definite. With
/// zero_fraction f, floor(f * #edge parameters) of them, chosen across all
/// blocks, are set to zero.
UcgModel random_params(const Ucg& g, std::uint64_t seed, const ParamOptions& options = {});

}  // namespace ucg

#endif  // UCG_MODEL_HPP
