#ifndef UCG_MARKOV_HPP
#define UCG_MARKOV_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucg/model.hpp"

namespace ucg {

enum class Origin { Global, B1, B2, B3, P1, P2, L1, L2 };
enum class Suite { Global, Block, Pairwise, Local };

std::string_view to_string(Origin o);
std::string_view to_string(Suite s);
std::optional<Suite> suite_from_string(std::string_view text);
std::vector<Origin> origins_of(Suite s);

struct IndependenceStatement {
    NodeSet x, y, z;
    Origin origin;
};

struct Enumeration {
    std::vector<IndependenceStatement> statements;
    /// Instances whose x or y came out empty.
    std::size_t dropped = 0;
};

inline constexpr std::size_t kGlobalMaxNodes = 8;

/// Statements of one property, in node order. Global lists every separated
/// unordered triple and is limited to kGlobalMaxNodes nodes.
Enumeration enumerate_property(const Ucg& g, Origin which);
Enumeration enumerate_suite(const Ucg& g, Suite which);

struct Violation {
    IndependenceStatement statement;
    double residual;  // largest |conditional cross covariance|
};

struct PropertyReport {
    std::size_t total = 0;
    std::size_t dropped = 0;
    std::vector<Violation> failures;
    bool ok() const { return failures.empty(); }
};

PropertyReport check_statements(const JointGaussian& jg, const Enumeration& e, double tol);
PropertyReport check_property(const UcgModel& m, Suite which, double tol);

struct EquivalenceReport {
    std::size_t trials = 0;
    /// Trials in which all four suites held.
    std::size_t all_passed = 0;
    /// Per suite, in Suite order.
    std::vector<std::size_t> suite_failures = std::vector<std::size_t>(4, 0);
    /// Trials where a structural zero was made nonzero, and how many of those
    /// broke at least one suite.
    std::size_t perturbed = 0;
    std::size_t detected = 0;
};

/// Random parameterizations of g checked against all suites, each followed by a
/// perturbation of one structurally zero entry. |V| <= kGlobalMaxNodes.
EquivalenceReport cross_equivalence(const Ucg& g, std::size_t trials, std::uint64_t seed, double tol = 1e-8);

}  // namespace ucg

#endif  // UCG_MARKOV_HPP
