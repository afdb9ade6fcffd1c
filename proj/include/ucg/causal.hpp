#ifndef UCG_CAUSAL_HPP
#define UCG_CAUSAL_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucg/gaussian.hpp"
#include "ucg/model.hpp"

namespace ucg {

/// How an intervention is delivered: Interfering adds F -> V (it may reach the
/// rest of V's component), NonInterfering adds F --> V.
enum class Mechanism { Interfering, NonInterfering };

std::string_view to_string(Mechanism m);
std::optional<Mechanism> mechanism_from_string(std::string_view text);

struct InterventionSpec {
    std::map<std::string, double> assignments;
    std::map<std::string, Mechanism> mechanism;

    /// Throws UnknownNode / InvalidArgument unless every target is a node of g with a mechanism.
    void validate(const Ucg& g) const;
    std::vector<std::string> targets() const;
};

/// Every variable of x set to 0 by an interfering mechanism.
InterventionSpec interfering_spec(const Ucg& g, const NodeSet& x);

/// (G_{V minus done})' with one indicator parent per remaining target.
struct AugmentedUcg {
    Ucg graph;
    /// (variable, indicator) pairs, by name.
    std::vector<std::pair<std::string, std::string>> f_nodes;

    const std::string& indicator_of(const std::string& variable) const;
};

/// Indicator for V is named F_V (extra underscores on a name clash). Only
/// targets of `spec` get one. Throws OverlappingTargets if a target lies in done.
AugmentedUcg augment(const Ucg& g, const InterventionSpec& spec, const NodeSet& done);

/// Separation condition of do-calculus rule 1, 2 or 3 on (G_{V minus x})':
/// rule 1 Y _|_ Z | W; rule 2 Y _|_ F_Z | W u Z; rule 3 Y _|_ F_Z | W. The
/// indicators use spec's mechanism for each member of z. An empty z makes the
/// rule hold vacuously.
bool rule_applies(const Ucg& g, int rule, const NodeSet& x, const NodeSet& y, const NodeSet& z, const NodeSet& w,
                  const InterventionSpec& spec);

/// Gaussian of V minus X under do(X = x): the product over components of
/// p(K minus X | Pa(K) u (K n X)), chained in topological order. Throws
/// NonInterferingUnsupported for a non-interfering target in a component
/// with more than one node.
JointGaussian identified_effect(const UcgModel& m, const InterventionSpec& spec);

struct CorollaryCheck {
    std::string component;  // names joined by commas
    std::string step;       // "factorization", "rule2-parents", "rule2-component", "rule3-rest"
    bool passed;
};

struct CorollaryReport {
    std::vector<CorollaryCheck> checks;
    bool ok() const;
};

/// The separation statements behind the product formula for interfering
/// interventions on x, per component K with K minus X non-empty:
///   K\X _|_ (earlier components)\Pa(K)\X | Pa(K)\X     in G_{V\X}
///   K\X _|_ F_{Pa(K) n X} | Pa(K)                       in (G_{V\[X\Pa(K)]})'
///   K\X _|_ F_{K n X} | Pa(K) u (K n X)                 in (G_{V\[X\Pa(K)\K]})'
///   K\X _|_ F_{X\Pa(K)\K} | Pa(K) u (K n X)             in G'
/// Empty indicator sets pass vacuously.
CorollaryReport verify_corollary_steps(const Ucg& g, const NodeSet& x);

}  // namespace ucg

#endif  // UCG_CAUSAL_HPP
