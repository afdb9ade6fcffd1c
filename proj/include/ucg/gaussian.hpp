#ifndef UCG_GAUSSIAN_HPP
#define UCG_GAUSSIAN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ucg/graph.hpp"
#include "ucg/linalg.hpp"

namespace ucg {

/// Multivariate normal over named variables. The mean is zero except for
/// interventional distributions.
class JointGaussian {
public:
    JointGaussian() = default;
    /// Throws InvalidArgument on shape or symmetry problems (1e-12 relative),
    /// SingularMatrix unless sigma is positive definite.
    JointGaussian(std::vector<std::string> variables, Matrix sigma);
    JointGaussian(std::vector<std::string> variables, Matrix sigma, Vector mean);

    std::size_t size() const noexcept { return variables_.size(); }
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const Matrix& sigma() const noexcept { return sigma_; }
    const Vector& mean() const noexcept { return mean_; }

    std::size_t index_of(const std::string& name) const;
    Indices indices_of(const std::vector<std::string>& names) const;

    Matrix precision() const { return spd_inverse(sigma_); }
    JointGaussian marginal(const Indices& keep) const;

private:
    std::vector<std::string> variables_;
    Matrix sigma_;
    Vector mean_;
};

/// K | Pa ~ N(beta Pa, lambda).
struct ConditionalGaussian {
    std::vector<std::string> targets;
    std::vector<std::string> givens;
    Matrix beta;
    Matrix lambda;
};

/// Throws InvalidArgument unless k and pa are disjoint, in range and
/// duplicate free. Builds with assertions enabled also cross-check the
/// precision-based forms to 1e-10.
ConditionalGaussian condition(const JointGaussian& jg, const Indices& k, const Indices& pa);

/// Sigma_{X,Y} - Sigma_{X,Z} Sigma_{Z,Z}^{-1} Sigma_{Z,Y}.
Matrix conditional_cross_covariance(const JointGaussian& jg, const Indices& x, const Indices& y, const Indices& z);

/// Every entry of the conditional cross covariance below tol in magnitude.
bool is_ci(const JointGaussian& jg, const Indices& x, const Indices& y, const Indices& z, double tol);
/// Sets over the variable order of jg (universe jg.size()).
bool is_ci(const JointGaussian& jg, const NodeSet& x, const NodeSet& y, const NodeSet& z, double tol);

/// Rows are variables, columns instances.
struct Dataset {
    std::vector<std::string> variables;
    Matrix values;

    std::size_t instances() const { return static_cast<std::size_t>(values.cols()); }
    Indices rows_of(const std::vector<std::string>& names) const;
    Matrix rows(const std::vector<std::string>& names) const;
};

/// n i.i.d. draws (Cholesky factor times standard normals from mt19937_64).
Dataset sample(const JointGaussian& jg, std::size_t n, std::uint64_t seed);

/// One draw of the targets per column of `givens` (rows ordered as cg.givens).
Dataset sample(const ConditionalGaussian& cg, const Matrix& givens, std::uint64_t seed);

/// 1/n second-moment matrix of the rows of a (known zero mean).
Matrix second_moment(const Matrix& a);

inline constexpr std::size_t kPathSumMaxNodes = 8;

/// (Omega^{-1})_{i,l} written as a sum over the simple paths of the
/// undirected graph g_k, with omega indexed like g_k's nodes.
double precision_path_sum(const Matrix& omega, const Ucg& g_k, NodeIndex i, NodeIndex l);

/// Sigma_{i,l} written as a sum over simple paths of partial regression
/// coefficients, an error variance and variance inflation factors. jg's
/// variables must be g_k's nodes in the same order; throws MarkovViolation if
/// some non-adjacent pair is not independent given the rest (tol 1e-8).
double undirected_cov_decomposition(const JointGaussian& jg, const Ucg& g_k, NodeIndex i, NodeIndex l);

/// Sigma_{rho_n,rho_n|given} / Sigma_{rho_n,rho_n|K minus rho_n} for one step of a path.
double inflation_factor(const JointGaussian& jg, NodeIndex node, const Indices& given);

/// All simple paths from i to l in g (depth-first, neighbours in index order).
std::vector<std::vector<NodeIndex>> simple_paths(const Ucg& g, NodeIndex i, NodeIndex l);

}  // namespace ucg

#endif  // UCG_GAUSSIAN_HPP
