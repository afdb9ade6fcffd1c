#ifndef UCG_MLE_HPP
#define UCG_MLE_HPP

#include <cstdint>
#include <vector>

#include "ucg/model.hpp"

namespace ucg {

struct FitConfig {
    double outer_tol = 1e-6;
    std::size_t outer_max = 100;
    double ipf_tol = 1e-9;
    std::size_t ipf_max = 500;
};

/// Throws InvalidArgument unless tolerances are positive and counts at least 1.
void validate_config(const FitConfig& cfg);

struct ComponentFit {
    Indices k;
    std::size_t iterations = 0;
    bool converged = false;
    /// Average conditional log-likelihood per instance after each outer iteration.
    std::vector<double> log_likelihood;
};

struct FitReport {
    /// Largest iteration count over components.
    std::size_t iterations = 0;
    bool converged = true;
    std::vector<ComponentFit> components;
};

struct FitResult {
    UcgModel model;
    FitReport report;
};

/// Alternates, per chain component, iterative proportional fitting of
/// (omega_KK, omega_KFa) on the mother-adjusted residuals with generalized
/// least squares for beta_Mo. beta_Mo starts at zero; stops when the largest
/// absolute parameter change is below outer_tol or after outer_max iterations.
FitResult fit(const Ucg& g, const Dataset& data, const FitConfig& cfg = {});

/// Symmetric adjacency over H's nodes as bit masks (at most 64 nodes).
std::vector<std::vector<std::size_t>> maximal_cliques(const std::vector<std::uint64_t>& adjacency);

/// Gaussian IPF for the undirected graph `adjacency` starting from `omega`
/// (updated in place). Returns the number of sweeps performed. Throws
/// SingularSampleCovariance if a clique block of s is not positive definite.
std::size_t ipf(const Matrix& s, const std::vector<std::uint64_t>& adjacency, Matrix& omega, double tol,
                std::size_t max_sweeps);

struct IpfResult {
    Matrix omega;  // over K then Fa(K)
    Matrix omega_kk;
    Matrix omega_kfa;
    std::size_t sweeps = 0;
};

/// omega over K u Fa(K) fitted on the auxiliary graph: fathers pairwise
/// joined, K's undirected edges, and i - j for each father j of i. Residuals
/// and fathers are rows-by-instances. `start` (|K|+|Fa|) warm-starts the fit
/// when non-empty.
IpfResult ipf_step(const Matrix& residuals, const Matrix& fathers, const ZeroPattern& pattern, const FitConfig& cfg,
                   const Matrix& start = Matrix());

/// argmin tr(W (Y - beta M)(Y - beta M)^T) over beta with zeros outside `free`.
Matrix gls_step(const Matrix& y, const Matrix& m, const Matrix& w, const Mask& free);

/// Average log N(D_K; beta D_Pa, omega_KK^{-1}) per instance over the model's components.
double conditional_log_likelihood(const ComponentParams& cp, const Dataset& data, const Ucg& g);

struct BlockDiffs {
    std::vector<double> relative;  // parameters whose true value is nonzero
    std::vector<double> absolute;  // parameters whose true value is zero
};

struct FitMetrics {
    BlockDiffs omega_kk;   // upper triangle with diagonal, free positions
    BlockDiffs omega_kfa;  // free positions
    BlockDiffs beta_fa;    // every K x Fa(K) entry
    BlockDiffs beta_mo;    // free positions
    double residual_estimate = 0.0;
    double residual_truth = 0.0;
    double residual_difference = 0.0;           // unweighted squared Frobenius norms
    double weighted_residual_difference = 0.0;  // tr(omega_KK R R^T) form
};

/// Compares the components of `truth` (root block excluded) with their
/// estimates; throws GraphMismatch unless both share one graph.
FitMetrics metrics(const UcgModel& truth, const UcgModel& est, const Dataset& data);

}  // namespace ucg

#endif  // UCG_MLE_HPP
