#ifndef UCG_LINALG_HPP
#define UCG_LINALG_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace ucg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Indices = std::vector<std::size_t>;

/// Inverse of a symmetric positive-definite matrix via Cholesky. Throws
/// SingularMatrix when the factorization fails. The empty matrix inverts to itself.
Matrix spd_inverse(const Matrix& a);

/// Solves a x = b for symmetric positive-definite a (SingularMatrix on failure).
Matrix spd_solve(const Matrix& a, const Matrix& b);

bool is_positive_definite(const Matrix& a);

/// log|a| for symmetric positive-definite a; 0 for the empty matrix.
double log_det_spd(const Matrix& a);

/// Determinant with the empty-matrix convention |[]| = 1.
double determinant(const Matrix& a);

Matrix submatrix(const Matrix& a, const Indices& rows, const Indices& cols);
Vector subvector(const Vector& v, const Indices& rows);

/// Writes `block` into a at (rows, cols).
void set_submatrix(Matrix& a, const Indices& rows, const Indices& cols, const Matrix& block);

Matrix symmetrize(const Matrix& a);

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Matrix& a);

}  // namespace ucg

#endif  // UCG_LINALG_HPP
