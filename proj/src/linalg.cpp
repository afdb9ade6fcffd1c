#include "ucg/linalg.hpp"

#include <cmath>

#include "ucg/error.hpp"

namespace ucg {

namespace {

Eigen::LLT<Matrix> factor(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "matrix is not square");
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularMatrix, "matrix is not positive definite");
    const auto diag = llt.matrixLLT().diagonal();
    if (diag.size() > 0 && !(diag.minCoeff() > 0.0 && std::isfinite(diag.maxCoeff())))
        throw Error(ErrorCode::SingularMatrix, "matrix is not positive definite");
    return llt;
}

}  // namespace

Matrix spd_inverse(const Matrix& a) {
    if (a.size() == 0) return Matrix(0, 0);
    const auto llt = factor(a);
    return symmetrize(llt.solve(Matrix::Identity(a.rows(), a.cols())));
}

Matrix spd_solve(const Matrix& a, const Matrix& b) {
    if (a.size() == 0) return Matrix(0, b.cols());
    return factor(a).solve(b);
}

bool is_positive_definite(const Matrix& a) {
    try {
        if (a.size() > 0) factor(a);
        return true;
    } catch (const Error&) {
        return false;
    }
}

double log_det_spd(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    const auto llt = factor(a);
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double determinant(const Matrix& a) {
    if (a.size() == 0) return 1.0;
    return a.determinant();
}

Matrix submatrix(const Matrix& a, const Indices& rows, const Indices& cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = a(rows[r], cols[c]);
    return out;
}

Vector subvector(const Vector& v, const Indices& rows) {
    Vector out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out(r) = v(rows[r]);
    return out;
}

void set_submatrix(Matrix& a, const Indices& rows, const Indices& cols, const Matrix& block) {
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) a(rows[r], cols[c]) = block(r, c);
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace ucg
