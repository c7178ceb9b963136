// ops.hpp - Dense complex matrix core: tensor products, norms, JSON matrix format

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "json.hpp"

namespace qsel {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

// |i><j| in an n-dimensional space
inline Matrix basis_op(Index n, Index i, Index j) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("basis_op: index out of range");
    Matrix M = Matrix::Zero(n, n);
    M(i, j) = 1.0;
    return M;
}

inline Vector basis_vec(Index n, Index i) {
    if (i < 0 || i >= n) throw std::out_of_range("basis_vec: index out of range");
    Vector v = Vector::Zero(n);
    v(i) = 1.0;
    return v;
}

// Kronecker product, first factor slowest: (A⊗B)[i*rB+k, j*cB+l] = A(i,j) B(k,l)
inline Matrix tensor(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

inline Vector tensor(const Vector& a, const Vector& b) {
    Vector k(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) k.segment(i * b.size(), b.size()) = a(i) * b;
    return k;
}

// Largest singular value
inline double op_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    return A.jacobiSvd().singularValues()(0);
}

inline double herm_defect(const Matrix& A) { return (A - A.adjoint()).norm(); }

// Trace norm of a square matrix (sum of singular values)
inline double trace_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    return A.jacobiSvd().singularValues().sum();
}

inline double min_eigenvalue(const Matrix& H) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((H + H.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

// ------------------------------- JSON format --------------------------------
// {"rows": n, "cols": m, "re": [...], "im": [...]} row-major

inline nlohmann::json matrix_to_json(const Matrix& A) {
    std::vector<double> re, im;
    re.reserve(static_cast<std::size_t>(A.size()));
    im.reserve(static_cast<std::size_t>(A.size()));
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j) {
            re.push_back(A(i, j).real());
            im.push_back(A(i, j).imag());
        }
    return nlohmann::json{{"rows", A.rows()}, {"cols", A.cols()}, {"re", re}, {"im", im}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix_from_json: dimensions must be positive");
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size())
        throw std::invalid_argument("matrix_from_json: entry count does not match rows*cols");
    Matrix A(rows, cols);
    std::size_t k = 0;
    for (Index i = 0; i < rows; ++i)
        for (Index j2 = 0; j2 < cols; ++j2, ++k) A(i, j2) = Complex(re[k], im[k]);
    return A;
}

} // namespace qsel
