// Shared random generators for the test suites (fixed seeds at call sites).

#pragma once

#include <random>

#include "qsel/ops.hpp"

namespace qsel::testing {

inline Vector random_vector(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return v;
}

inline Vector random_unit(std::mt19937_64& rng, Index n) {
    Vector v = random_vector(rng, n);
    return v / v.norm();
}

inline Matrix random_matrix(std::mt19937_64& rng, Index r, Index c) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix M(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) M(i, j) = Complex(gauss(rng), gauss(rng));
    return M;
}

inline Matrix random_unitary(std::mt19937_64& rng, Index n) {
    const Matrix M = random_matrix(rng, n, n);
    Eigen::HouseholderQR<Matrix> qr(M);
    Matrix Q = qr.householderQ();
    Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) { // fix the phase convention so Q is haar-ish
        const Complex d = R(i, i);
        if (std::abs(d) > 0) Q.col(i) *= d / std::abs(d);
    }
    return Q;
}

inline Matrix random_hermitian(std::mt19937_64& rng, Index n) {
    const Matrix M = random_matrix(rng, n, n);
    return (M + M.adjoint()) / 2.0;
}

inline Matrix random_density(std::mt19937_64& rng, Index n) {
    const Matrix M = random_matrix(rng, n, n);
    Matrix rho = M * M.adjoint();
    return rho / rho.trace().real();
}

} // namespace qsel::testing
