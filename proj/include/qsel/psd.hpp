// psd.hpp - Rank-revealing factorization of positive semidefinite Gram matrices

#pragma once

#include "qsel/ops.hpp"

namespace qsel::ops {

struct PsdFactorization {
    Index rank{0};
    Matrix embedding;               // rank x N, columns eta_i with <eta_i,eta_j> = Gr_ij
    Eigen::VectorXd eigenvalues;    // full spectrum, descending
};

// Hermitian eigendecomposition route: exposes the spectrum so an indefinite
// input is detected rather than silently projected. tol is relative to the
// largest eigenvalue; psd_tol bounds how negative the smallest eigenvalue may
// be before the input is rejected as not a valid kernel Gram.
inline PsdFactorization psd_rank_factorize(const Matrix& Gr, double tol,
                                           double psd_rel_tol = 1e-9) {
    if (Gr.rows() != Gr.cols()) throw std::invalid_argument("psd_rank_factorize: matrix must be square");
    const double scale = std::max(1.0, Gr.norm());
    if (herm_defect(Gr) > 1e-12 * scale)
        throw std::invalid_argument("psd_rank_factorize: matrix is not hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> es((Gr + Gr.adjoint()) / 2.0);
    const Index N = Gr.rows();
    Eigen::VectorXd lam(N);
    Matrix V(N, N);
    for (Index i = 0; i < N; ++i) { // descending order
        lam(i) = es.eigenvalues()(N - 1 - i);
        V.col(i) = es.eigenvectors().col(N - 1 - i);
    }
    const double lam_max = std::max(lam.size() ? lam(0) : 0.0, 0.0);
    const double psd_floor = psd_rel_tol * std::max(lam_max, 1e-300);
    if (lam(N - 1) < -psd_floor)
        throw std::runtime_error("psd_rank_factorize: matrix has eigenvalue below -tol_psd (invalid kernel)");

    Index rank = 0;
    while (rank < N && lam(rank) > tol * lam_max && lam(rank) > 0.0) ++rank;

    Matrix E(rank, N);
    for (Index r = 0; r < rank; ++r) E.row(r) = std::sqrt(lam(r)) * V.col(r).adjoint();
    // deterministic gauge: first nonzero entry of each row made real positive
    for (Index r = 0; r < rank; ++r) {
        for (Index c = 0; c < N; ++c) {
            const Complex z = E(r, c);
            if (std::abs(z) > 1e-14) {
                E.row(r) *= std::conj(z) / std::abs(z);
                break;
            }
        }
    }
    return PsdFactorization{rank, std::move(E), std::move(lam)};
}

} // namespace qsel::ops
