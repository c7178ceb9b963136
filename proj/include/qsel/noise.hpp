// noise.hpp - Kernel assembly from (G, 𝓛) pairs, Kolmogorov construction of
// the per-time noise fibers, coefficient recovery, gauge alignment, and the
// measurable field over the grid.

#pragma once

#include <map>

#include "qsel/psd.hpp"
#include "qsel/schedule.hpp"

namespace qsel::noise {

struct KernelIndex {
    Vector u;
    Vector v;
    int eps{0};
};

// K((u,v,eps),(p,w,eps')) = (−1)^{eps+eps'} { <p, 𝓛(|w><v|) u>
//   − conj<u,v> <p, G w> − conj<u, G v> <p, w> }
Complex kernel_eval(const Matrix& G, const Matrix& Lsup,
                    const KernelIndex& a, const KernelIndex& b);

// Gram of the kernel over the basis index set {(e_i, e_k, 0)}; hermitian and
// PSD within psd_rel_tol * λ_max, else throws (input is not a valid pair).
Matrix gram_assemble(const Matrix& G, const Matrix& Lsup, double psd_rel_tol = 1e-9);

struct NoiseFiber {
    double s_time{0.0};
    int dim_h{0};
    int d{0};                 // fiber dimension (numerical rank)
    Matrix eta;               // d x dim_h², column (i*dim_h + k) = eta(e_i, e_k)
    Matrix gram;              // the factorized Gram
    Eigen::VectorXd spectrum; // descending eigenvalues of the Gram

    Vector eta_basis(int i, int k) const { return eta.col(static_cast<Index>(i) * dim_h + k); }

    // sesquilinear extension: eta(u,v) = Σ conj(u_i) v_k eta(e_i,e_k), with the
    // eps = 1 index handled by sign only
    Vector eta_of(const Vector& u, const Vector& v, int eps = 0) const;

    // multi-letter reduction: eta(u_1⊗…⊗u_n, v_1⊗…⊗v_n, eps) =
    // Σ_i Π_{k≠i} <u_k, v_k> eta(u_i, v_i, eps_i)
    Vector eta_word(const std::vector<Vector>& us, const std::vector<Vector>& vs,
                    const std::vector<int>& eps) const;
};

NoiseFiber kolmogorov_factorize(const Matrix& gram, double rank_rel_tol, int dim_h,
                                double s_time = 0.0, double psd_rel_tol = 1e-9);

// (L_j)_{ik} = j-th component of eta(e_i, e_k)
std::vector<Matrix> recover_L(const NoiseFiber& fiber);

// max_v | Σ_j ‖L_j v‖² + 2 Re<v, G v> | over the basis (Σ‖L_jv‖² = −2Re<v,Gv>)
double norm_identity_residual(const std::vector<Matrix>& Ls, const Matrix& G);

struct GaugeAlignment {
    Matrix mixing; // unitary d x d W
    double residual{0.0};
};

// Procrustes fit of Σ_k W_{jk} L_rec,k to L_ref,j over unitary W
GaugeAlignment gauge_align(const std::vector<Matrix>& L_rec, const std::vector<Matrix>& L_ref);

struct MeasurableField {
    hp::TimeGrid grid;
    std::vector<NoiseFiber> fibers;          // one per grid cell
    std::map<int, std::vector<int>> partition; // d -> grid indices with that fiber dim
    int d_max{0};

    // embedding into the common C^{d_max}: E_j(t) = 0 for j > d(t)
    Vector padded_eta(int cell, int i, int k) const;
};

MeasurableField assemble_field(std::vector<NoiseFiber> fibers, const hp::TimeGrid& grid);

nlohmann::json fiber_to_json(const NoiseFiber& fiber, const std::vector<Matrix>& Ls);

} // namespace qsel::noise
