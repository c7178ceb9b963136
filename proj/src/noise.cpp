// Kernel evaluation, Kolmogorov factorization and coefficient recovery.

#include "qsel/noise.hpp"

namespace qsel::noise {

Complex kernel_eval(const Matrix& G, const Matrix& Lsup,
                    const KernelIndex& a, const KernelIndex& b) {
    const Index d = G.rows();
    if (a.u.size() != d || a.v.size() != d || b.u.size() != d || b.v.size() != d)
        throw std::invalid_argument("kernel_eval: vector dimension mismatch");
    if (Lsup.rows() != d * d || Lsup.cols() != d * d)
        throw std::invalid_argument("kernel_eval: superoperator has wrong shape");
    const Vector& u = a.u;
    const Vector& v = a.v;
    const Vector& p = b.u;
    const Vector& w = b.v;
    const Matrix rho = w * v.adjoint(); // |w><v|
    const Matrix Lrho = hp::unvectorize(Lsup * hp::vectorize(rho), d);
    Complex val = p.dot(Lrho * u);
    val -= std::conj(u.dot(v)) * p.dot(G * w);
    val -= std::conj(u.dot(G * v)) * p.dot(w);
    const int sign = (a.eps + b.eps) % 2 ? -1 : 1;
    return double(sign) * val;
}

Matrix gram_assemble(const Matrix& G, const Matrix& Lsup, double psd_rel_tol) {
    const Index d = G.rows();
    const Index N = d * d;
    Matrix K(N, N);
    std::vector<KernelIndex> idx;
    idx.reserve(static_cast<std::size_t>(N));
    for (Index i = 0; i < d; ++i)
        for (Index k = 0; k < d; ++k) idx.push_back({basis_vec(d, i), basis_vec(d, k), 0});
    for (Index a = 0; a < N; ++a)
        for (Index b = 0; b < N; ++b)
            K(a, b) = kernel_eval(G, Lsup, idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    const double scale = std::max(1.0, K.norm());
    if (herm_defect(K) > 1e-10 * scale)
        throw std::runtime_error("gram_assemble: kernel Gram is not hermitian (invalid (G,L) pair)");
    const double lam_min = min_eigenvalue(K);
    const double lam_max = std::max(0.0, -min_eigenvalue(Matrix(-K)));
    if (lam_min < -psd_rel_tol * std::max(lam_max, 1e-300))
        throw std::runtime_error("gram_assemble: kernel Gram has a negative eigenvalue beyond tol_psd");
    return K;
}

Vector NoiseFiber::eta_of(const Vector& u, const Vector& v, int eps) const {
    if (u.size() != dim_h || v.size() != dim_h)
        throw std::invalid_argument("eta_of: vector dimension mismatch");
    Vector out = Vector::Zero(d);
    for (Index i = 0; i < dim_h; ++i) {
        if (u(i) == Complex(0.0)) continue;
        for (Index k = 0; k < dim_h; ++k)
            out += std::conj(u(i)) * v(k) * eta.col(i * dim_h + k);
    }
    return eps ? Vector(-out) : out;
}

Vector NoiseFiber::eta_word(const std::vector<Vector>& us, const std::vector<Vector>& vs,
                            const std::vector<int>& eps) const {
    const std::size_t n = us.size();
    if (vs.size() != n || eps.size() != n)
        throw std::invalid_argument("eta_word: argument lists have different lengths");
    Vector out = Vector::Zero(d);
    for (std::size_t i = 0; i < n; ++i) {
        Complex coeff = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != i) coeff *= us[k].dot(vs[k]);
        out += coeff * eta_of(us[i], vs[i], eps[i]);
    }
    return out;
}

NoiseFiber kolmogorov_factorize(const Matrix& gram, double rank_rel_tol, int dim_h,
                                double s_time, double psd_rel_tol) {
    if (gram.rows() != static_cast<Index>(dim_h) * dim_h)
        throw std::invalid_argument("kolmogorov_factorize: Gram side must be dim_h²");
    const auto fac = ops::psd_rank_factorize(gram, rank_rel_tol, psd_rel_tol);
    NoiseFiber fiber;
    fiber.s_time = s_time;
    fiber.dim_h = dim_h;
    fiber.d = static_cast<int>(fac.rank);
    fiber.eta = fac.embedding;
    fiber.gram = gram;
    fiber.spectrum = fac.eigenvalues;
    return fiber;
}

std::vector<Matrix> recover_L(const NoiseFiber& fiber) {
    std::vector<Matrix> Ls;
    Ls.reserve(static_cast<std::size_t>(fiber.d));
    for (int j = 0; j < fiber.d; ++j) {
        Matrix L(fiber.dim_h, fiber.dim_h);
        for (Index i = 0; i < fiber.dim_h; ++i)
            for (Index k = 0; k < fiber.dim_h; ++k) L(i, k) = fiber.eta(j, i * fiber.dim_h + k);
        Ls.push_back(std::move(L));
    }
    return Ls;
}

double norm_identity_residual(const std::vector<Matrix>& Ls, const Matrix& G) {
    const Index d = G.rows();
    double worst = 0.0;
    for (Index k = 0; k < d; ++k) {
        const Vector v = basis_vec(d, k);
        double lhs = 0.0;
        for (const auto& L : Ls) lhs += (L * v).squaredNorm();
        const double rhs = -2.0 * v.dot(G * v).real();
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

GaugeAlignment gauge_align(const std::vector<Matrix>& L_rec, const std::vector<Matrix>& L_ref) {
    if (L_rec.size() != L_ref.size())
        throw std::invalid_argument("gauge_align: coefficient lists have different multiplicities");
    const Index d = static_cast<Index>(L_rec.size());
    if (d == 0) return {Matrix(0, 0), 0.0};
    const Index n2 = L_rec[0].size();
    Matrix R(n2, d), F(n2, d);
    for (Index j = 0; j < d; ++j) {
        R.col(j) = Eigen::Map<const Vector>(L_rec[static_cast<std::size_t>(j)].data(), n2);
        F.col(j) = Eigen::Map<const Vector>(L_ref[static_cast<std::size_t>(j)].data(), n2);
    }
    // orthogonal Procrustes: minimize ‖R Q − F‖_F over unitary Q, Q = U V†
    Eigen::JacobiSVD<Matrix> svd(R.adjoint() * F, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix Q = svd.matrixU() * svd.matrixV().adjoint();
    GaugeAlignment out;
    out.mixing = Q.transpose(); // mixed_j = Σ_k W_{jk} L_rec,k
    out.residual = (R * Q - F).norm();
    return out;
}

Vector MeasurableField::padded_eta(int cell, int i, int k) const {
    const auto& f = fibers.at(static_cast<std::size_t>(cell));
    Vector out = Vector::Zero(d_max);
    out.head(f.d) = f.eta_basis(i, k);
    return out;
}

MeasurableField assemble_field(std::vector<NoiseFiber> fibers, const hp::TimeGrid& grid) {
    if (static_cast<int>(fibers.size()) != grid.steps)
        throw std::invalid_argument("assemble_field: need one fiber per grid cell");
    MeasurableField field;
    field.grid = grid;
    field.fibers = std::move(fibers);
    for (int i = 0; i < grid.steps; ++i) {
        const int d = field.fibers[static_cast<std::size_t>(i)].d;
        field.partition[d].push_back(i);
        field.d_max = std::max(field.d_max, d);
    }
    return field;
}

nlohmann::json fiber_to_json(const NoiseFiber& fiber, const std::vector<Matrix>& Ls) {
    nlohmann::json j;
    j["t"] = fiber.s_time;
    j["d"] = fiber.d;
    nlohmann::json eta = nlohmann::json::object();
    for (Index i = 0; i < fiber.dim_h; ++i)
        for (Index k = 0; k < fiber.dim_h; ++k) {
            const Vector e = fiber.eta_basis(static_cast<int>(i), static_cast<int>(k));
            std::vector<double> re, im;
            for (Index x = 0; x < e.size(); ++x) {
                re.push_back(e(x).real());
                im.push_back(e(x).imag());
            }
            eta[std::to_string(i) + "," + std::to_string(k)] = {{"re", re}, {"im", im}};
        }
    j["eta"] = eta;
    j["L"] = nlohmann::json::array();
    for (const auto& L : Ls) j["L"].push_back(matrix_to_json(L));
    return j;
}

} // namespace qsel::noise
