// Slice-unitary constructioning and matrix-free evolution on the toy Fock space.

#include "qsel/toyfock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace qsel::toy {

namespace {

// exp of a skew-hermitian generator via the hermitian eigendecomposition of
// i*Theta; keeps the result unitary to machine precision
Matrix expm_skew(const Matrix& theta) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Complex(0.0, 1.0) * theta);
    const auto& lam = es.eigenvalues();
    Vector phases(lam.size());
    for (Index k = 0; k < lam.size(); ++k) phases(k) = std::exp(Complex(0.0, -lam(k)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix slice_generator(const CoefficientSchedule& sched, int i) {
    const int dh = sched.dim_h();
    const int d = sched.noise_dim();
    const int S = 1 + d;
    const double tau = sched.tau();
    Matrix theta = Matrix::Zero(dh * S, dh * S);
    const auto& Ls = sched.lindblads(i);
    for (int j = 0; j < d; ++j) {
        theta += std::sqrt(tau) * tensor(Ls[static_cast<std::size_t>(j)], basis_op(S, j + 1, 0));
        theta -= std::sqrt(tau) * tensor(Matrix(Ls[static_cast<std::size_t>(j)].adjoint()), basis_op(S, 0, j + 1));
    }
    theta += Complex(0.0, -tau) * tensor(sched.hamiltonian_part(i), identity(S));
    if (sched.has_scattering() && d > 0) {
        const Matrix logS = sched.scattering(i).log();
        Matrix block = Matrix::Zero(S, S);
        block.block(1, 1, d, d) = logS;
        theta += tensor(identity(dh), block);
    }
    return theta;
}

} // namespace

ToyFockProcess::ToyFockProcess(CoefficientSchedule sched, const BuildOptions& opts)
    : sched_(std::move(sched)), slice_dim_(1 + sched_.noise_dim()) {
    const int m = sched_.steps();
    if (m > opts.max_slices)
        throw std::invalid_argument("ToyFockProcess: slice count exceeds cap");
    const auto unit = validate_unitarity(sched_);
    if (!opts.allow_nonunitary && unit.hermitian_defect > 1e-8)
        throw std::invalid_argument("ToyFockProcess: schedule has non-hermitian H (unitarity broken)");

    fock_dim_ = 1;
    for (int i = 0; i < m; ++i) fock_dim_ *= slice_dim_;
    slice_stride_.resize(static_cast<std::size_t>(m));
    Index s = 1;
    for (int i = m - 1; i >= 0; --i) {
        slice_stride_[static_cast<std::size_t>(i)] = s;
        s *= slice_dim_;
    }

    slices_.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const Matrix theta = slice_generator(sched_, i);
        Matrix U;
        if (herm_defect(Complex(0.0, 1.0) * theta) <= 1e-12 * std::max(1.0, theta.norm()))
            U = expm_skew(theta);
        else
            U = theta.exp(); // broken-unitarity controls
        slices_.push_back(SliceUnitary{std::move(U), i});
    }
}

void ToyFockProcess::apply_slice(int k, Eigen::Ref<Vector> psi, bool adjoint) const {
    const Index S = slice_dim_;
    const Index dh = dim_h();
    const Index stride = slice_stride_[static_cast<std::size_t>(k)];
    const Index h_stride = fock_dim_;
    const Matrix& U = slices_[static_cast<std::size_t>(k)].matrix;

    // iterate over all Fock indices with slice k fixed to 0, via outer/inner split
    const Index outer = fock_dim_ / (stride * S);
    Vector x(dh * S), y(dh * S);
    for (Index o = 0; o < outer; ++o) {
        const Index obase = o * stride * S;
        for (Index in = 0; in < stride; ++in) {
            const Index base = obase + in;
            for (Index h = 0; h < dh; ++h)
                for (Index a = 0; a < S; ++a) x(h * S + a) = psi(base + h * h_stride + a * stride);
            if (adjoint) y.noalias() = U.adjoint() * x;
            else y.noalias() = U * x;
            for (Index h = 0; h < dh; ++h)
                for (Index a = 0; a < S; ++a) psi(base + h * h_stride + a * stride) = y(h * S + a);
        }
    }
}

void ToyFockProcess::apply_in_place(int i, int j, Eigen::Ref<Vector> psi,
                                    bool adjoint, bool reversed) const {
    if (i < 0 || j < i || j > slices())
        throw std::invalid_argument("ToyFockProcess::apply: interval not on the grid");
    if (psi.size() != total_dim()) throw std::invalid_argument("ToyFockProcess::apply: vector dimension mismatch");
    // product U_i ... U_{j-1}: rightmost factor acts first
    if (!adjoint && !reversed) {
        for (int k = j - 1; k >= i; --k) apply_slice(k, psi, false);
    } else if (adjoint && !reversed) {
        for (int k = i; k < j; ++k) apply_slice(k, psi, true);
    } else if (!adjoint) { // reversed product U_{j-1} ... U_i
        for (int k = i; k < j; ++k) apply_slice(k, psi, false);
    } else {
        for (int k = j - 1; k >= i; --k) apply_slice(k, psi, true);
    }
}

Vector ToyFockProcess::apply(int i, int j, const Vector& psi, bool adjoint) const {
    Vector out = psi;
    apply_in_place(i, j, out, adjoint);
    return out;
}

Vector ToyFockProcess::compress_apply(int i, int j, const Vector& u, const Vector& v,
                                      const Vector& phi, int eps, bool reversed) const {
    const Index dh = dim_h();
    if (u.size() != dh || v.size() != dh)
        throw std::invalid_argument("compress_apply: system vectors have wrong dimension");
    if (phi.size() != fock_dim_) throw std::invalid_argument("compress_apply: Fock vector has wrong dimension");
    Vector full(total_dim());
    for (Index h = 0; h < dh; ++h) full.segment(h * fock_dim_, fock_dim_) = v(h) * phi;
    apply_in_place(i, j, full, eps != 0, reversed);
    Vector out = Vector::Zero(fock_dim_);
    for (Index h = 0; h < dh; ++h) out += std::conj(u(h)) * full.segment(h * fock_dim_, fock_dim_);
    return out;
}

Matrix ToyFockProcess::compress_dense(int i, int j, const Vector& u, const Vector& v,
                                      int eps, Index cap) const {
    if (fock_dim_ > cap)
        throw std::invalid_argument("compress_dense: Fock dimension exceeds dense-assembly cap");
    Matrix M(fock_dim_, fock_dim_);
    for (Index c = 0; c < fock_dim_; ++c)
        M.col(c) = compress_apply(i, j, u, v, basis_vec(fock_dim_, c), eps);
    return M;
}

Matrix ToyFockProcess::slice_vacuum_block(int k) const {
    const Index dh = dim_h();
    const Index S = slice_dim_;
    const Matrix& U = slices_.at(static_cast<std::size_t>(k)).matrix;
    Matrix B(dh, dh);
    for (Index a = 0; a < dh; ++a)
        for (Index b = 0; b < dh; ++b) B(a, b) = U(a * S, b * S);
    return B;
}

ToyFockProcess build_process(const CoefficientSchedule& sched, const BuildOptions& opts) {
    return ToyFockProcess(sched, opts);
}

Vector multi_interval_vector(const ToyFockProcess& proc,
                             const std::vector<std::pair<int, int>>& intervals,
                             const std::vector<Vector>& us, const std::vector<Vector>& vs,
                             const std::vector<int>& eps) {
    const std::size_t n = intervals.size();
    if (us.size() != n || vs.size() != n || eps.size() != n)
        throw std::invalid_argument("multi_interval_vector: argument lists have different lengths");
    int prev_end = 0;
    for (const auto& [s, t] : intervals) {
        if (s < prev_end || t < s || t > proc.slices())
            throw std::invalid_argument("multi_interval_vector: intervals must be ordered and grid-aligned");
        prev_end = t;
    }
    Vector phi = proc.vacuum();
    for (std::size_t k = n; k-- > 0;)
        phi = proc.compress_apply(intervals[k].first, intervals[k].second, us[k], vs[k], phi, eps[k]);
    return phi;
}

Vector discrete_exponential_vector(const ToyFockProcess& proc, const StepFunction& f) {
    const int d = proc.slice_dim() - 1;
    if (f.dim != d) throw std::invalid_argument("discrete_exponential_vector: component count != noise_dim");
    if (static_cast<int>(f.values.size()) != proc.slices())
        throw std::invalid_argument("discrete_exponential_vector: step function not grid-aligned");
    const double root_tau = std::sqrt(proc.schedule().tau());
    Vector out(1);
    out(0) = 1.0;
    for (int i = 0; i < proc.slices(); ++i) {
        Vector cell(1 + d);
        cell(0) = 1.0;
        for (int j = 0; j < d; ++j) cell(j + 1) = root_tau * f.at(i)(j);
        out = tensor(out, cell);
    }
    return out;
}

} // namespace qsel::toy
