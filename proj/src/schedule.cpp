// Coefficient schedules, the unitarity condition, and the named builtins.

#include "qsel/schedule.hpp"

#include <cmath>

namespace qsel::hp {

CoefficientSchedule::CoefficientSchedule(int dim_h, int noise_dim, TimeGrid grid,
                                         std::vector<Matrix> drift,
                                         std::vector<std::vector<Matrix>> lindblads,
                                         std::optional<std::vector<Matrix>> scattering)
    : dim_h_(dim_h), noise_dim_(noise_dim), grid_(grid),
      drift_(std::move(drift)), lindblads_(std::move(lindblads)), scattering_(std::move(scattering)) {
    if (dim_h_ <= 0) throw std::invalid_argument("CoefficientSchedule: dim_h must be positive");
    if (noise_dim_ < 0) throw std::invalid_argument("CoefficientSchedule: noise_dim must be >= 0");
    const auto m = static_cast<std::size_t>(grid_.steps);
    if (drift_.size() != m) throw std::invalid_argument("CoefficientSchedule: drift list length != steps");
    if (lindblads_.size() != m) throw std::invalid_argument("CoefficientSchedule: lindblad list length != steps");
    for (std::size_t i = 0; i < m; ++i) {
        if (drift_[i].rows() != dim_h_ || drift_[i].cols() != dim_h_)
            throw std::invalid_argument("CoefficientSchedule: drift matrix has wrong shape");
        if (lindblads_[i].size() != static_cast<std::size_t>(noise_dim_))
            throw std::invalid_argument("CoefficientSchedule: lindblad count != noise_dim");
        for (const auto& L : lindblads_[i])
            if (L.rows() != dim_h_ || L.cols() != dim_h_)
                throw std::invalid_argument("CoefficientSchedule: lindblad matrix has wrong shape");
    }
    if (scattering_) {
        if (scattering_->size() != m) throw std::invalid_argument("CoefficientSchedule: scattering list length != steps");
        for (const auto& S : *scattering_) {
            if (S.rows() != noise_dim_ || S.cols() != noise_dim_)
                throw std::invalid_argument("CoefficientSchedule: scattering matrix must be noise_dim x noise_dim");
            if ((S.adjoint() * S - identity(noise_dim_)).norm() > 1e-10)
                throw std::invalid_argument("CoefficientSchedule: scattering matrix is not unitary");
        }
    }
}

const Matrix& CoefficientSchedule::scattering(int i) const {
    if (!scattering_) throw std::logic_error("CoefficientSchedule: no scattering present");
    return scattering_->at(check_index(i));
}

Matrix CoefficientSchedule::hamiltonian_part(int i) const {
    Matrix LL = Matrix::Zero(dim_h_, dim_h_);
    for (const auto& L : lindblads(i)) LL += L.adjoint() * L;
    return Complex(0.0, 1.0) * (drift(i) + 0.5 * LL);
}

UnitarityReport validate_unitarity(const CoefficientSchedule& sched) {
    UnitarityReport rep{0.0, 0.0};
    for (int i = 0; i < sched.steps(); ++i) {
        Matrix LL = Matrix::Zero(sched.dim_h(), sched.dim_h());
        for (const auto& L : sched.lindblads(i)) LL += L.adjoint() * L;
        const Matrix res = LL + sched.drift(i) + sched.drift(i).adjoint();
        rep.max_residual = std::max(rep.max_residual, op_norm(res));
        rep.hermitian_defect = std::max(rep.hermitian_defect, herm_defect(sched.hamiltonian_part(i)));
    }
    return rep;
}

Matrix lindblad_apply(const CoefficientSchedule& sched, int i, const Matrix& rho) {
    if (rho.rows() != sched.dim_h() || rho.cols() != sched.dim_h())
        throw std::invalid_argument("lindblad_apply: state has wrong dimension");
    Matrix out = sched.drift(i) * rho + rho * sched.drift(i).adjoint();
    for (const auto& L : sched.lindblads(i)) out += L * rho * L.adjoint();
    return out;
}

Eigen::VectorXcd vectorize(const Matrix& rho) {
    return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size()); // column-stacking
}

Matrix unvectorize(const Eigen::VectorXcd& v, Index dim) {
    if (v.size() != dim * dim) throw std::invalid_argument("unvectorize: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix lindblad_superop(const CoefficientSchedule& sched, int i) {
    const Index d = sched.dim_h();
    Matrix S(d * d, d * d);
    for (Index l = 0; l < d; ++l)
        for (Index k = 0; k < d; ++k) // column index of vec(|e_k><e_l|) is l*d+k
            S.col(l * d + k) = vectorize(lindblad_apply(sched, i, basis_op(d, k, l)));
    return S;
}

namespace {

// amplitude-damping pair: L = |e1><e2|, G = diag(0, -1/2)
Matrix ad_lowering(int dim_h) {
    Matrix L = Matrix::Zero(dim_h, dim_h);
    L(0, 1) = 1.0;
    return L;
}

Matrix drift_from_lindblads(const std::vector<Matrix>& Ls, int dim_h) {
    Matrix G = Matrix::Zero(dim_h, dim_h);
    for (const auto& L : Ls) G -= 0.5 * (L.adjoint() * L);
    return G;
}

} // namespace

CoefficientSchedule builtin_schedule(const std::string& name, double t_end, int steps) {
    const TimeGrid grid(t_end, steps);
    const int dim_h = 2;
    const auto m = static_cast<std::size_t>(steps);

    if (name == "trivial") {
        std::vector<Matrix> G(m, Matrix::Zero(dim_h, dim_h));
        std::vector<std::vector<Matrix>> L(m);
        CoefficientSchedule s(dim_h, 0, grid, std::move(G), std::move(L));
        s.set_unitary_flag(true);
        return s;
    }
    if (name == "constant-AD") {
        std::vector<Matrix> G(m, Matrix::Zero(dim_h, dim_h));
        std::vector<std::vector<Matrix>> L(m);
        for (std::size_t i = 0; i < m; ++i) {
            L[i] = {ad_lowering(dim_h)};
            G[i] = drift_from_lindblads(L[i], dim_h);
        }
        CoefficientSchedule s(dim_h, 1, grid, std::move(G), std::move(L));
        s.set_unitary_flag(true);
        return s;
    }
    if (name == "two-lindblad") {
        Matrix sz = Matrix::Zero(dim_h, dim_h);
        sz(0, 0) = 1.0;
        sz(1, 1) = -1.0;
        std::vector<Matrix> G(m);
        std::vector<std::vector<Matrix>> L(m);
        for (std::size_t i = 0; i < m; ++i) {
            L[i] = {ad_lowering(dim_h), sz / std::sqrt(2.0)};
            G[i] = drift_from_lindblads(L[i], dim_h);
        }
        CoefficientSchedule s(dim_h, 2, grid, std::move(G), std::move(L));
        s.set_unitary_flag(true);
        return s;
    }
    if (name == "time-ramp") {
        // L1 scaled by sqrt(1 + t/T): genuinely time-dependent, still unitary
        std::vector<Matrix> G(m);
        std::vector<std::vector<Matrix>> L(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double t = grid.time(static_cast<int>(i));
            const double ramp = std::sqrt(1.0 + t / t_end);
            L[i] = {ramp * ad_lowering(dim_h)};
            G[i] = drift_from_lindblads(L[i], dim_h);
        }
        CoefficientSchedule s(dim_h, 1, grid, std::move(G), std::move(L));
        s.set_unitary_flag(true);
        return s;
    }
    if (name == "conservation-demo") {
        std::vector<Matrix> G(m);
        std::vector<std::vector<Matrix>> L(m);
        std::vector<Matrix> S(m);
        Matrix phase(1, 1);
        phase(0, 0) = std::exp(Complex(0.0, M_PI / 3.0));
        for (std::size_t i = 0; i < m; ++i) {
            L[i] = {ad_lowering(dim_h)};
            G[i] = drift_from_lindblads(L[i], dim_h);
            S[i] = phase;
        }
        CoefficientSchedule s(dim_h, 1, grid, std::move(G), std::move(L), std::move(S));
        s.set_unitary_flag(true);
        return s;
    }
    throw std::invalid_argument("builtin_schedule: unknown name '" + name + "'");
}

std::pair<CoefficientSchedule, double>
schedule_from_coefficients(const std::vector<Matrix>& drift,
                           const std::vector<std::vector<Matrix>>& lindblads,
                           const TimeGrid& grid) {
    if (drift.empty() || drift.size() != lindblads.size())
        throw std::invalid_argument("schedule_from_coefficients: coefficient lists empty or mismatched");
    const int dim_h = static_cast<int>(drift[0].rows());
    const int d = static_cast<int>(lindblads[0].size());
    double max_defect = 0.0;
    std::vector<Matrix> G(drift.size());
    for (std::size_t i = 0; i < drift.size(); ++i) {
        Matrix LL = Matrix::Zero(dim_h, dim_h);
        for (const auto& L : lindblads[i]) LL += L.adjoint() * L;
        const Matrix H = Complex(0.0, 1.0) * (drift[i] + 0.5 * LL);
        const Matrix Hsym = (H + H.adjoint()) / 2.0;
        max_defect = std::max(max_defect, op_norm(H - Hsym));
        G[i] = Complex(0.0, -1.0) * Hsym - 0.5 * LL;
    }
    CoefficientSchedule s(dim_h, d, grid, std::move(G), lindblads);
    s.set_unitary_flag(true);
    return {std::move(s), max_defect};
}

nlohmann::json schedule_to_json(const CoefficientSchedule& sched) {
    nlohmann::json j;
    j["dim_h"] = sched.dim_h();
    j["noise_dim"] = sched.noise_dim();
    j["t_end"] = sched.grid().t_end;
    j["steps"] = sched.grid().steps;
    j["G"] = nlohmann::json::array();
    j["L"] = nlohmann::json::array();
    for (int i = 0; i < sched.steps(); ++i) {
        j["G"].push_back(matrix_to_json(sched.drift(i)));
        nlohmann::json row = nlohmann::json::array();
        for (const auto& L : sched.lindblads(i)) row.push_back(matrix_to_json(L));
        j["L"].push_back(row);
    }
    if (sched.has_scattering()) {
        j["S"] = nlohmann::json::array();
        for (int i = 0; i < sched.steps(); ++i) j["S"].push_back(matrix_to_json(sched.scattering(i)));
    }
    return j;
}

CoefficientSchedule schedule_from_json(const nlohmann::json& j) {
    const int dim_h = j.at("dim_h").get<int>();
    const int d = j.at("noise_dim").get<int>();
    const TimeGrid grid(j.at("t_end").get<double>(), j.at("steps").get<int>());
    std::vector<Matrix> G;
    std::vector<std::vector<Matrix>> L;
    for (const auto& g : j.at("G")) G.push_back(matrix_from_json(g));
    for (const auto& row : j.at("L")) {
        std::vector<Matrix> Ls;
        for (const auto& l : row) Ls.push_back(matrix_from_json(l));
        L.push_back(std::move(Ls));
    }
    std::optional<std::vector<Matrix>> S;
    if (j.contains("S")) {
        S.emplace();
        for (const auto& s : j.at("S")) S->push_back(matrix_from_json(s));
    }
    CoefficientSchedule sched(dim_h, d, grid, std::move(G), std::move(L), std::move(S));
    sched.set_unitary_flag(validate_unitarity(sched).max_residual <= 1e-10);
    return sched;
}

} // namespace qsel::hp
