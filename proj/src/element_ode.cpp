// RK4 integration of the matrix-element, Gram-form and trace-flow equations.

#include "qsel/element_ode.hpp"

namespace qsel::ode {

namespace {

double resolve_step(const CoefficientSchedule& sched, double rk4_step) {
    const double tau = sched.tau();
    const double def = std::min(tau, 1e-3 * sched.grid().t_end);
    if (rk4_step <= 0.0) return def;
    if (rk4_step > tau + 1e-15) throw std::invalid_argument("rk4_step larger than the grid step");
    return rk4_step;
}

void check_interval(const CoefficientSchedule& sched, int s, int t) {
    if (s < 0 || t < s || t > sched.steps())
        throw std::invalid_argument("ode backend: interval not on the grid");
}

// classical RK4 over one grid cell with a constant right-hand side map
template <typename Rhs>
Matrix rk4_cell(Matrix X, double tau, double step, const Rhs& rhs) {
    const int n = std::max(1, static_cast<int>(std::ceil(tau / step - 1e-12)));
    const double h = tau / n;
    for (int k = 0; k < n; ++k) {
        const Matrix k1 = rhs(X);
        const Matrix k2 = rhs(X + 0.5 * h * k1);
        const Matrix k3 = rhs(X + 0.5 * h * k2);
        const Matrix k4 = rhs(X + h * k3);
        X += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return X;
}

// G + Σ_j conj(f_j) L_j − Σ_j g_j L_j† on cell i
Matrix element_generator(const CoefficientSchedule& sched, int i,
                         const Vector& fval, const Vector& gval) {
    Matrix C = sched.drift(i);
    const auto& Ls = sched.lindblads(i);
    for (std::size_t j = 0; j < Ls.size(); ++j) {
        C += std::conj(fval(static_cast<Index>(j))) * Ls[j];
        C -= gval(static_cast<Index>(j)) * Ls[j].adjoint();
    }
    return C;
}

void check_functions(const ElementODEProblem& prob) {
    if (prob.f.dim != prob.sched.noise_dim() || prob.g.dim != prob.sched.noise_dim())
        throw std::invalid_argument("ode backend: step-function components != noise_dim");
    if (static_cast<int>(prob.f.values.size()) != prob.sched.steps() ||
        static_cast<int>(prob.g.values.size()) != prob.sched.steps())
        throw std::invalid_argument("ode backend: step function not grid-aligned");
}

} // namespace

Matrix element_ode(const ElementODEProblem& prob) {
    const auto& sched = prob.sched;
    check_interval(sched, prob.s, prob.t);
    check_functions(prob);
    const double step = resolve_step(sched, prob.rk4_step);
    const double tau = sched.tau();
    const Index d = sched.dim_h();

    Matrix M = identity(d);
    Complex log_weight = 0.0; // ∫ <f,g> carried separately
    for (int i = prob.s; i < prob.t; ++i) {
        const Matrix C = element_generator(sched, i, prob.f.at(i), prob.g.at(i));
        M = rk4_cell(std::move(M), tau, step, [&](const Matrix& X) -> Matrix { return X * C; });
        log_weight += tau * prob.f.at(i).dot(prob.g.at(i));
    }
    return std::exp(log_weight) * M;
}

Matrix isometry_form_ode(const ElementODEProblem& prob) {
    const auto& sched = prob.sched;
    check_interval(sched, prob.s, prob.t);
    check_functions(prob);
    const double step = resolve_step(sched, prob.rk4_step);
    const double tau = sched.tau();
    const Index d = sched.dim_h();

    Matrix N = identity(d);
    Complex log_weight = 0.0;
    for (int i = prob.s; i < prob.t; ++i) {
        const Matrix B = element_generator(sched, i, prob.f.at(i), prob.g.at(i));
        const Matrix A = element_generator(sched, i, prob.g.at(i), prob.f.at(i)).adjoint();
        const auto& Ls = sched.lindblads(i);
        N = rk4_cell(std::move(N), tau, step, [&](const Matrix& X) -> Matrix {
            Matrix R = A * X + X * B;
            for (const auto& L : Ls) R += L.adjoint() * X * L;
            return R;
        });
        log_weight += tau * prob.f.at(i).dot(prob.g.at(i));
    }
    return std::exp(log_weight) * N;
}

Matrix extract_Z_ode(const CoefficientSchedule& sched, int s, int t, double rk4_step) {
    check_interval(sched, s, t);
    const double step = resolve_step(sched, rk4_step);
    const double tau = sched.tau();
    const Index d2 = static_cast<Index>(sched.dim_h()) * sched.dim_h();

    Matrix Z = identity(d2);
    for (int i = s; i < t; ++i) {
        const Matrix Lsup = lindblad_superop(sched, i);
        Z = rk4_cell(std::move(Z), tau, step, [&](const Matrix& X) -> Matrix { return X * Lsup; });
    }
    return Z;
}

Matrix vacuum_flow_ode(const CoefficientSchedule& sched, int s, int t, double rk4_step) {
    ElementODEProblem prob{sched, StepFunction::zero(sched.noise_dim(), sched.steps()),
                           StepFunction::zero(sched.noise_dim(), sched.steps()), s, t, rk4_step};
    return element_ode(prob);
}

} // namespace qsel::ode
