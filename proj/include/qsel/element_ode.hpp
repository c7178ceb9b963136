// element_ode.hpp - ODE backend: exponential-vector matrix elements of the HP
// solution, the isometry (Gram) form, and the trace-flow superoperator, all by
// fixed-step RK4 over the piecewise-constant schedule.

#pragma once

#include "qsel/schedule.hpp"

namespace qsel::ode {

using hp::CoefficientSchedule;
using hp::StepFunction;

struct ElementODEProblem {
    const CoefficientSchedule& sched;
    StepFunction f; // bra-side test function
    StepFunction g; // ket-side test function
    int s{0};       // grid indices, s <= t
    int t{0};
    double rk4_step{0.0}; // 0 -> default min(tau, 1e-3 * t_end)
};

// M on h with <u, M v> = <u ⊗ e(f_{[s,t)}), V_{s,t} v ⊗ e(g_{[s,t)})>.
// Integrates dM/dr = M (G + Σ_j conj(f_j) L_j − Σ_j g_j L_j†) cell by cell
// (creation pairs with conj(f), annihilation with g), and carries the scalar
// weight exp(∫ <f,g>) separately.
Matrix element_ode(const ElementODEProblem& prob);

// N on h with <u, N v> = <V_{s,t} u ⊗ e(f), V_{s,t} v ⊗ e(g)>: the quantum Ito
// form dN/dr = C(g,f)† N + N C(f,g) + Σ_j L_j† N L_j plus the same scalar
// weight. For f = g and a unitary schedule the integrand vanishes at N = 1 and
// N(t) = e^{‖f‖²} · 1 is the isometry certificate.
Matrix isometry_form_ode(const ElementODEProblem& prob);

// Z_{s,t} as a dim_h² x dim_h² matrix on column-stacked densities:
// dZ/dr = Z ∘ 𝓛(r), Z_{s,s} = 1.
Matrix extract_Z_ode(const CoefficientSchedule& sched, int s, int t, double rk4_step = 0.0);

// T_{s,t} = element_ode with f = g = 0
Matrix vacuum_flow_ode(const CoefficientSchedule& sched, int s, int t, double rk4_step = 0.0);

} // namespace qsel::ode
