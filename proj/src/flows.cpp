// Flow snapshots, finite-difference generators and flow diagnostics.

#include "qsel/flows.hpp"

#include <iomanip>

namespace qsel::flow {

Matrix ToyBackend::vacuum_flow(int i, int j) const {
    const Index d = proc_.dim_h();
    const Index fock = proc_.fock_dim();
    Matrix T(d, d);
    for (Index b = 0; b < d; ++b) {
        // <e_a, T e_b> = <e_a ⊗ Ω, U e_b ⊗ Ω>
        Vector full = Vector::Zero(proc_.total_dim());
        full(b * fock) = 1.0; // e_b ⊗ vacuum
        proc_.apply_in_place(i, j, full);
        for (Index a = 0; a < d; ++a) T(a, b) = full(a * fock);
    }
    return T;
}

Matrix ToyBackend::trace_flow(int i, int j) const {
    const Index d = proc_.dim_h();
    // psi_{a,k} = U_{s,t}(e_a, e_k) Ω
    std::vector<Vector> psi(static_cast<std::size_t>(d * d));
    for (Index a = 0; a < d; ++a)
        for (Index k = 0; k < d; ++k)
            psi[static_cast<std::size_t>(a * d + k)] =
                proc_.compress_apply(i, j, basis_vec(d, a), basis_vec(d, k), proc_.vacuum());
    // <p, Z(|w><v|) u> = <U(u,v)Ω, U(p,w)Ω>; column of vec(|e_k><e_l|) is k + l*d
    Matrix Z(d * d, d * d);
    for (Index k = 0; k < d; ++k)
        for (Index l = 0; l < d; ++l)
            for (Index a = 0; a < d; ++a)
                for (Index b = 0; b < d; ++b)
                    Z(a + b * d, k + l * d) =
                        psi[static_cast<std::size_t>(b * d + l)].dot(psi[static_cast<std::size_t>(a * d + k)]);
    return Z;
}

FlowSnapshot build_snapshot(const ProcessBackend& backend, FlowKind kind,
                            int band, int base_row, bool full) {
    FlowSnapshot snap;
    snap.kind = kind;
    snap.grid = backend.grid();
    snap.dim = kind == FlowKind::VacuumFlow ? backend.dim_h() : backend.dim_h() * backend.dim_h();
    const int m = snap.grid.steps;
    const auto fetch = [&](int i, int j) {
        return kind == FlowKind::VacuumFlow ? backend.vacuum_flow(i, j) : backend.trace_flow(i, j);
    };
    const bool all = full || m <= 40;
    for (int i = 0; i <= m; ++i)
        for (int j = i; j <= m; ++j) {
            if (all || i == base_row || j - i <= band) snap.values[{i, j}] = fetch(i, j);
        }
    return snap;
}

namespace {

Matrix plain_fd(const Matrix& value, double h, int dim) {
    return (value - Matrix::Identity(dim, dim)) / h;
}

int steps_of(const TimeGrid& grid, double h) {
    const double tau = grid.tau();
    const int p = static_cast<int>(std::lround(h / tau));
    if (p < 1 || std::abs(h - p * tau) > 1e-9 * tau)
        throw std::invalid_argument("fd_generator: h must be a positive multiple of the grid step");
    return p;
}

} // namespace

Matrix fd_generator(const FlowSnapshot& flow, int t, double h, bool richardson) {
    const int p = steps_of(flow.grid, h);
    if (t < 0 || t + p > flow.grid.steps)
        throw std::invalid_argument("fd_generator: window extends past the grid");
    const Matrix fd_h = plain_fd(flow.at(t, t + p), h, flow.dim);
    if (!richardson) return fd_h;
    if (p % 2 != 0) throw std::invalid_argument("fd_generator: Richardson step needs h to be an even multiple of tau");
    const Matrix fd_half = plain_fd(flow.at(t, t + p / 2), h / 2, flow.dim);
    return 2.0 * fd_half - fd_h;
}

Matrix fd_generator(const ProcessBackend& backend, FlowKind kind, int t, double h, bool richardson) {
    // thin snapshot holding just the needed pairs; both flows share the code path
    FlowSnapshot snap;
    snap.kind = kind;
    snap.grid = backend.grid();
    snap.dim = kind == FlowKind::VacuumFlow ? backend.dim_h() : backend.dim_h() * backend.dim_h();
    const auto fetch = [&](int i, int j) {
        return kind == FlowKind::VacuumFlow ? backend.vacuum_flow(i, j) : backend.trace_flow(i, j);
    };
    const int p = steps_of(snap.grid, h);
    if (t < 0 || t + p > snap.grid.steps)
        throw std::invalid_argument("fd_generator: window extends past the grid");
    snap.values[{t, t + p}] = fetch(t, t + p);
    if (richardson && p % 2 == 0) snap.values[{t, t + p / 2}] = fetch(t, t + p / 2);
    return fd_generator(snap, t, h, richardson);
}

double integral_residual(const FlowSnapshot& flow, const std::map<int, Matrix>& gen, int s, int t) {
    const double tau = flow.grid.tau();
    Matrix sum = Matrix::Zero(flow.dim, flow.dim);
    for (int i = s; i < t; ++i) {
        const auto it = gen.find(i);
        if (it == gen.end()) throw std::invalid_argument("integral_residual: generator missing on [s,t)");
        sum += flow.at(s, i) * it->second * tau;
    }
    return op_norm(flow.at(s, t) - Matrix::Identity(flow.dim, flow.dim) - sum);
}

double regularity_constant(const FlowSnapshot& flow) {
    double c = 0.0;
    const double tau = flow.grid.tau();
    for (const auto& [key, value] : flow.values) {
        const auto& [i, j] = key;
        if (j == i) continue;
        c = std::max(c, op_norm(value - Matrix::Identity(flow.dim, flow.dim)) / ((j - i) * tau));
    }
    return c;
}

void dump_flow_csv(const FlowSnapshot& flow, std::ostream& os) {
    os << "s,t,entry_index,re,im\n";
    os << std::setprecision(17);
    for (const auto& [key, value] : flow.values) {
        const auto& [i, j] = key;
        const double s = flow.grid.time(i);
        const double t = flow.grid.time(j);
        for (Index e = 0; e < value.size(); ++e) {
            const Index r = e / value.cols();
            const Index c = e % value.cols();
            os << s << ',' << t << ',' << e << ',' << value(r, c).real() << ',' << value(r, c).imag() << '\n';
        }
    }
}

} // namespace qsel::flow
