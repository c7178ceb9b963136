#include "qsel/pipeline.hpp"

#include <limits>

namespace qsel::pipeline {

Reconstruction reconstruct(const flow::ProcessBackend& backend, const ReconstructionOptions& opts) {
    const auto& grid = backend.grid();
    const double tau = grid.tau();
    const double h = opts.fd_mult * tau;
    const int m = grid.steps;
    const int usable = m - opts.fd_mult; // cells whose fd window [t, t+h] fits
    if (usable < 1) throw std::invalid_argument("reconstruct: grid too short for the fd window");

    Reconstruction rec;
    rec.usable_cells = usable;
    for (int i = 0; i < usable; ++i) {
        Matrix G = flow::fd_generator(backend, flow::FlowKind::VacuumFlow, i, h, opts.richardson);
        Matrix Lsup = flow::fd_generator(backend, flow::FlowKind::TraceFlow, i, h, opts.richardson);
        const Matrix gram = noise::gram_assemble(G, Lsup, opts.psd_rel_tol);
        noise::NoiseFiber fiber =
            noise::kolmogorov_factorize(gram, opts.rank_rel_tol, backend.dim_h(), grid.time(i), opts.psd_rel_tol);
        auto Ls = noise::recover_L(fiber);
        rec.max_norm_identity_residual =
            std::max(rec.max_norm_identity_residual, noise::norm_identity_residual(Ls, G));
        rec.drift.push_back(std::move(G));
        rec.trace_generator.push_back(std::move(Lsup));
        rec.fibers.push_back(std::move(fiber));
        rec.lindblads.push_back(std::move(Ls));
    }
    // hold the last computable cell across the trailing fd window
    for (int i = usable; i < m; ++i) {
        rec.drift.push_back(rec.drift.back());
        rec.trace_generator.push_back(rec.trace_generator.back());
        noise::NoiseFiber tail = rec.fibers.back();
        tail.s_time = grid.time(i);
        rec.fibers.push_back(std::move(tail));
        rec.lindblads.push_back(rec.lindblads.back());
    }
    return rec;
}

std::pair<hp::CoefficientSchedule, double>
rebuild_schedule(const Reconstruction& rec, const hp::TimeGrid& grid) {
    // a schedule needs a uniform noise multiplicity: pad with zero operators up
    // to the largest recovered d
    std::size_t d_max = 0;
    for (const auto& Ls : rec.lindblads) d_max = std::max(d_max, Ls.size());
    const Index dim_h = rec.drift.front().rows();
    std::vector<std::vector<Matrix>> padded = rec.lindblads;
    for (auto& Ls : padded)
        while (Ls.size() < d_max) Ls.push_back(Matrix::Zero(dim_h, dim_h));
    return hp::schedule_from_coefficients(rec.drift, padded, grid);
}

GaugeReport gauge_report(const Reconstruction& rec, const hp::CoefficientSchedule& reference) {
    GaugeReport rep;
    for (int i = 0; i < rec.usable_cells; ++i) {
        const auto& L_rec = rec.lindblads[static_cast<std::size_t>(i)];
        const auto& L_ref = reference.lindblads(i);
        if (L_rec.size() != L_ref.size()) {
            rep.multiplicity_match = false;
            rep.residuals.push_back(std::numeric_limits<double>::infinity());
            rep.max_residual = std::numeric_limits<double>::infinity();
            continue;
        }
        const auto align = noise::gauge_align(L_rec, L_ref);
        rep.residuals.push_back(align.residual);
        rep.max_residual = std::max(rep.max_residual, align.residual);
    }
    return rep;
}

} // namespace qsel::pipeline
