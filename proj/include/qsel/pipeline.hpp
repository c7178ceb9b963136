// pipeline.hpp - The reconstruction pipeline: extracted generators -> kernel
// Grams -> noise fibers -> coefficient operators -> rebuilt schedule, plus the
// gauge report against a reference.

#pragma once

#include "qsel/noise.hpp"
#include "qsel/flows.hpp"

namespace qsel::pipeline {

struct ReconstructionOptions {
    int fd_mult{4};            // h = fd_mult * tau
    bool richardson{true};
    double rank_rel_tol{1e-3}; // fd noise floor sits near 1e-4 at the default h
    double psd_rel_tol{1e-9};
};

struct Reconstruction {
    std::vector<Matrix> drift;                 // per grid cell, tail held constant
    std::vector<std::vector<Matrix>> lindblads;
    std::vector<noise::NoiseFiber> fibers;     // one per grid cell
    std::vector<Matrix> trace_generator;       // extracted 𝓛 superoperators
    int usable_cells{0};                       // cells with a full fd window
    double max_norm_identity_residual{0.0};    // vs extracted drift
};

Reconstruction reconstruct(const flow::ProcessBackend& backend,
                           const ReconstructionOptions& opts = {});

// nearest exactly-unitary schedule built from the reconstruction; second
// member is the discarded anti-hermitian defect of H
std::pair<hp::CoefficientSchedule, double>
rebuild_schedule(const Reconstruction& rec, const hp::TimeGrid& grid);

struct GaugeReport {
    std::vector<double> residuals; // per usable grid cell; Procrustes-aligned
    double max_residual{0.0};
    bool multiplicity_match{true};
};

GaugeReport gauge_report(const Reconstruction& rec, const hp::CoefficientSchedule& reference);

} // namespace qsel::pipeline
