// lab.hpp - Executable checkers for the process hypotheses (evolution,
// independence of increments, regularity, Gaussianity, minimality) and the
// multi-interval correlation-equivalence certificate between two processes.

#pragma once

#include <random>

#include "qsel/flows.hpp"

namespace qsel::lab {

using toy::ToyFockProcess;

struct AssumptionReport {
    std::string assumption;
    double max_violation{0.0};
    int samples{0};
    double threshold{0.0};
    bool pass{false};
};

nlohmann::json report_to_json(const AssumptionReport& rep);

// A1 (evolution law) on sampled triples r <= s <= t with random probe vectors.
// scrambled reverses the slice order inside each interval product - the
// negative control that breaks the evolution law.
AssumptionReport check_A1(const ToyFockProcess& proc, int samples, unsigned seed,
                          double threshold = 1e-11, bool scrambled = false);

// A2(i): commutators of compressions over disjoint intervals on probe vectors
AssumptionReport check_A2_commute(const ToyFockProcess& proc, int samples, unsigned seed,
                                  double threshold = 1e-11);

// A2(ii): factorization of vacuum expectations of multi-interval words over
// disjoint blocks (word lengths n, m <= 3). reference overrides the vacuum -
// an entangled reference is the negative control.
AssumptionReport check_A2_factorize(const ToyFockProcess& proc, int samples, unsigned seed,
                                    double threshold = 1e-10,
                                    const Vector* reference = nullptr);

struct RegularityEstimate {
    double c_all{0.0};   // sup over stored pairs
    double c_small{0.0}; // sup over single-cell spans
};

RegularityEstimate check_B(const flow::ProcessBackend& backend);

struct DecayReport {
    std::vector<double> spans;
    std::vector<double> q_abs; // |q(span)| = |<Ω, Π_k (U^{(eps_k)}-1)(u_k,v_k) Ω>| / span
    double slope{0.0};         // log-log least-squares fit
    bool pass{false};          // slope within [0.8, 1.2]
};

// Third-order normalized vacuum cumulant of increment compressions over
// [s, s+span) at span, span/2, span/4 (grid steps).
DecayReport gaussianity_probe(const ToyFockProcess& proc,
                              const std::vector<Vector>& us, const std::vector<Vector>& vs,
                              const std::vector<int>& eps, int s, int span_steps);

struct MinimalityReport {
    int rank{0};
    Index fock_dim{0};
    int samples{0};
    bool pass{false};
};

// Numerical rank of the span of multi-interval vectors (eps = 0 words) against
// the truncated Fock dimension; an identity process passes with rank 1.
MinimalityReport check_D_minimality(const ToyFockProcess& proc, int n_max, int samples,
                                    unsigned seed, double rank_tol = 1e-8);

struct CorrelationSpec {
    std::vector<std::pair<int, int>> intervals1;
    std::vector<Vector> us1, vs1;
    std::vector<int> eps1;
    std::vector<std::pair<int, int>> intervals2;
    std::vector<Vector> us2, vs2;
    std::vector<int> eps2;
};

Complex correlation_value(const ToyFockProcess& proc, const CorrelationSpec& spec);

struct EquivalenceReport {
    double max_deviation{0.0};
    std::vector<double> deviations; // one per spec
};

EquivalenceReport correlation_equivalence(const ToyFockProcess& a, const ToyFockProcess& b,
                                          const std::vector<CorrelationSpec>& specs);

// seeded battery of random multi-interval specs (words up to max_word intervals)
std::vector<CorrelationSpec> random_battery(int dim_h, int slices, int count,
                                            int max_word, unsigned seed);

// random unit vector, shared by the checkers' probe sampling
Vector random_unit(std::mt19937_64& rng, Index n);

} // namespace qsel::lab
