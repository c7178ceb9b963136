// Assumption checkers and the correlation-equivalence certificate.

#include "qsel/lab.hpp"

#include <algorithm>

namespace qsel::lab {

Vector random_unit(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    const double nrm = v.norm();
    return nrm > 0 ? Vector(v / nrm) : basis_vec(n, 0);
}

nlohmann::json report_to_json(const AssumptionReport& rep) {
    return nlohmann::json{{"assumption", rep.assumption},
                          {"max_violation", rep.max_violation},
                          {"samples", rep.samples},
                          {"threshold", rep.threshold},
                          {"pass", rep.pass}};
}

AssumptionReport check_A1(const ToyFockProcess& proc, int samples, unsigned seed,
                          double threshold, bool scrambled) {
    std::mt19937_64 rng(seed);
    const int m = proc.slices();
    std::uniform_int_distribution<int> pick(0, m);
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
        int r = pick(rng), s = pick(rng), t = pick(rng);
        if (r > s) std::swap(r, s);
        if (s > t) std::swap(s, t);
        if (r > s) std::swap(r, s);
        Vector psi = random_unit(rng, proc.total_dim());
        Vector lhs = psi;
        proc.apply_in_place(s, t, lhs, false, scrambled);
        proc.apply_in_place(r, s, lhs, false, scrambled);
        Vector rhs = psi;
        proc.apply_in_place(r, t, rhs, false, scrambled);
        worst = std::max(worst, (lhs - rhs).norm());
    }
    return {scrambled ? "A1-scrambled" : "A1", worst, samples, threshold, worst <= threshold};
}

namespace {

// two disjoint intervals inside [0, m], each nonempty
std::pair<std::pair<int, int>, std::pair<int, int>> disjoint_pair(std::mt19937_64& rng, int m) {
    std::uniform_int_distribution<int> pick(0, m);
    for (;;) {
        int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng);
        std::array<int, 4> x{a, b, c, d};
        std::sort(x.begin(), x.end());
        if (x[0] < x[1] && x[2] < x[3] && x[1] <= x[2]) return {{x[0], x[1]}, {x[2], x[3]}};
    }
}

} // namespace

AssumptionReport check_A2_commute(const ToyFockProcess& proc, int samples, unsigned seed,
                                  double threshold) {
    std::mt19937_64 rng(seed);
    const int m = proc.slices();
    if (m < 2) return {"A2i", 0.0, 0, threshold, true};
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
        const auto [I, J] = disjoint_pair(rng, m);
        const Vector u1 = random_unit(rng, proc.dim_h()), v1 = random_unit(rng, proc.dim_h());
        const Vector u2 = random_unit(rng, proc.dim_h()), v2 = random_unit(rng, proc.dim_h());
        const int e2 = (n % 2); // also check against the adjoint on the second interval
        const Vector phi = random_unit(rng, proc.fock_dim());
        const Vector xy = proc.compress_apply(I.first, I.second, u1, v1,
                                              proc.compress_apply(J.first, J.second, u2, v2, phi, e2));
        const Vector yx = proc.compress_apply(J.first, J.second, u2, v2,
                                              proc.compress_apply(I.first, I.second, u1, v1, phi), e2);
        worst = std::max(worst, (xy - yx).norm());
    }
    return {"A2i", worst, samples, threshold, worst <= threshold};
}

namespace {

// one multi-interval word with its vectors and adjoint bits drawn up front
struct Word {
    std::vector<std::pair<int, int>> iv;
    std::vector<Vector> us, vs;
    std::vector<int> eps;
};

Word draw_word(std::mt19937_64& rng, std::pair<int, int> block, int max_len, Index dim_h) {
    std::uniform_int_distribution<int> len(1, max_len);
    std::uniform_int_distribution<int> inner(block.first, block.second);
    std::uniform_int_distribution<int> bit(0, 1);
    Word w;
    const int count = len(rng);
    std::vector<int> cuts;
    for (int k = 0; k < 2 * count; ++k) cuts.push_back(inner(rng));
    std::sort(cuts.begin(), cuts.end());
    for (int k = 0; k < count; ++k) {
        w.iv.emplace_back(cuts[2 * k], cuts[2 * k + 1]);
        w.us.push_back(random_unit(rng, dim_h));
        w.vs.push_back(random_unit(rng, dim_h));
        w.eps.push_back(bit(rng));
    }
    return w;
}

Vector apply_word(const ToyFockProcess& proc, const Word& w, const Vector& in) {
    Vector phi = in;
    for (std::size_t k = w.iv.size(); k-- > 0;)
        phi = proc.compress_apply(w.iv[k].first, w.iv[k].second, w.us[k], w.vs[k], phi, w.eps[k]);
    return phi;
}

} // namespace

AssumptionReport check_A2_factorize(const ToyFockProcess& proc, int samples, unsigned seed,
                                    double threshold, const Vector* reference) {
    std::mt19937_64 rng(seed);
    const int m = proc.slices();
    if (m < 2) return {"A2ii", 0.0, 0, threshold, true};
    const Vector ref = reference ? *reference : Vector(proc.vacuum());
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
        const auto [I, J] = disjoint_pair(rng, m);
        const Word w1 = draw_word(rng, I, 3, proc.dim_h());
        const Word w2 = draw_word(rng, J, 3, proc.dim_h());
        const Complex joint = ref.dot(apply_word(proc, w1, apply_word(proc, w2, ref)));
        const Complex fac1 = ref.dot(apply_word(proc, w1, ref));
        const Complex fac2 = ref.dot(apply_word(proc, w2, ref));
        worst = std::max(worst, std::abs(joint - fac1 * fac2));
    }
    return {"A2ii", worst, samples, threshold, worst <= threshold};
}

RegularityEstimate check_B(const flow::ProcessBackend& backend) {
    const auto snap = flow::build_snapshot(backend, flow::FlowKind::VacuumFlow);
    RegularityEstimate est;
    est.c_all = flow::regularity_constant(snap);
    const double tau = backend.grid().tau();
    for (int i = 0; i + 1 <= backend.grid().steps; ++i)
        est.c_small = std::max(est.c_small, op_norm(snap.at(i, i + 1) - Matrix::Identity(snap.dim, snap.dim)) / tau);
    return est;
}

DecayReport gaussianity_probe(const ToyFockProcess& proc,
                              const std::vector<Vector>& us, const std::vector<Vector>& vs,
                              const std::vector<int>& eps, int s, int span_steps) {
    if (us.size() != 3 || vs.size() != 3 || eps.size() != 3)
        throw std::invalid_argument("gaussianity_probe: needs a length-3 word");
    if (span_steps % 4 != 0 || span_steps <= 0)
        throw std::invalid_argument("gaussianity_probe: span must be a positive multiple of four grid steps");
    if (s + span_steps > proc.slices())
        throw std::invalid_argument("gaussianity_probe: span extends past the grid");
    DecayReport rep;
    const double tau = proc.schedule().tau();
    for (const int p : {span_steps, span_steps / 2, span_steps / 4}) {
        Vector phi = proc.vacuum();
        for (int k = 2; k >= 0; --k) {
            const Complex overlap = us[static_cast<std::size_t>(k)].dot(vs[static_cast<std::size_t>(k)]);
            const Vector compressed = proc.compress_apply(s, s + p, us[static_cast<std::size_t>(k)],
                                                          vs[static_cast<std::size_t>(k)], phi,
                                                          eps[static_cast<std::size_t>(k)]);
            phi = compressed - overlap * phi; // (U^{(eps)} - 1)(u,v)
        }
        const double span = p * tau;
        rep.spans.push_back(span);
        rep.q_abs.push_back(std::abs(proc.vacuum().dot(phi)) / span);
    }
    double q_max = 0.0;
    for (const double q : rep.q_abs) q_max = std::max(q_max, q);
    if (q_max <= 1e-13) { // identically vanishing cumulant: Gaussian vacuously
        rep.slope = 0.0;
        rep.pass = true;
        return rep;
    }
    // log-log least squares over the three spans
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < rep.spans.size(); ++i) {
        if (rep.q_abs[i] <= 0.0) continue;
        const double x = std::log(rep.spans[i]);
        const double y = std::log(rep.q_abs[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    rep.slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    rep.pass = rep.slope >= 0.8 && rep.slope <= 1.2;
    return rep;
}

MinimalityReport check_D_minimality(const ToyFockProcess& proc, int n_max, int samples,
                                    unsigned seed, double rank_tol) {
    std::mt19937_64 rng(seed);
    const int m = proc.slices();
    MinimalityReport rep;
    rep.fock_dim = proc.fock_dim();
    rep.samples = samples;

    bool identity_process = true;
    for (int k = 0; k < m && identity_process; ++k)
        identity_process = (proc.slice(k).matrix - identity(proc.slice(k).matrix.rows())).norm() <= 1e-13;

    std::uniform_int_distribution<int> nword(1, std::max(1, n_max));
    std::uniform_int_distribution<int> cut(0, m);
    std::vector<Vector> span;
    span.push_back(proc.vacuum());
    for (int t = 0; t < samples; ++t) {
        const int n = nword(rng);
        std::vector<int> cuts;
        for (int k = 0; k < 2 * n; ++k) cuts.push_back(cut(rng));
        std::sort(cuts.begin(), cuts.end());
        std::vector<std::pair<int, int>> iv;
        std::vector<Vector> us, vs;
        std::vector<int> eps;
        for (int k = 0; k < n; ++k) {
            iv.emplace_back(cuts[2 * k], cuts[2 * k + 1]);
            us.push_back(random_unit(rng, proc.dim_h()));
            vs.push_back(random_unit(rng, proc.dim_h()));
            eps.push_back(0);
        }
        Vector w = multi_interval_vector(proc, iv, us, vs, eps);
        const double nrm = w.norm();
        if (nrm > 1e-12) span.push_back(w / nrm);
    }
    Matrix M(proc.fock_dim(), static_cast<Index>(span.size()));
    for (std::size_t c = 0; c < span.size(); ++c) M.col(static_cast<Index>(c)) = span[c];
    const auto sv = M.jacobiSvd().singularValues();
    int rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol * sv(0)) ++rank;
    rep.rank = rank;
    rep.pass = identity_process ? (rank == 1) : (rank == static_cast<int>(rep.fock_dim));
    return rep;
}

Complex correlation_value(const ToyFockProcess& proc, const CorrelationSpec& spec) {
    const Vector a = multi_interval_vector(proc, spec.intervals1, spec.us1, spec.vs1, spec.eps1);
    const Vector b = multi_interval_vector(proc, spec.intervals2, spec.us2, spec.vs2, spec.eps2);
    return a.dot(b);
}

EquivalenceReport correlation_equivalence(const ToyFockProcess& a, const ToyFockProcess& b,
                                          const std::vector<CorrelationSpec>& specs) {
    if (a.dim_h() != b.dim_h() || a.slices() != b.slices())
        throw std::invalid_argument("correlation_equivalence: processes must share dim_h and grid");
    EquivalenceReport rep;
    for (const auto& spec : specs) {
        const double dev = std::abs(correlation_value(a, spec) - correlation_value(b, spec));
        rep.deviations.push_back(dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    return rep;
}

std::vector<CorrelationSpec> random_battery(int dim_h, int slices, int count,
                                            int max_word, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> nword(1, std::max(1, max_word));
    std::uniform_int_distribution<int> cut(0, slices);
    std::uniform_int_distribution<int> bit(0, 1);
    const auto side = [&](std::vector<std::pair<int, int>>& iv, std::vector<Vector>& us,
                          std::vector<Vector>& vs, std::vector<int>& eps) {
        const int n = nword(rng);
        std::vector<int> cuts;
        for (int k = 0; k < 2 * n; ++k) cuts.push_back(cut(rng));
        std::sort(cuts.begin(), cuts.end());
        for (int k = 0; k < n; ++k) {
            iv.emplace_back(cuts[2 * k], cuts[2 * k + 1]);
            us.push_back(random_unit(rng, dim_h));
            vs.push_back(random_unit(rng, dim_h));
            eps.push_back(bit(rng));
        }
    };
    std::vector<CorrelationSpec> specs(static_cast<std::size_t>(count));
    for (auto& s : specs) {
        side(s.intervals1, s.us1, s.vs1, s.eps1);
        side(s.intervals2, s.us2, s.vs2, s.eps2);
    }
    return specs;
}

} // namespace qsel::lab
