#include "doctest.h"

#include "qsel/element_ode.hpp"
#include "qsel/toyfock.hpp"
#include "test_support.hpp"

using namespace qsel;
using namespace qsel::hp;
using namespace qsel::toy;
using namespace qsel::testing;

TEST_CASE("build_process: slices and caps") {
    SUBCASE("trivial schedule builds identity slices") {
        const auto proc = build_process(builtin_schedule("trivial", 1.0, 4));
        for (int k = 0; k < 4; ++k)
            CHECK((proc.slice(k).matrix - identity(2)).norm() == 0.0);
        std::mt19937_64 rng(31);
        const Vector psi = random_unit(rng, proc.total_dim());
        CHECK((proc.apply(0, 4, psi) - psi).norm() == 0.0);
    }

    SUBCASE("amplitude damping vacuum block is 1 + tau G + O(tau^2)") {
        const double tau = 0.1;
        const auto proc = build_process(builtin_schedule("constant-AD", 1.0, 10));
        const Matrix B = proc.slice_vacuum_block(0);
        CHECK(B(1, 1).real() == doctest::Approx(std::cos(std::sqrt(tau))).epsilon(1e-12));
        const Matrix G = proc.schedule().drift(0);
        CHECK((B - identity(2) - tau * G).norm() < 0.6 * tau * tau);
    }

    SUBCASE("slices are unitary to machine precision") {
        for (const char* name : {"constant-AD", "two-lindblad", "time-ramp", "conservation-demo"}) {
            const auto proc = build_process(builtin_schedule(name, 1.0, 8));
            for (int k = 0; k < proc.slices(); ++k) {
                const Matrix& U = proc.slice(k).matrix;
                CHECK((U.adjoint() * U - identity(U.rows())).norm() <= 1e-13);
            }
        }
    }

    SUBCASE("slice cap and broken unitarity are rejected") {
        CHECK_THROWS_AS(build_process(builtin_schedule("constant-AD", 1.0, 13)), std::invalid_argument);
        auto bad = builtin_schedule("constant-AD", 1.0, 4);
        std::vector<Matrix> G;
        std::vector<std::vector<Matrix>> L;
        for (int i = 0; i < 4; ++i) {
            G.push_back(1.1 * bad.drift(i));
            L.push_back(bad.lindblads(i));
        }
        CoefficientSchedule broken(2, 1, bad.grid(), std::move(G), std::move(L));
        CHECK_THROWS_AS(build_process(broken), std::invalid_argument);
        BuildOptions opts;
        opts.allow_nonunitary = true;
        CHECK_NOTHROW(build_process(broken, opts));
    }
}

TEST_CASE("apply: evolution law, norm preservation, vacuum amplitude") {
    std::mt19937_64 rng(32);
    const auto proc = build_process(builtin_schedule("constant-AD", 1.0, 10));

    SUBCASE("apply(s,s) is the identity and norms are preserved") {
        const Vector psi = random_unit(rng, proc.total_dim());
        CHECK((proc.apply(3, 3, psi) - psi).norm() == 0.0);
        CHECK(std::abs(proc.apply(0, 10, psi).norm() - 1.0) < 1e-11);
    }

    SUBCASE("composition is exact (same ordered product)") {
        const Vector psi = random_unit(rng, proc.total_dim());
        Vector via = proc.apply(4, 9, psi);
        via = proc.apply(1, 4, via);
        CHECK((via - proc.apply(1, 9, psi)).norm() == 0.0);
    }

    SUBCASE("adjoint inverts") {
        const Vector psi = random_unit(rng, proc.total_dim());
        CHECK((proc.apply(2, 8, proc.apply(2, 8, psi), true) - psi).norm() < 1e-12);
    }

    SUBCASE("e2 vacuum amplitude approaches e^{-T/2} at first order") {
        // <e2 ⊗ Ω, U_{0,T} e2 ⊗ Ω> = cos(sqrt(tau))^m -> e^{-T/2}
        const auto amp = [](const ToyFockProcess& p, int m) {
            Vector psi = Vector::Zero(p.total_dim());
            psi(1 * p.fock_dim() + 0) = 1.0;
            return p.apply(0, m, psi)(1 * p.fock_dim() + 0).real();
        };
        const double exact_1 = std::exp(-0.5);
        CHECK(std::abs(amp(proc, 10) - exact_1) < 6e-3);
        // refinement on T = 0.5: first-order error halving
        const auto coarse = build_process(builtin_schedule("constant-AD", 0.5, 5));
        const auto fine = build_process(builtin_schedule("constant-AD", 0.5, 10));
        const double exact_half = std::exp(-0.25);
        const double e_coarse = std::abs(amp(coarse, 5) - exact_half);
        const double e_fine = std::abs(amp(fine, 10) - exact_half);
        CHECK(e_coarse / e_fine > 1.5);
        CHECK(e_coarse / e_fine < 3.0);
    }

    SUBCASE("off-grid intervals rejected") {
        const Vector psi = Vector::Zero(proc.total_dim());
        Vector copy = psi;
        CHECK_THROWS_AS(proc.apply(3, 2, psi), std::invalid_argument);
        CHECK_THROWS_AS(proc.apply(0, 11, psi), std::invalid_argument);
    }
}

TEST_CASE("compressions on the Fock factor") {
    std::mt19937_64 rng(33);
    const auto proc = build_process(builtin_schedule("constant-AD", 0.8, 8));
    const Index dh = proc.dim_h();

    SUBCASE("s = t compresses to <u,v> 1") {
        const Vector u = random_unit(rng, dh), v = random_unit(rng, dh);
        const Vector phi = random_unit(rng, proc.fock_dim());
        CHECK((proc.compress_apply(3, 3, u, v, phi) - u.dot(v) * phi).norm() < 1e-15);
    }

    SUBCASE("disjoint-interval compressions commute") {
        for (int rep = 0; rep < 10; ++rep) {
            const Vector u1 = random_unit(rng, dh), v1 = random_unit(rng, dh);
            const Vector u2 = random_unit(rng, dh), v2 = random_unit(rng, dh);
            const Vector phi = random_unit(rng, proc.fock_dim());
            const Vector xy = proc.compress_apply(0, 3, u1, v1, proc.compress_apply(5, 8, u2, v2, phi));
            const Vector yx = proc.compress_apply(5, 8, u2, v2, proc.compress_apply(0, 3, u1, v1, phi));
            CHECK((xy - yx).norm() < 1e-11);
        }
    }

    SUBCASE("dense assembly matches matrix-free application") {
        const Vector u = random_unit(rng, dh), v = random_unit(rng, dh);
        const Matrix X = proc.compress_dense(1, 4, u, v);
        const Vector phi = random_unit(rng, proc.fock_dim());
        CHECK((X * phi - proc.compress_apply(1, 4, u, v, phi)).norm() < 1e-12);
        // interval unitarity through compressions:
        // Σ_a X(e_a, e_b)† X(e_a, e_b') = (U†U)(e_b, e_b') = δ_bb' 1
        for (Index b = 0; b < dh; ++b)
            for (Index b2 = 0; b2 < dh; ++b2) {
                Matrix acc = Matrix::Zero(proc.fock_dim(), proc.fock_dim());
                for (Index a = 0; a < dh; ++a)
                    acc += proc.compress_dense(1, 4, basis_vec(dh, a), basis_vec(dh, b)).adjoint() *
                           proc.compress_dense(1, 4, basis_vec(dh, a), basis_vec(dh, b2));
                const Matrix expect = (b == b2) ? Matrix(identity(proc.fock_dim())) : Matrix(Matrix::Zero(proc.fock_dim(), proc.fock_dim()));
                CHECK((acc - expect).norm() < 1e-11);
            }
    }

    SUBCASE("dense cap rejected") {
        const Vector u = basis_vec(dh, 0);
        CHECK_THROWS_AS(proc.compress_dense(0, 8, u, u, 0, 16), std::invalid_argument);
    }
}

TEST_CASE("multi-interval words") {
    std::mt19937_64 rng(34);
    const auto proc = build_process(builtin_schedule("constant-AD", 0.8, 8));
    const Index dh = proc.dim_h();

    SUBCASE("n=1 with empty interval returns <u,v> Ω") {
        const Vector u = random_unit(rng, dh), v = random_unit(rng, dh);
        const Vector w = multi_interval_vector(proc, {{2, 2}}, {u}, {v}, {0});
        CHECK((w - u.dot(v) * proc.vacuum()).norm() < 1e-15);
    }

    SUBCASE("vacuum expectations over disjoint intervals factorize") {
        for (int rep = 0; rep < 10; ++rep) {
            const Vector u1 = random_unit(rng, dh), v1 = random_unit(rng, dh);
            const Vector u2 = random_unit(rng, dh), v2 = random_unit(rng, dh);
            const Complex joint =
                proc.vacuum().dot(multi_interval_vector(proc, {{0, 3}, {4, 7}}, {u1, u2}, {v1, v2}, {0, 1}));
            const Complex f1 = proc.vacuum().dot(multi_interval_vector(proc, {{0, 3}}, {u1}, {v1}, {0}));
            const Complex f2 = proc.vacuum().dot(multi_interval_vector(proc, {{4, 7}}, {u2}, {v2}, {1}));
            CHECK(std::abs(joint - f1 * f2) < 1e-11);
        }
    }

    SUBCASE("epsilon-flip cancellation at first order") {
        // <(U-1)(v,u)Ω, ΦΩ> + <(U*-1)(v,u)Ω, ΦΩ> = O(Δ²): superlinear log-log slope
        const Vector u = random_unit(rng, dh), v = random_unit(rng, dh);
        const Vector p = random_unit(rng, dh), w = random_unit(rng, dh);
        std::vector<double> spans, sums;
        for (const int steps : {8, 4, 2}) {
            const Vector phi = proc.compress_apply(0, steps, p, w, proc.vacuum()) -
                               p.dot(w) * proc.vacuum();
            const Vector a = proc.compress_apply(0, steps, v, u, proc.vacuum()) - v.dot(u) * proc.vacuum();
            const Vector b = proc.compress_apply(0, steps, v, u, proc.vacuum(), 1) - v.dot(u) * proc.vacuum();
            spans.push_back(steps * proc.schedule().tau());
            sums.push_back(std::abs(a.dot(phi) + b.dot(phi)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < spans.size(); ++i) {
            const double x = std::log(spans[i]), y = std::log(sums[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
        CHECK(slope > 1.5);
        // while each term alone is first order
        const Vector phi8 = proc.compress_apply(0, 8, p, w, proc.vacuum()) - p.dot(w) * proc.vacuum();
        const Vector a8 = proc.compress_apply(0, 8, v, u, proc.vacuum()) - v.dot(u) * proc.vacuum();
        CHECK(std::abs(a8.dot(phi8)) > 10.0 * sums[0]);
    }

    SUBCASE("interval ordering violations rejected") {
        const Vector u = basis_vec(dh, 0);
        CHECK_THROWS_AS(multi_interval_vector(proc, {{2, 1}}, {u}, {u}, {0}), std::invalid_argument);
        CHECK_THROWS_AS(multi_interval_vector(proc, {{0, 3}, {2, 5}}, {u, u}, {u, u}, {0, 0}),
                        std::invalid_argument);
    }
}

TEST_CASE("discrete exponential vectors") {
    std::mt19937_64 rng(35);

    SUBCASE("e(0) is the vacuum") {
        const auto proc = build_process(builtin_schedule("constant-AD", 1.0, 8));
        const Vector e0 = discrete_exponential_vector(proc, StepFunction::zero(1, 8));
        CHECK((e0 - proc.vacuum()).norm() == 0.0);
        CHECK(std::abs(e0.dot(e0) - 1.0) == 0.0);
    }

    SUBCASE("constant f: product inner product converging to e^{T|c|^2}") {
        const double c = 0.7, T = 1.0;
        for (const int m : {5, 10}) {
            const auto proc = build_process(builtin_schedule("constant-AD", T, m));
            Vector cv(1);
            cv << Complex(c, 0.0);
            const Vector ef = discrete_exponential_vector(proc, StepFunction::constant(cv, m));
            const double tau = T / m;
            CHECK(std::abs(ef.squaredNorm() - std::pow(1.0 + tau * c * c, m)) < 1e-12);
        }
        CHECK(std::pow(1.0 + 0.1 * c * c, 10) == doctest::Approx(std::exp(T * c * c)).epsilon(0.05));
    }

    SUBCASE("matrix elements on exponential vectors converge to the ODE value at first order") {
        const double T = 0.8;
        std::mt19937_64 r2(36);
        Vector fv(1), gv(1);
        fv << Complex(0.4, 0.2);
        gv << Complex(-0.3, 0.5);
        const Vector u = random_unit(r2, 2), v = random_unit(r2, 2);
        double errs[2];
        int idx = 0;
        for (const int m : {6, 12}) {
            const auto sched = builtin_schedule("constant-AD", T, m);
            const auto proc = build_process(sched);
            const auto f = StepFunction::constant(fv, m);
            const auto g = StepFunction::constant(gv, m);
            const Vector rhs = proc.compress_apply(0, m, u, v, discrete_exponential_vector(proc, g));
            const Complex toy_val = discrete_exponential_vector(proc, f).dot(rhs);
            const Matrix M = qsel::ode::element_ode({sched, f, g, 0, m, 1e-3});
            errs[idx++] = std::abs(toy_val - u.dot(M * v));
        }
        CHECK(errs[0] / errs[1] > 1.5);
        CHECK(errs[0] / errs[1] < 3.0);
    }

    SUBCASE("misaligned step functions rejected") {
        const auto proc = build_process(builtin_schedule("constant-AD", 1.0, 8));
        CHECK_THROWS_AS(discrete_exponential_vector(proc, StepFunction::zero(1, 7)), std::invalid_argument);
        CHECK_THROWS_AS(discrete_exponential_vector(proc, StepFunction::zero(2, 8)), std::invalid_argument);
    }
}
