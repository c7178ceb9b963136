#include "doctest.h"

#include "qsel/schedule.hpp"
#include "test_support.hpp"

using namespace qsel;
using namespace qsel::hp;
using namespace qsel::testing;

TEST_CASE("builtin schedules and the unitarity condition") {
    SUBCASE("trivial: zero residuals") {
        const auto s = builtin_schedule("trivial", 1.0, 4);
        const auto rep = validate_unitarity(s);
        CHECK(rep.max_residual == 0.0);
        CHECK(rep.hermitian_defect == 0.0);
    }

    SUBCASE("constant-AD: residual 0 and H = 0") {
        const auto s = builtin_schedule("constant-AD", 1.0, 4);
        const auto rep = validate_unitarity(s);
        CHECK(rep.max_residual < 1e-15);
        CHECK(op_norm(s.hamiltonian_part(0)) < 1e-15);
        CHECK(s.drift(0)(1, 1) == Complex(-0.5, 0.0));
        CHECK(s.lindblads(0)[0](0, 1) == Complex(1.0, 0.0));
    }

    SUBCASE("adding i * hermitian to G keeps the residual zero") {
        auto base = builtin_schedule("constant-AD", 1.0, 4);
        std::vector<Matrix> G;
        std::vector<std::vector<Matrix>> L;
        Matrix herm = Matrix::Zero(2, 2);
        herm(0, 0) = 1.0;
        herm(1, 1) = 2.0;
        for (int i = 0; i < 4; ++i) {
            G.push_back(base.drift(i) + Complex(0, 1) * herm);
            L.push_back(base.lindblads(i));
        }
        CoefficientSchedule s(2, 1, base.grid(), std::move(G), std::move(L));
        const auto rep = validate_unitarity(s);
        CHECK(rep.max_residual < 1e-15);
        CHECK(rep.hermitian_defect < 1e-15);
        CHECK((s.hamiltonian_part(0) + herm).norm() < 1e-15); // H = i(G + L†L/2) = -herm
    }

    SUBCASE("every unitary builtin validates to 1e-12") {
        for (const char* name : {"trivial", "constant-AD", "two-lindblad", "time-ramp", "conservation-demo"}) {
            const auto s = builtin_schedule(name, 1.0, 8);
            CHECK(validate_unitarity(s).max_residual <= 1e-12);
            CHECK(s.flagged_unitary());
        }
    }

    SUBCASE("time-ramp starts at constant-AD") {
        const auto ramp = builtin_schedule("time-ramp", 1.0, 8);
        const auto flat = builtin_schedule("constant-AD", 1.0, 8);
        CHECK((ramp.drift(0) - flat.drift(0)).norm() == 0.0);
        CHECK((ramp.lindblads(0)[0] - flat.lindblads(0)[0]).norm() == 0.0);
        CHECK((ramp.lindblads(7)[0] - flat.lindblads(7)[0]).norm() > 0.1);
    }

    SUBCASE("two-lindblad assembles the stated pair") {
        const auto s = builtin_schedule("two-lindblad", 1.0, 2);
        CHECK(s.noise_dim() == 2);
        CHECK(s.lindblads(0)[1](0, 0) == Complex(1.0 / std::sqrt(2.0), 0.0));
        CHECK(s.drift(0)(0, 0) == Complex(-0.25, 0.0));
        CHECK(s.drift(0)(1, 1) == Complex(-0.75, 0.0));
    }

    SUBCASE("unknown name rejected") {
        CHECK_THROWS_AS(builtin_schedule("bogus", 1.0, 4), std::invalid_argument);
    }
}

TEST_CASE("lindblad_apply") {
    std::mt19937_64 rng(21);

    SUBCASE("zero generator") {
        const auto s = builtin_schedule("trivial", 1.0, 2);
        const Matrix rho = random_density(rng, 2);
        CHECK(lindblad_apply(s, 0, rho).norm() == 0.0);
    }

    SUBCASE("amplitude damping moves |e2><e2| to |e1><e1| - |e2><e2|") {
        const auto s = builtin_schedule("constant-AD", 1.0, 2);
        const Matrix out = lindblad_apply(s, 0, basis_op(2, 1, 1));
        Matrix expect = Matrix::Zero(2, 2);
        expect(0, 0) = 1.0;
        expect(1, 1) = -1.0;
        CHECK((out - expect).norm() < 1e-15);
    }

    SUBCASE("trace-free and hermiticity-preserving on unitary schedules") {
        const auto s = builtin_schedule("two-lindblad", 1.0, 2);
        for (int rep = 0; rep < 25; ++rep) {
            const Matrix rho = random_matrix(rng, 2, 2);
            const Matrix out = lindblad_apply(s, 0, rho);
            CHECK(std::abs(out.trace()) < 1e-12 * std::max(1.0, rho.norm()));
            CHECK((lindblad_apply(s, 0, Matrix(rho.adjoint())) - out.adjoint()).norm() < 1e-13);
        }
    }

    SUBCASE("superoperator matrix agrees with the direct action") {
        const auto s = builtin_schedule("two-lindblad", 1.0, 2);
        const Matrix Lsup = lindblad_superop(s, 0);
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix rho = random_matrix(rng, 2, 2);
            CHECK((unvectorize(Lsup * vectorize(rho), 2) - lindblad_apply(s, 0, rho)).norm() < 1e-13);
        }
    }

    SUBCASE("dimension mismatch rejected") {
        const auto s = builtin_schedule("constant-AD", 1.0, 2);
        CHECK_THROWS_AS(lindblad_apply(s, 0, Matrix::Zero(3, 3)), std::invalid_argument);
    }
}

TEST_CASE("schedule JSON round trip") {
    const auto s = builtin_schedule("conservation-demo", 0.5, 4);
    const auto j = schedule_to_json(s);
    const auto back = schedule_from_json(j);
    CHECK(back.dim_h() == 2);
    CHECK(back.noise_dim() == 1);
    CHECK(back.has_scattering());
    CHECK(back.flagged_unitary());
    for (int i = 0; i < 4; ++i) {
        CHECK((back.drift(i) - s.drift(i)).norm() == 0.0);
        CHECK((back.scattering(i) - s.scattering(i)).norm() == 0.0);
    }
}

TEST_CASE("schedule_from_coefficients hermitizes H") {
    const auto base = builtin_schedule("constant-AD", 1.0, 4);
    std::vector<Matrix> G;
    std::vector<std::vector<Matrix>> L;
    for (int i = 0; i < 4; ++i) {
        G.push_back(base.drift(i) + 0.01 * Matrix::Identity(2, 2) * Complex(1.0, 0.0)); // breaks 2ReG+L†L=0
        L.push_back(base.lindblads(i));
    }
    const auto [rebuilt, defect] = schedule_from_coefficients(G, L, base.grid());
    CHECK(defect > 0.0);
    CHECK(validate_unitarity(rebuilt).max_residual < 1e-14);
}

TEST_CASE("grid alignment checks") {
    const TimeGrid grid(1.0, 10);
    CHECK(grid.index_of(0.3) == 3);
    CHECK_THROWS_AS(grid.index_of(0.35), std::invalid_argument);
    CHECK_THROWS_AS(grid.index_of(1.2), std::invalid_argument);
}
