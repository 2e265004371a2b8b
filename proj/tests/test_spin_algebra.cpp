#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qbatt/spin_algebra.hpp"

using namespace qbatt;

namespace {

// deterministic non-trivial unit state
StateVector pseudo_random_state(int n_atoms, int seed) {
    StateVector psi;
    psi.n_atoms = n_atoms;
    psi.amplitudes.resize(n_atoms + 1);
    double norm = 0.0;
    for (int k = 0; k <= n_atoms; ++k) {
        const double re = std::sin(0.37 * seed + 1.1 * k + 0.3);
        const double im = std::cos(0.53 * seed + 0.7 * k);
        psi.amplitudes[k] = cplx(re, im);
        norm += re * re + im * im;
    }
    for (auto& a : psi.amplitudes) a /= std::sqrt(norm);
    return psi;
}

}  // namespace

TEST_CASE("basis bookkeeping") {
    DickeBasis basis(4);
    CHECK(basis.dim == 5);
    CHECK(basis.spin() == doctest::Approx(2.0));
    CHECK(basis.twice_m(0) == -4);
    CHECK(basis.twice_m(4) == 4);
    CHECK(basis.m_value(1) == doctest::Approx(-1.0));
    CHECK(basis.index_of(-4) == 0);
    CHECK(basis.index_of(4) == 4);
    CHECK(basis.index_of(5) == -1);   // wrong parity
    CHECK(basis.index_of(6) == -1);   // m > S
    CHECK(basis.parity(4) == Parity::even);  // m = +2: N/2 - m = 0
    CHECK(basis.parity(3) == Parity::odd);

    CHECK_THROWS_AS(DickeBasis(0), std::invalid_argument);
}

TEST_CASE("operator bands: N = 1 is Pauli/2") {
    DickeBasis basis(1);
    CollectiveOps ops = build_ops(basis);
    CHECK(ops.sz_diag[0] == doctest::Approx(-0.5));
    CHECK(ops.sz_diag[1] == doctest::Approx(0.5));
    REQUIRE(ops.sx_super.size() == 1);
    CHECK(ops.sx_super[0] == doctest::Approx(0.5));
    CHECK(ops.s_squared == doctest::Approx(0.75));
}

TEST_CASE("operator bands: N = 2 ladder values") {
    // sqrt(S(S+1) - m(m+1))/2 with S = 1 gives sqrt(2)/2 on both links
    DickeBasis basis(2);
    CollectiveOps ops = build_ops(basis);
    CHECK(ops.sx_super[0] == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(ops.sx_super[1] == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(ops.sz_diag[0] == doctest::Approx(-1.0));
    CHECK(ops.sz_diag[1] == doctest::Approx(0.0));
    CHECK(ops.sz_diag[2] == doctest::Approx(1.0));
}

TEST_CASE("build_ops size errors") {
    DickeBasis basis(8);
    CHECK_NOTHROW(build_ops(basis));
    CHECK_THROWS_AS(build_ops(basis, 4), std::invalid_argument);  // above cap
}

TEST_CASE("storage is banded") {
    DickeBasis basis(600);
    CollectiveOps ops = build_ops(basis);
    CHECK(ops.sz_diag.size() == 601);
    CHECK(ops.sx_super.size() == 600);
}

TEST_CASE("su(2) commutators to 1e-12") {
    for (int n : {1, 2, 5, 50, 600}) {
        CAPTURE(n);
        DickeBasis basis(n);
        CollectiveOps ops = build_ops(basis);
        CHECK(su2_commutator_residual(ops) <= 1e-12);

        // independent route through the banded matvecs on a probe vector
        StateVector v = pseudo_random_state(n, n);
        std::vector<cplx> sy_v(n + 1), sx_sy_v(n + 1), sx_v(n + 1), sy_sx_v(n + 1), sz_v(n + 1);
        apply_sy(ops, v.amplitudes, sy_v);
        apply_sx(ops, sy_v, sx_sy_v);
        apply_sx(ops, v.amplitudes, sx_v);
        apply_sy(ops, sx_v, sy_sx_v);
        apply_sz(ops, v.amplitudes, sz_v);
        double worst = 0.0;
        for (int k = 0; k <= n; ++k) {
            const cplx r = sx_sy_v[k] - sy_sx_v[k] - cplx(0.0, 1.0) * sz_v[k];
            worst = std::max(worst, std::abs(r));
        }
        // intermediate products are of size S(S+1), so compare relative to it
        CHECK(worst / ops.s_squared <= 1e-12);
    }
}

TEST_CASE("dense oracle agrees with the bands for small N") {
    for (int n : {2, 7, 12}) {
        CAPTURE(n);
        DickeBasis basis(n);
        CollectiveOps ops = build_ops(basis);
        auto sx = oracle::dense_sx(n);
        auto sz = oracle::dense_sz(n);
        for (int k = 0; k <= n; ++k) {
            CHECK(ops.sz_diag[k] == doctest::Approx(sz[k][k]).epsilon(1e-15));
            if (k < n) CHECK(ops.sx_super[k] == doctest::Approx(sx[k][k + 1]).epsilon(1e-15));
        }
    }
}

TEST_CASE("basis_state placement and errors") {
    DickeBasis basis(4);
    StateVector lowest = basis_state(basis, -4);
    CHECK(lowest.amplitudes[0] == cplx(1.0, 0.0));
    CHECK(norm_sq(lowest) == doctest::Approx(1.0).epsilon(1e-15));

    StateVector top = basis_state(basis, 4);  // the fully-charged state
    CHECK(top.amplitudes[4] == cplx(1.0, 0.0));

    CHECK_THROWS_AS(basis_state(basis, 6), std::domain_error);
    CHECK_THROWS_AS(basis_state(basis, 3), std::domain_error);  // wrong parity
}

TEST_CASE("expectations") {
    DickeBasis basis(6);
    CollectiveOps ops = build_ops(basis);

    StateVector lowest = basis_state(basis, -6);
    CHECK(expectation(ops, SpinAxis::z, lowest) == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(expectation(ops, SpinAxis::x, lowest) == doctest::Approx(0.0));

    // equal superposition of m = -1/2 and +1/2 for one atom
    DickeBasis one(1);
    CollectiveOps ops1 = build_ops(one);
    StateVector sup;
    sup.n_atoms = 1;
    sup.amplitudes = {cplx(M_SQRT1_2, 0.0), cplx(M_SQRT1_2, 0.0)};
    CHECK(expectation(ops1, SpinAxis::z, sup) == doctest::Approx(0.0));

    StateVector wrong;
    wrong.n_atoms = 3;
    wrong.amplitudes.assign(4, cplx(0.5, 0.0));
    CHECK_THROWS_AS(expectation(ops, SpinAxis::z, wrong), std::invalid_argument);
}

TEST_CASE("Casimir on arbitrary sector states") {
    for (int n : {1, 5, 33}) {
        CAPTURE(n);
        DickeBasis basis(n);
        CollectiveOps ops = build_ops(basis);
        for (int seed : {1, 2, 3}) {
            StateVector psi = pseudo_random_state(n, seed);
            CHECK(casimir_expectation(ops, psi) ==
                  doctest::Approx(ops.s_squared).epsilon(1e-10));
        }
    }
}

TEST_CASE("sy is Hermitian and antisymmetric (dense check)") {
    DickeBasis basis(5);
    CollectiveOps ops = build_ops(basis);
    const int dim = basis.dim;
    // assemble dense Sy from the band and verify (Sy)^dagger = Sy, (Sy)^T = -Sy
    std::vector<std::vector<cplx>> sy(dim, std::vector<cplx>(dim, cplx(0, 0)));
    for (int k = 0; k + 1 < dim; ++k) {
        sy[k][k + 1] = cplx(0.0, ops.sx_super[k]);
        sy[k + 1][k] = cplx(0.0, -ops.sx_super[k]);
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            CHECK(std::abs(sy[i][j] - std::conj(sy[j][i])) == doctest::Approx(0.0));
            CHECK(std::abs(sy[i][j] + sy[j][i]) == doctest::Approx(0.0));
        }
    }
}
