#include <doctest.h>

#include <cmath>

#include "qbatt/model.hpp"
#include "qbatt/spectrum.hpp"

using namespace qbatt;

TEST_CASE("drive coefficient") {
    BatteryParams p;
    p.amp = 1.0;
    p.omega = 2.0 * M_PI;
    CHECK(drive_coefficient(p, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(drive_coefficient(p, 0.25)) <= 1e-15);  // cos(pi/2)

    p.drive = DriveKind::static_field;
    p.amp = 0.7;
    CHECK(drive_coefficient(p, 0.0) == doctest::Approx(0.7));
    CHECK(drive_coefficient(p, 13.7) == doctest::Approx(0.7));

    p.drive = DriveKind::off;
    CHECK(drive_coefficient(p, 1.0) == 0.0);
}

TEST_CASE("params validation") {
    BatteryParams p;
    p.omega = 1.0;
    CHECK_NOTHROW(p.validate());
    p.omega = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // harmonic needs omega
    p.drive = DriveKind::off;
    CHECK_NOTHROW(p.validate());
    p.n_atoms = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("diagonals: free equals internal at g = 0, exactly") {
    BatteryParams p;
    p.n_atoms = 31;
    p.omega = 1.0;
    HamiltonianTerms terms(p);
    for (int k = 0; k < terms.basis.dim; ++k) {
        CHECK(terms.diag_internal[k] == terms.diag_free[k]);  // bitwise
    }
}

TEST_CASE("g-term vanishes on the lowest state for every g") {
    for (double lambda : {-2.0, -1.2, 0.0, 0.7, 1.5}) {
        for (int n : {1, 2, 7, 200}) {
            CAPTURE(lambda);
            CAPTURE(n);
            BatteryParams p;
            p.n_atoms = n;
            p.g = lambda;
            p.drive = DriveKind::off;
            HamiltonianTerms terms(p);
            CHECK(terms.diag_internal.front() == -0.5 * n);  // exact
        }
    }
}

TEST_CASE("apply_hamiltonian: diagonal cases") {
    BatteryParams p;
    p.n_atoms = 5;
    p.amp = 0.0;
    p.drive = DriveKind::off;
    HamiltonianTerms terms(p);
    DickeBasis basis(5);
    for (int k = 0; k < basis.dim; ++k) {
        StateVector m_state = basis_state(basis, basis.twice_m(k));
        StateVector h_psi = apply_hamiltonian(terms, p, 0.0, m_state);
        for (int j = 0; j < basis.dim; ++j) {
            const cplx expect = j == k ? cplx(basis.m_value(k), 0.0) : cplx(0.0, 0.0);
            CHECK(std::abs(h_psi.amplitudes[j] - expect) <= 1e-15);
        }
    }
}

TEST_CASE("apply_hamiltonian: N = 1 with drive at t = 0") {
    // H |g> = -1/2 |g> + 1/2 |e> for Delta = A = 1
    BatteryParams p;
    p.amp = 1.0;
    p.omega = 1.0;
    HamiltonianTerms terms(p);
    DickeBasis basis(1);
    StateVector g = basis_state(basis, -1);
    StateVector h_psi = apply_hamiltonian(terms, p, 0.0, g);
    CHECK(h_psi.amplitudes[0].real() == doctest::Approx(-0.5));
    CHECK(h_psi.amplitudes[1].real() == doctest::Approx(0.5));
}

TEST_CASE("apply_hamiltonian: lowest state is an eigenstate without drive") {
    BatteryParams p;
    p.n_atoms = 9;
    p.g = 0.83;
    p.amp = 0.0;
    p.drive = DriveKind::off;
    HamiltonianTerms terms(p);
    DickeBasis basis(9);
    StateVector lowest = basis_state(basis, -9);
    StateVector h_psi = apply_hamiltonian(terms, p, 3.0, lowest);
    CHECK(h_psi.amplitudes[0].real() == doctest::Approx(-4.5).epsilon(1e-15));
    for (int j = 1; j < basis.dim; ++j) CHECK(std::abs(h_psi.amplitudes[j]) == 0.0);
}

TEST_CASE("internal energy examples") {
    SUBCASE("fully charged, free reference") {
        BatteryParams p;
        p.n_atoms = 6;
        p.drive = DriveKind::off;
        HamiltonianTerms terms(p);
        DickeBasis basis(6);
        StateVector top = basis_state(basis, 6);
        CHECK(internal_energy_of_state(terms, top, EnergyReference::free) ==
              doctest::Approx(3.0).epsilon(1e-15));
    }
    SUBCASE("N = 200, lambda = -1.2, m = -83") {
        // E = -83 - 0.006 (10100 - 6889 - 100) = -101.666
        BatteryParams p;
        p.n_atoms = 200;
        p.g = -1.2;
        p.drive = DriveKind::off;
        HamiltonianTerms terms(p);
        DickeBasis basis(200);
        StateVector psi = basis_state(basis, -166);
        CHECK(internal_energy_of_state(terms, psi, EnergyReference::internal) ==
              doctest::Approx(-101.666).epsilon(1e-12));
    }
    SUBCASE("lowest state, internal reference, any g") {
        BatteryParams p;
        p.n_atoms = 200;
        p.g = 1.7;
        p.drive = DriveKind::off;
        HamiltonianTerms terms(p);
        DickeBasis basis(200);
        StateVector lowest = basis_state(basis, -200);
        CHECK(internal_energy_of_state(terms, lowest, EnergyReference::internal) == -100.0);
    }
}

TEST_CASE("E_int is quadratic in m and its minimizer matches ground_state") {
    BatteryParams p;
    p.n_atoms = 64;
    p.g = -1.37;
    p.drive = DriveKind::off;
    HamiltonianTerms terms(p);
    // constant second difference = -2g/N
    const double expected_dd = -2.0 * p.g / p.n_atoms;
    for (int k = 1; k + 1 < terms.basis.dim; ++k) {
        const double dd =
            terms.diag_internal[k + 1] - 2.0 * terms.diag_internal[k] + terms.diag_internal[k - 1];
        CHECK(dd == doctest::Approx(expected_dd).epsilon(1e-12));
    }
    const GroundStateInfo gs = ground_state(p);
    int argmin = 0;
    for (int k = 1; k < terms.basis.dim; ++k) {
        if (terms.diag_internal[k] < terms.diag_internal[argmin]) argmin = k;
    }
    CHECK(terms.basis.twice_m(argmin) == gs.twice_m0);
}

TEST_CASE("H(t) is Hermitian: <phi|H psi> = conj(<psi|H phi>)") {
    BatteryParams p;
    p.n_atoms = 8;
    p.amp = 1.3;
    p.omega = 0.9;
    p.g = -0.6;
    HamiltonianTerms terms(p);
    DickeBasis basis(8);

    StateVector phi, psi;
    phi.n_atoms = psi.n_atoms = 8;
    phi.amplitudes.resize(9);
    psi.amplitudes.resize(9);
    for (int k = 0; k < 9; ++k) {
        phi.amplitudes[k] = cplx(std::sin(k + 0.2), std::cos(2 * k));
        psi.amplitudes[k] = cplx(std::cos(k * 0.8), std::sin(k * 1.7));
    }
    for (double t : {0.0, 0.4, 2.9}) {
        StateVector h_psi = apply_hamiltonian(terms, p, t, psi);
        StateVector h_phi = apply_hamiltonian(terms, p, t, phi);
        cplx lhs(0, 0), rhs(0, 0);
        for (int k = 0; k < 9; ++k) {
            lhs += std::conj(phi.amplitudes[k]) * h_psi.amplitudes[k];
            rhs += std::conj(psi.amplitudes[k]) * h_phi.amplitudes[k];
        }
        CHECK(std::abs(lhs - std::conj(rhs)) <= 1e-12);
    }
}
