// spin_algebra.hpp — Dicke-sector (S = N/2) collective spin algebra.
//
// The permutation-symmetric sector of N two-level atoms is (N+1)-dimensional.
// Basis ordering is ascending m: index 0 <-> m = -S, index N <-> m = +S.
// Half-integer m is carried as twice-m integers so parity and indexing stay exact.
// Operators are stored as bands (diagonal + one superdiagonal); Sy follows from
// the Sx band with +/- i factors.

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qbatt {

using cplx = std::complex<double>;

inline constexpr int kMaxAtoms = 10000;

enum class Parity { even, odd };

struct DickeBasis {
    int n_atoms = 0;
    int dim = 0;  // n_atoms + 1

    explicit DickeBasis(int n);

    double spin() const { return 0.5 * n_atoms; }
    int twice_m(int index) const { return -n_atoms + 2 * index; }
    double m_value(int index) const { return 0.5 * twice_m(index); }

    // index of |S, m> given twice-m, or -1 when m is not in the sector
    int index_of(int twice_m_value) const;

    // parity of (N/2 - m), conserved by the interacting Hamiltonian
    Parity parity(int index) const {
        return ((n_atoms - twice_m(index)) / 2) % 2 == 0 ? Parity::even : Parity::odd;
    }
};

// Banded representation of the collective operators on the fixed sector.
//   sz_diag[k]  = m_k
//   sx_super[k] = <k+1| Sx |k> = 1/2 sqrt(S(S+1) - m_k(m_k+1))
//   Sy has (k+1,k) element -i*sx_super[k] and (k,k+1) element +i*sx_super[k].
struct CollectiveOps {
    int dim = 0;
    double s_squared = 0.0;  // S(S+1)
    std::vector<double> sz_diag;
    std::vector<double> sx_super;
};

struct StateVector {
    int n_atoms = 0;
    std::vector<cplx> amplitudes;

    int dim() const { return n_atoms + 1; }
};

CollectiveOps build_ops(const DickeBasis& basis, int max_atoms = kMaxAtoms);

// Unit basis state |S, m> with m given as twice-m; throws std::domain_error
// when m lies outside the sector.
StateVector basis_state(const DickeBasis& basis, int twice_m_value);

// Banded matrix-vector products, O(dim) each. out may not alias in.
void apply_sx(const CollectiveOps& ops, std::span<const cplx> in, std::span<cplx> out);
void apply_sy(const CollectiveOps& ops, std::span<const cplx> in, std::span<cplx> out);
void apply_sz(const CollectiveOps& ops, std::span<const cplx> in, std::span<cplx> out);

double norm_sq(const StateVector& psi);

enum class SpinAxis { x, y, z };

// <psi|O|psi> / <psi|psi>; asserts the imaginary residue stays below 1e-12
// relative before discarding it.
double expectation(const CollectiveOps& ops, SpinAxis axis, const StateVector& psi);

// Expectation of a diagonal operator given by its diagonal entries.
double expectation_diag(std::span<const double> diag, const StateVector& psi);

// <Sx^2 + Sy^2 + Sz^2> / <psi|psi>; equals S(S+1) on any sector state.
double casimir_expectation(const CollectiveOps& ops, const StateVector& psi);

// max-norm residue of [Sx,Sy] - i Sz evaluated from the band arrays, relative
// to the magnitude of the cancelling b^2 terms (the off-band entries of the
// commutator cancel identically).
double su2_commutator_residual(const CollectiveOps& ops);

}  // namespace qbatt
