// model.hpp — Hamiltonian assembly for the driven battery.
//
// Free term          H0   = Delta * Sz
// Interacting term   H0I  = Delta * Sz + (g/N)(S^2 - Sz^2 - N/2)   (diagonal)
// Drive              H1   = c(t) * Sx,  c(t) = A cos(wt) | A | 0
//
// Both diagonals are evaluated from twice-m integers so the g-term vanishes
// bit-exactly on |N/2, -N/2>.

#pragma once

#include "qbatt/spin_algebra.hpp"

namespace qbatt {

enum class DriveKind { harmonic, static_field, off };

struct BatteryParams {
    double delta = 1.0;   // level splitting, the unit of energy
    double amp = 0.0;     // drive amplitude A
    double omega = 0.0;   // drive frequency (harmonic only)
    double g = 0.0;       // atom-atom coupling; lambda = g/delta
    int n_atoms = 1;
    DriveKind drive = DriveKind::harmonic;

    double lambda() const { return g / delta; }
    bool interacting() const { return g != 0.0; }

    void validate() const;  // throws std::invalid_argument
};

enum class EnergyReference { free, internal };

// Owns the basis, the operator bands and both diagonals for one parameter set.
// Immutable after construction; shareable across threads.
struct HamiltonianTerms {
    DickeBasis basis;
    CollectiveOps ops;
    std::vector<double> diag_free;      // Delta * m
    std::vector<double> diag_internal;  // E_int(m)

    explicit HamiltonianTerms(const BatteryParams& params);

    const std::vector<double>& diag(EnergyReference ref) const {
        return ref == EnergyReference::free ? diag_free : diag_internal;
    }
};

// Drive coefficient c(t).
double drive_coefficient(const BatteryParams& params, double t);

// out = (diag_internal + c * Sx) in; O(dim). out must not alias in.
void apply_hamiltonian_coeff(const HamiltonianTerms& terms, double c,
                             std::span<const cplx> in, std::span<cplx> out);

// H(t) psi with the full time-dependent coefficient.
StateVector apply_hamiltonian(const HamiltonianTerms& terms, const BatteryParams& params,
                              double t, const StateVector& psi);

// <H_ref> on psi (normalized by <psi|psi>).
double internal_energy_of_state(const HamiltonianTerms& terms, const StateVector& psi,
                                EnergyReference ref);

}  // namespace qbatt
