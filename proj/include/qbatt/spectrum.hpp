// spectrum.hpp — exact spectrum of the interacting Hamiltonian and the
// Holstein-Primakoff thermodynamic limit.
//
// H0I commutes with Sz, so its spectrum is the closed form
//     E(m) = Delta m + (g/N)(S(S+1) - m^2 - N/2)
// over the N+1 sector values of m; no diagonalization is performed outside
// test oracles.  The attractive side has a phase transition at lambda_c = -1
// with <Sz>/(N/2) -> 1/lambda below it.

#pragma once

#include <optional>
#include <vector>

#include "qbatt/model.hpp"

namespace qbatt {

struct GroundStateInfo {
    int twice_m0 = 0;      // minimizing m as twice-m
    double m0 = 0.0;
    double e0 = 0.0;
    double e1 = 0.0;       // second-lowest diagonal value over all m != m0
    double gap = 0.0;
    double sz_per_spin = 0.0;  // m0 / (N/2)
    Parity parity0 = Parity::even;
    bool tie = false;      // minimum attained at two m values (broken toward smaller m)
};

struct MeanFieldResult {
    double sz_per_spin_inf = -1.0;
    double lambda_c = -1.0;
    // beta^2/N = (g + Delta)/(2g); meaningful only below lambda_c
    std::optional<double> beta_sq_per_atom;
};

// E_int(m) for every basis index, ascending m.
std::vector<double> diagonal_spectrum(const BatteryParams& params);

GroundStateInfo ground_state(const BatteryParams& params);

// N -> infinity polarization; lambda >= lambda_c returns the fully polarized
// branch, lambda < lambda_c the shifted branch 1/lambda.
MeanFieldResult hp_polarization(double lambda);

}  // namespace qbatt
