#include "qbatt/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qbatt {

void BatteryParams::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("BatteryParams: delta must be > 0");
    if (n_atoms < 1) throw std::invalid_argument("BatteryParams: n_atoms must be >= 1");
    if (drive == DriveKind::harmonic && !(omega > 0.0)) {
        throw std::invalid_argument("BatteryParams: harmonic drive requires omega > 0");
    }
    if (amp < 0.0) throw std::invalid_argument("BatteryParams: amp must be >= 0");
}

HamiltonianTerms::HamiltonianTerms(const BatteryParams& params)
    : basis(params.n_atoms), ops(build_ops(basis)) {
    params.validate();
    const int n = params.n_atoms;
    diag_free.resize(basis.dim);
    diag_internal.resize(basis.dim);
    for (int k = 0; k < basis.dim; ++k) {
        const long long tm = basis.twice_m(k);
        // S(S+1) - m^2 - N/2 = (N^2 - (2m)^2)/4, exact in integers
        const long long q4 = ((long long)n * n - tm * tm);
        const double m = 0.5 * (double)tm;
        diag_free[k] = params.delta * m;
        diag_internal[k] = diag_free[k] + (params.g / n) * 0.25 * (double)q4;
    }
}

double drive_coefficient(const BatteryParams& params, double t) {
    switch (params.drive) {
        case DriveKind::harmonic: return params.amp * std::cos(params.omega * t);
        case DriveKind::static_field: return params.amp;
        case DriveKind::off: return 0.0;
    }
    return 0.0;
}

void apply_hamiltonian_coeff(const HamiltonianTerms& terms, double c,
                             std::span<const cplx> in, std::span<cplx> out) {
    const int n = terms.basis.dim;
    if ((int)in.size() != n || (int)out.size() != n) {
        throw std::invalid_argument("apply_hamiltonian: dimension mismatch");
    }
    const double* diag = terms.diag_internal.data();
    const double* b = terms.ops.sx_super.data();
    for (int k = 0; k < n; ++k) {
        cplx v = diag[k] * in[k];
        if (k > 0) v += c * b[k - 1] * in[k - 1];
        if (k + 1 < n) v += c * b[k] * in[k + 1];
        out[k] = v;
    }
}

StateVector apply_hamiltonian(const HamiltonianTerms& terms, const BatteryParams& params,
                              double t, const StateVector& psi) {
    StateVector out;
    out.n_atoms = psi.n_atoms;
    out.amplitudes.resize(psi.amplitudes.size());
    apply_hamiltonian_coeff(terms, drive_coefficient(params, t), psi.amplitudes, out.amplitudes);
    return out;
}

double internal_energy_of_state(const HamiltonianTerms& terms, const StateVector& psi,
                                EnergyReference ref) {
    return expectation_diag(terms.diag(ref), psi);
}

}  // namespace qbatt
