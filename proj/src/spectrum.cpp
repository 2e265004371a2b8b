#include "qbatt/spectrum.hpp"

#include <limits>

namespace qbatt {

std::vector<double> diagonal_spectrum(const BatteryParams& params) {
    HamiltonianTerms terms(params);
    return terms.diag_internal;
}

GroundStateInfo ground_state(const BatteryParams& params) {
    const std::vector<double> e = diagonal_spectrum(params);
    const DickeBasis basis(params.n_atoms);

    int k0 = 0;
    bool tie = false;
    for (int k = 1; k < (int)e.size(); ++k) {
        if (e[k] < e[k0]) {
            k0 = k;
            tie = false;
        } else if (e[k] == e[k0]) {
            tie = true;  // keep the smaller-m index
        }
    }
    double e1 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < (int)e.size(); ++k) {
        if (k != k0 && e[k] < e1) e1 = e[k];
    }

    GroundStateInfo info;
    info.twice_m0 = basis.twice_m(k0);
    info.m0 = basis.m_value(k0);
    info.e0 = e[k0];
    info.e1 = e1;
    info.gap = e1 - e[k0];
    info.sz_per_spin = info.m0 / basis.spin();
    info.parity0 = basis.parity(k0);
    info.tie = tie;
    return info;
}

MeanFieldResult hp_polarization(double lambda) {
    MeanFieldResult r;
    r.lambda_c = -1.0;
    if (lambda < r.lambda_c) {
        r.sz_per_spin_inf = 1.0 / lambda;
        r.beta_sq_per_atom = 0.5 * (1.0 + 1.0 / lambda);
    } else {
        r.sz_per_spin_inf = -1.0;
        // beta^2 requires g < 0 and is meaningful only past the transition
        r.beta_sq_per_atom = std::nullopt;
    }
    return r;
}

}  // namespace qbatt
