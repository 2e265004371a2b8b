#include "qbatt/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qbatt {

DickeBasis::DickeBasis(int n) : n_atoms(n), dim(n + 1) {
    if (n < 1) {
        throw std::invalid_argument("DickeBasis: n_atoms must be >= 1, got " + std::to_string(n));
    }
}

int DickeBasis::index_of(int twice_m_value) const {
    if (twice_m_value < -n_atoms || twice_m_value > n_atoms) return -1;
    if ((twice_m_value + n_atoms) % 2 != 0) return -1;
    return (twice_m_value + n_atoms) / 2;
}

CollectiveOps build_ops(const DickeBasis& basis, int max_atoms) {
    if (basis.n_atoms < 1 || basis.n_atoms > max_atoms) {
        throw std::invalid_argument("build_ops: n_atoms " + std::to_string(basis.n_atoms) +
                                    " outside [1, " + std::to_string(max_atoms) + "]");
    }
    CollectiveOps ops;
    ops.dim = basis.dim;
    const double s = basis.spin();
    ops.s_squared = s * (s + 1.0);
    ops.sz_diag.resize(ops.dim);
    ops.sx_super.resize(ops.dim - 1);
    for (int k = 0; k < ops.dim; ++k) ops.sz_diag[k] = basis.m_value(k);
    for (int k = 0; k + 1 < ops.dim; ++k) {
        const double m = basis.m_value(k);
        ops.sx_super[k] = 0.5 * std::sqrt(ops.s_squared - m * (m + 1.0));
    }
    return ops;
}

StateVector basis_state(const DickeBasis& basis, int twice_m_value) {
    const int idx = basis.index_of(twice_m_value);
    if (idx < 0) {
        throw std::domain_error("basis_state: 2m = " + std::to_string(twice_m_value) +
                                " not in the S = N/2 sector for N = " +
                                std::to_string(basis.n_atoms));
    }
    StateVector psi;
    psi.n_atoms = basis.n_atoms;
    psi.amplitudes.assign(basis.dim, cplx(0.0, 0.0));
    psi.amplitudes[idx] = 1.0;
    return psi;
}

static void check_dims(int a, int b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch, " +
                                    std::to_string(a) + " vs " + std::to_string(b));
    }
}

void apply_sx(const CollectiveOps& ops, std::span<const cplx> in, std::span<cplx> out) {
    check_dims((int)in.size(), ops.dim, "apply_sx");
    check_dims((int)out.size(), ops.dim, "apply_sx");
    const int n = ops.dim;
    for (int k = 0; k < n; ++k) {
        cplx v(0.0, 0.0);
        if (k > 0) v += ops.sx_super[k - 1] * in[k - 1];
        if (k + 1 < n) v += ops.sx_super[k] * in[k + 1];
        out[k] = v;
    }
}

void apply_sy(const CollectiveOps& ops, std::span<const cplx> in, std::span<cplx> out) {
    check_dims((int)in.size(), ops.dim, "apply_sy");
    check_dims((int)out.size(), ops.dim, "apply_sy");
    const int n = ops.dim;
    const cplx i_unit(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        cplx v(0.0, 0.0);
        if (k > 0) v -= i_unit * (ops.sx_super[k - 1] * in[k - 1]);
        if (k + 1 < n) v += i_unit * (ops.sx_super[k] * in[k + 1]);
        out[k] = v;
    }
}

void apply_sz(const CollectiveOps& ops, std::span<const cplx> in, std::span<cplx> out) {
    check_dims((int)in.size(), ops.dim, "apply_sz");
    check_dims((int)out.size(), ops.dim, "apply_sz");
    for (int k = 0; k < ops.dim; ++k) out[k] = ops.sz_diag[k] * in[k];
}

double norm_sq(const StateVector& psi) {
    double s = 0.0;
    for (const cplx& a : psi.amplitudes) s += std::norm(a);
    return s;
}

double expectation(const CollectiveOps& ops, SpinAxis axis, const StateVector& psi) {
    check_dims(psi.dim(), ops.dim, "expectation");
    std::vector<cplx> tmp(ops.dim);
    switch (axis) {
        case SpinAxis::x: apply_sx(ops, psi.amplitudes, tmp); break;
        case SpinAxis::y: apply_sy(ops, psi.amplitudes, tmp); break;
        case SpinAxis::z: apply_sz(ops, psi.amplitudes, tmp); break;
    }
    cplx acc(0.0, 0.0);
    double n2 = 0.0;
    for (int k = 0; k < ops.dim; ++k) {
        acc += std::conj(psi.amplitudes[k]) * tmp[k];
        n2 += std::norm(psi.amplitudes[k]);
    }
    if (n2 == 0.0) throw std::invalid_argument("expectation: zero state");
    const double scale = std::abs(acc.real()) + 1.0;
    if (std::abs(acc.imag()) > 1e-12 * scale * n2) {
        throw std::runtime_error("expectation: imaginary residue above 1e-12");
    }
    return acc.real() / n2;
}

double expectation_diag(std::span<const double> diag, const StateVector& psi) {
    check_dims((int)diag.size(), psi.dim(), "expectation_diag");
    double acc = 0.0, n2 = 0.0;
    for (int k = 0; k < psi.dim(); ++k) {
        const double w = std::norm(psi.amplitudes[k]);
        acc += diag[k] * w;
        n2 += w;
    }
    if (n2 == 0.0) throw std::invalid_argument("expectation_diag: zero state");
    return acc / n2;
}

double casimir_expectation(const CollectiveOps& ops, const StateVector& psi) {
    check_dims(psi.dim(), ops.dim, "casimir_expectation");
    std::vector<cplx> tmp(ops.dim);
    double acc = 0.0;
    apply_sx(ops, psi.amplitudes, tmp);
    for (const cplx& v : tmp) acc += std::norm(v);
    apply_sy(ops, psi.amplitudes, tmp);
    for (const cplx& v : tmp) acc += std::norm(v);
    apply_sz(ops, psi.amplitudes, tmp);
    for (const cplx& v : tmp) acc += std::norm(v);
    return acc / norm_sq(psi);
}

double su2_commutator_residual(const CollectiveOps& ops) {
    // [Sx,Sy] is diagonal with entries 2i(b_{k-1}^2 - b_k^2); the (k,k+-2)
    // entries cancel exactly.  Compare against i m_k, relative to the size of
    // the cancelling terms (b^2 grows like S^2, so an absolute bound would
    // not survive rounding at large N).
    double worst = 0.0;
    for (int k = 0; k < ops.dim; ++k) {
        const double bl = (k > 0) ? ops.sx_super[k - 1] : 0.0;
        const double br = (k + 1 < ops.dim) ? ops.sx_super[k] : 0.0;
        const double r = std::abs(2.0 * (bl * bl - br * br) - ops.sz_diag[k]) /
                         (1.0 + 2.0 * (bl * bl + br * br));
        if (r > worst) worst = r;
    }
    // [Sy,Sz] - i Sx and [Sz,Sx] - i Sy reduce to b_k (m_{k+1} - m_k - 1) = 0
    // on the superdiagonal.
    for (int k = 0; k + 1 < ops.dim; ++k) {
        const double r = std::abs(ops.sx_super[k] * (ops.sz_diag[k + 1] - ops.sz_diag[k] - 1.0));
        if (r > worst) worst = r;
    }
    return worst;
}

}  // namespace qbatt
