#pragma once

#include "hierlab/evaluate.hpp"
#include "hierlab/hierarchy/tables.hpp"
#include "hierlab/scattering/miura.hpp"

namespace hierlab::scattering {

struct BranchAmbiguity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class Real>
Cplx<Real> trapezoid_closed(const Potential& pot, std::size_t n) {
    Cplx<Real> s(0);
    Real a(pot.a), b(pot.b);
    Real h = (b - a) / Real(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        Real x = a + h * Real(j);
        Real v = pot.template deriv<Real>(x, 0);
        s += (j == 0 || j == n - 1) ? v / Real(2) : v;
    }
    return s * h;
}

// log T_r for a closed-form potential in the scalar type Real; principal
// branch (used on the imaginary axis far from the spectrum where T_r ~ 1).
template <class Real>
Cplx<Real> log_Tr_closed(const Potential& pot, Cplx<Real> z, std::size_t n, Real rel_tol,
                         Real abs_tol) {
    using std::log;
    auto xs = linspace(Real(pot.a), Real(pot.b), n);
    auto u = [&pot](Real x) { return Cplx<Real>(pot.template deriv<Real>(x, 0)); };
    auto sol = jost_schrodinger<Real>(u, z, xs, rel_tol, abs_tol);
    Cplx<Real> W = sol.wronskian();
    Cplx<Real> T = Cplx<Real>(0, -2) * z / W;
    Cplx<Real> Tr = T * exp(-trapezoid_closed<Real>(pot, 2 * n) / (Cplx<Real>(0, 2) * z));
    return log(Tr);
}

}  // namespace detail

// log T_r with the branch fixed by continuity along the vertical ray from
// large Im z (where log T_r ~ 0).
inline cdouble log_Tr_tracked(const Potential& pot, cdouble z, const JostOptions& opt = {}) {
    auto principal = [&](cdouble zz) {
        cdouble T = jost_solutions(pot, zz, opt).T_renormalized;
        return std::log(T);
    };
    cdouble l0 = principal(z);
    cdouble T0 = std::exp(l0);
    if (std::abs(T0 - 1.0) < 0.5) return l0;  // unambiguous
    // walk down the ray z * 2^k
    int K = 6;
    double prev_arg = 0.0;
    for (int k = K; k >= 1; --k) {
        cdouble lk = principal(z * std::pow(2.0, k));
        double a = lk.imag();
        double shifted = a + 2 * 3.14159265358979323846 * std::round((prev_arg - a) / (2 * 3.14159265358979323846));
        if (std::abs(shifted - prev_arg) > 2.0)
            throw BranchAmbiguity("log_Tr_tracked: branch tracking lost continuity");
        prev_arg = shifted;
    }
    double a = l0.imag();
    double shifted = a + 2 * 3.14159265358979323846 * std::round((prev_arg - a) / (2 * 3.14159265358979323846));
    return {l0.real(), shifted};
}

// T_{-1}^KdV(z, u) = i z log T_r, cross-checked against -1/2 int w(z)^2 dx.
inline cdouble t_minus1_kdv(const Potential& pot, cdouble z, const JostOptions& opt = {},
                            double cross_tol = 1e-6) {
    cdouble via_log = cdouble(0, 1.0) * z * log_Tr_tracked(pot, z, opt);
    GridFunction w = riccati_shifted(pot, z, opt);
    GridFunction w2 = w;
    for (auto& val : w2.v) val = val * val;
    cdouble via_w = -0.5 * integrate(w2);
    if (std::abs(via_log - via_w) > cross_tol)
        throw ResidualTooLarge("t_minus1_kdv: log T_r and w(z) routes disagree by " +
                               std::to_string(std::abs(via_log - via_w)));
    return via_log;
}

// T_{-1}^Gardner(z, w, tau0) = (4z^2 + 4 tau0^2)^{-1} 1/2 int w^2 - w(z)^2 dx
inline cdouble t_minus1_gardner(const GridFunction& w, double tau0, cdouble z,
                                const JostOptions& opt = {}) {
    GridFunction u = miura_forward(w, tau0);
    JostOptions o = opt;
    o.grid_n = w.n();
    GridFunction wz = riccati_shifted(Potential::from_samples(u), z, o);
    GridFunction diff = w;
    for (std::size_t j = 0; j < w.n(); ++j) diff.v[j] = w.v[j] * w.v[j] - wz.v[j] * wz.v[j];
    cdouble denom = 4.0 * z * z + 4.0 * tau0 * tau0;
    return 0.5 * integrate(diff) / denom;
}

// Evaluate a KdV density (derivative orders <= 2) for a closed-form potential
// in the scalar type Real.
template <class Real>
Real evaluate_kdv_density_closed(const DiffPoly& p, const Potential& pot, std::size_t n) {
    const VarId u = var("u");
    Real a(pot.a), b(pot.b);
    Real h = (b - a) / Real(n - 1);
    Real acc(0);
    for (std::size_t j = 0; j < n; ++j) {
        Real x = a + h * Real(j);
        Real u0 = pot.template deriv<Real>(x, 0);
        Real u1 = pot.template deriv<Real>(x, 1);
        Real u2 = pot.template deriv<Real>(x, 2);
        Real point(0);
        for (const auto& [m, c] : p.terms()) {
            GaussianRational g = c.constant_part();
            if (g.im != 0) throw std::invalid_argument("evaluate_kdv_density_closed: complex density");
            Real term(static_cast<double>(g.re));
            // exact rational -> Real conversion
            term = Real(numerator(g.re).str()) / Real(denominator(g.re).str());
            for (const auto& f : m) {
                if (f.var != u || f.order > 2)
                    throw std::invalid_argument("evaluate_kdv_density_closed: unsupported factor");
                Real base = f.order == 0 ? u0 : (f.order == 1 ? u1 : u2);
                for (int k = 0; k < f.power; ++k) term *= base;
            }
            point += term;
        }
        acc += (j == 0 || j == n - 1) ? point / Real(2) : point;
    }
    return acc * h;
}

// T_N^KdV(z, u) = (i/2)(2z)^{2N+3} log T_r - sum_{n=0}^N (2z)^{2(N-n)} H_n(u),
// computed in quad precision: the partial sums cancel catastrophically for
// large Im z, far beyond double.
inline cdouble remainder_T_N(int N, double tau, const Potential& pot,
                             const hierarchy::HierarchyTable& lenard,
                             std::size_t grid_n = 4096) {
    using C = Cplx<quad>;
    if (lenard.order < N) throw std::invalid_argument("remainder_T_N: lenard table too short");
    C z(0, tau);
    C logTr = detail::log_Tr_closed<quad>(pot, z, grid_n, quad(1e-22), quad(1e-25));
    C two_z = C(2) * z;
    auto powc = [](C base, int k) {
        C r(1);
        for (int j = 0; j < k; ++j) r *= base;
        return r;
    };
    C acc = C(0, quad(1) / quad(2)) * powc(two_z, 2 * N + 3) * logTr;
    for (int n = 0; n <= N; ++n) {
        quad Hn = evaluate_kdv_density_closed<quad>(lenard.at(n).hamiltonian, pot, grid_n);
        acc -= powc(two_z, 2 * (N - n)) * C(Hn);
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

// |(2 i tau)^2 T_{N-1}(i tau) - H_N|, the approximate-Hamiltonian probe; decays
// like tau^{-2}.
inline double remainder_probe(int N, double tau, const Potential& pot,
                              const hierarchy::HierarchyTable& lenard, std::size_t grid_n = 4096) {
    cdouble tN1 = remainder_T_N(N - 1, tau, pot, lenard, grid_n);
    double HN = static_cast<double>(
        evaluate_kdv_density_closed<quad>(lenard.at(N).hamiltonian, pot, grid_n));
    cdouble probe = -4.0 * tau * tau * tN1 - HN;
    return std::abs(probe);
}

}  // namespace hierlab::scattering
