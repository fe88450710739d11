#pragma once

#include "hierlab/grid.hpp"

namespace hierlab::flows {

struct PicardDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// fixed-point solve y = multiplier^{-1}(rhs(y)) in Fourier space
template <class Rhs>
GridFunction picard(const GridFunction& seed, const std::vector<cdouble>& inv_symbol, Rhs&& rhs,
                    double tol = 1e-13, int max_iter = 400) {
    GridFunction y = seed;
    for (int it = 0; it < max_iter; ++it) {
        GridFunction target = rhs(y);
        auto hat = fft(target.v);
        for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= inv_symbol[j];
        GridFunction next = y;
        next.v = ifft(std::move(hat));
        double diff = 0.0;
        for (std::size_t j = 0; j < y.n(); ++j) diff = std::max(diff, std::abs(next.v[j] - y.v[j]));
        y = std::move(next);
        if (diff < tol) return y;
    }
    throw PicardDiverged("periodic fixed point did not converge");
}

}  // namespace detail

// periodic solve of w' + 2 tau w + w^2 = u (the z = i tau Riccati equation)
inline GridFunction periodic_riccati(const GridFunction& u, double tau) {
    auto k = wavenumbers(u.n(), u.length);
    std::vector<cdouble> inv(u.n());
    for (std::size_t j = 0; j < u.n(); ++j) inv[j] = 1.0 / (cdouble(0, k[j]) + 2.0 * tau);
    GridFunction seed = GridFunction::zeros(u.geom, u.a, u.length, u.n());
    return detail::picard(seed, inv, [&u](const GridFunction& w) {
        GridFunction t = u;
        for (std::size_t j = 0; j < t.n(); ++j) t.v[j] -= w.v[j] * w.v[j];
        return t;
    });
}

// periodic solve of (-d + 2 tau + 2 w) F = f
inline GridFunction periodic_solve_left(const GridFunction& w, double tau, const GridFunction& f) {
    auto k = wavenumbers(w.n(), w.length);
    std::vector<cdouble> inv(w.n());
    for (std::size_t j = 0; j < w.n(); ++j) inv[j] = 1.0 / (2.0 * tau - cdouble(0, k[j]));
    GridFunction seed = GridFunction::zeros(w.geom, w.a, w.length, w.n());
    return detail::picard(seed, inv, [&w, &f](const GridFunction& F) {
        GridFunction t = f;
        for (std::size_t j = 0; j < t.n(); ++j) t.v[j] -= 2.0 * w.v[j] * F.v[j];
        return t;
    });
}

// beta, v and the W map on the periodic box
inline std::pair<GridFunction, GridFunction> periodic_green_and_v(const GridFunction& w,
                                                                  double tau) {
    GridFunction ones = GridFunction::zeros(w.geom, w.a, w.length, w.n());
    for (auto& z : ones.v) z = 1.0;
    GridFunction beta = periodic_solve_left(w, tau, ones);
    GridFunction v = beta;
    for (std::size_t j = 0; j < v.n(); ++j) v.v[j] = 1.0 / (2.0 * tau * beta.v[j]) - 1.0;
    return {beta, v};
}

inline GridFunction periodic_w_of_v(const GridFunction& v, double tau) {
    GridFunction logv = v;
    for (auto& z : logv.v) z = std::log(1.0 + z);
    GridFunction d = derivative(logv);
    GridFunction w = v;
    for (std::size_t j = 0; j < w.n(); ++j) w.v[j] = tau * v.v[j] - 0.5 * d.v[j];
    return w;
}

inline GridFunction periodic_miura(const GridFunction& w, double tau) {
    GridFunction u = derivative(w);
    for (std::size_t j = 0; j < w.n(); ++j) u.v[j] += 2.0 * tau * w.v[j] + w.v[j] * w.v[j];
    return u;
}

// T_{-1}^Gardner(i tau1, w, tau0) on the periodic box:
// (4 tau0^2 - 4 tau1^2)^{-1} * 1/2 int w^2 - w(i tau1)^2 dx, with w(i tau1)
// the periodic Riccati solution for u = M(tau0, w).
inline cdouble periodic_t_minus1_gardner(const GridFunction& w, double tau0, double tau1) {
    GridFunction u = periodic_miura(w, tau0);
    GridFunction wz = periodic_riccati(u, tau1);
    GridFunction diff = w;
    for (std::size_t j = 0; j < w.n(); ++j) diff.v[j] = w.v[j] * w.v[j] - wz.v[j] * wz.v[j];
    return 0.5 * integrate(diff) / (4.0 * tau0 * tau0 - 4.0 * tau1 * tau1);
}

// T_{-1}^KdV(i tau, u) = -1/2 int w(i tau)^2 on the periodic box
inline cdouble periodic_t_minus1_kdv(const GridFunction& u, double tau) {
    GridFunction wz = periodic_riccati(u, tau);
    GridFunction sq = wz;
    for (auto& z : sq.v) z = z * z;
    return -0.5 * integrate(sq);
}

// tau-flow vector field on the periodic box: dx (-d + 2 tau + 2 w)^{-1} w
inline GridFunction periodic_tau_flow_vf(const GridFunction& u, double tau) {
    GridFunction w = periodic_riccati(u, tau);
    GridFunction F = periodic_solve_left(w, tau, w);
    return derivative(F);
}

}  // namespace hierlab::flows
