#pragma once

#include "hierlab/scattering/jost.hpp"

namespace hierlab::scattering {

// u = w_x + 2 tau w + w^2
inline GridFunction miura_forward(const GridFunction& w, double tau) {
    GridFunction u = derivative(w);
    for (std::size_t j = 0; j < w.n(); ++j) u.v[j] += 2.0 * tau * w.v[j] + w.v[j] * w.v[j];
    return u;
}

namespace detail {

inline double sup_norm(const GridFunction& f) { return f.max_abs(); }

// interior margin: the one-sided ends of the finite-difference stencil are
// excluded from residual checks (beta does not decay at the ends)
inline constexpr std::size_t kEdge = 5;

// residual of w' - 2iz w + w^2 = u
inline double riccati_residual(const GridFunction& w, cdouble z, const GridFunction& u) {
    GridFunction wx = derivative(w);
    double r = 0.0;
    cdouble two_iz = cdouble(0, 2.0) * z;
    for (std::size_t j = kEdge; j + kEdge < w.n(); ++j)
        r = std::max(r, std::abs(wx.v[j] - two_iz * w.v[j] + w.v[j] * w.v[j] - u.v[j]));
    return r;
}

}  // namespace detail

// w(z) = psi'/psi for the renormalized left Jost function; with z = i tau this
// inverts the modified Miura map (w = d/dx log phi_l - tau). The Riccati
// residual is validated against opt.residual_tol.
inline GridFunction riccati_shifted(const Potential& source, cdouble z, const JostOptions& opt = {},
                                    ScatteringRecord* rec_out = nullptr) {
    ScatteringRecord rec = jost_solutions(source, z, opt);
    const auto& psi = rec.jost_left.v;
    const auto& dpsi = rec.jost_left_2.v;
    const bool imaginary_axis = std::abs(z.real()) < 1e-14;
    GridFunction w = GridFunction::zeros(Geometry::Line, source.a, source.b - source.a, opt.grid_n);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        if (imaginary_axis ? (psi[j].real() <= 1e-12) : (std::abs(psi[j]) <= 1e-12))
            throw NotInMiuraRange("riccati_shifted: left Jost function vanishes"
                                  " (spectral positivity condition fails)");
        w.v[j] = dpsi[j] / psi[j];
    }
    double res = detail::riccati_residual(w, z, source.discretize(opt.grid_n));
    if (res > opt.residual_tol)
        throw ResidualTooLarge("riccati_shifted: Riccati residual " + std::to_string(res));
    if (rec_out) {
        rec.w_of_z = w;
        *rec_out = rec;
    }
    return w;
}

inline GridFunction miura_inverse(const Potential& u, double tau, const JostOptions& opt = {}) {
    return riccati_shifted(u, cdouble(0.0, tau), opt);
}
inline GridFunction miura_inverse(const GridFunction& u, double tau, const JostOptions& opt = {}) {
    JostOptions o = opt;
    o.grid_n = u.n();
    return riccati_shifted(Potential::from_samples(u), cdouble(0.0, tau), o);
}

namespace detail {

// F = (-d + 2 tau + 2 w)^{-1} f by backward integration of F' = 2(tau + w) F - f
// from the right end (the homogeneous mode decays leftwards); classic RK4 with
// substeps, w and f interpolated between nodes.
inline GridFunction solve_left_factor(const GridFunction& w, double tau, const GridFunction& f,
                                      int substeps = 4) {
    GridFunction F = GridFunction::zeros(w.geom, w.a, w.length, w.n());
    auto weval = [&w](double x) { return interp6(w, x); };
    auto feval = [&f](double x) { return interp6(f, x); };
    const std::size_t n = w.n();
    cdouble Fb = f.v[n - 1] / (2.0 * tau + 2.0 * w.v[n - 1]);
    F.v[n - 1] = Fb;
    const double h = -w.dx() / substeps;
    auto rhs = [&](double x, cdouble y) { return 2.0 * (tau + weval(x)) * y - feval(x); };
    cdouble y = Fb;
    for (std::size_t j = n - 1; j > 0; --j) {
        double x = w.x(j);
        for (int s = 0; s < substeps; ++s) {
            cdouble k1 = rhs(x, y);
            cdouble k2 = rhs(x + h / 2, y + (h / 2) * k1);
            cdouble k3 = rhs(x + h / 2, y + (h / 2) * k2);
            cdouble k4 = rhs(x + h, y + h * k3);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            x += h;
        }
        F.v[j - 1] = y;
    }
    return F;
}

}  // namespace detail

// beta = (-d + 2 tau + 2 w)^{-1}(1) and v = 1/(2 tau beta) - 1; validates
// -beta' + 2 tau beta + 2 w beta = 1 and 2 tau v - dx log(1+v) = 2w.
inline std::pair<GridFunction, GridFunction> diagonal_green_and_v(const GridFunction& w, double tau,
                                                                  const JostOptions& opt = {}) {
    w.require_decayed_tails(opt.tail_tol * 1e3);
    GridFunction ones = GridFunction::zeros(w.geom, w.a, w.length, w.n());
    for (auto& z : ones.v) z = 1.0;
    GridFunction beta = detail::solve_left_factor(w, tau, ones);

    GridFunction bx = derivative(beta);
    double res = 0.0;
    for (std::size_t j = detail::kEdge; j + detail::kEdge < w.n(); ++j)
        res = std::max(res, std::abs(-bx.v[j] + 2.0 * tau * beta.v[j] +
                                     2.0 * w.v[j] * beta.v[j] - 1.0));
    if (res > opt.residual_tol)
        throw ResidualTooLarge("diagonal_green_and_v: Green residual " + std::to_string(res));

    GridFunction v = beta;
    for (std::size_t j = 0; j < v.n(); ++j) {
        v.v[j] = 1.0 / (2.0 * tau * beta.v[j]) - 1.0;
        if (1.0 + v.v[j].real() <= 0.0)
            throw ResidualTooLarge("diagonal_green_and_v: 1 + v <= 0");
    }
    // residual of 2 tau v - dx log(1+v) = 2 w
    GridFunction log1v = v;
    for (auto& z : log1v.v) z = std::log(1.0 + z);
    GridFunction dlog = derivative(log1v);
    double res2 = 0.0;
    for (std::size_t j = detail::kEdge; j + detail::kEdge < w.n(); ++j)
        res2 = std::max(res2,
                        std::abs(2.0 * tau * v.v[j] - dlog.v[j] - 2.0 * w.v[j]));
    if (res2 > opt.residual_tol)
        throw ResidualTooLarge("diagonal_green_and_v: good-variable residual " +
                               std::to_string(res2));
    return {beta, v};
}

// W(tau, v) = tau v - 1/2 dx log(1+v)
inline GridFunction w_from_good_variable(const GridFunction& v, double tau) {
    GridFunction log1v = v;
    for (auto& z : log1v.v) z = std::log(1.0 + z);
    GridFunction dlog = derivative(log1v);
    GridFunction w = v;
    for (std::size_t j = 0; j < v.n(); ++j) w.v[j] = tau * v.v[j] - 0.5 * dlog.v[j];
    return w;
}

// tau-flow vector field u_t = dx (-d + 2 tau + 2 w)^{-1} w at w = miura_inverse(u)
inline GridFunction tau_flow_vf(const GridFunction& u, double tau, const JostOptions& opt = {}) {
    GridFunction w = miura_inverse(u, tau, opt);
    GridFunction F = detail::solve_left_factor(w, tau, w);
    GridFunction Fx = derivative(F);
    double res = 0.0;
    for (std::size_t j = detail::kEdge; j + detail::kEdge < w.n(); ++j)
        res = std::max(res, std::abs(-Fx.v[j] + 2.0 * tau * F.v[j] + 2.0 * w.v[j] * F.v[j] -
                                     w.v[j]));
    if (res > opt.residual_tol)
        throw ResidualTooLarge("tau_flow_vf: defining relation residual " + std::to_string(res));
    return Fx;
}

}  // namespace hierlab::scattering
