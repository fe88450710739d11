#pragma once

#include "hierlab/scattering/potential.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace hierlab::scattering {

struct EigenvalueAtMinusOne : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceNotReached : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Nystrom discretization of K = (d+iz)^{-1} u (-d+iz)^{-1} with kernel
// K(x,y) = int_{max(x,y)}^b e^{iz(2t-x-y)} u(t) dt = e^{iz|x-y|} g~(max(x,y)),
// where g~(x) = e^{-2izx} int_x^b e^{2izt} u(t) dt obeys the stable backward
// recurrence g~_i = e^{2izh} g~_{i+1} + h/2 (u_i + e^{2izh} u_{i+1}).
inline Eigen::MatrixXcd kernel_matrix(const GridFunction& u, cdouble z, cdouble* trace_out) {
    const auto n = static_cast<Eigen::Index>(u.n());
    const double h = u.dx();
    const cdouble c = cdouble(0, 2.0) * z;
    const cdouble ez = std::exp(c * h);
    // product integration: the exponential factor is integrated exactly
    // against piecewise-linear u, so the panel weights are the moments
    // m0 = (e^{ch}-1)/c, m1 = (h e^{ch} - m0)/c.
    const cdouble m0 = (ez - 1.0) / c;
    const cdouble m1 = (h * ez - m0) / c;
    const cdouble wa = m0 - m1 / h, wb = m1 / h;
    std::vector<cdouble> g(u.n(), cdouble(0.0));
    for (Eigen::Index i = n - 2; i >= 0; --i) {
        auto ii = static_cast<std::size_t>(i);
        g[ii] = ez * g[ii + 1] + wa * u.v[ii] + wb * u.v[ii + 1];
    }
    Eigen::MatrixXcd M(n, n);
    std::vector<cdouble> eabs(u.n());  // e^{iz h k}
    eabs[0] = 1.0;
    const cdouble e1 = std::exp(cdouble(0, 1.0) * z * h);
    for (std::size_t k = 1; k < u.n(); ++k) eabs[k] = eabs[k - 1] * e1;
    cdouble tr(0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            auto mx = static_cast<std::size_t>(std::max(i, j));
            double wj = (j == 0 || j == n - 1) ? 0.5 * h : h;
            M(i, j) = eabs[static_cast<std::size_t>(std::abs(i - j))] * g[mx] * wj;
        }
        tr += M(i, i);
    }
    if (trace_out) *trace_out = tr;
    return M;
}

inline cdouble log_det2_lu(const GridFunction& u, cdouble z) {
    cdouble tr;
    Eigen::MatrixXcd M = kernel_matrix(u, z, &tr);
    M += Eigen::MatrixXcd::Identity(M.rows(), M.cols());
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(std::move(M));
    cdouble logdet(0.0);
    for (Eigen::Index i = 0; i < lu.rows(); ++i) {
        cdouble d = lu.matrixLU()(i, i);
        if (std::abs(d) < 1e-13) throw EigenvalueAtMinusOne("det2: 1+K numerically singular");
        if (std::abs(std::arg(d)) > 2.5)
            throw ConvergenceNotReached("det2: LU factor leaves the principal branch");
        logdet += std::log(d);
    }
    int sign = static_cast<int>(lu.permutationP().determinant());
    if (sign < 0) logdet += cdouble(0.0, 3.14159265358979323846);
    return logdet - tr;
}

}  // namespace detail

// sum over matrix eigenvalues of log(1+lambda) - lambda (reference route for
// small grids; identical to the LU value)
inline cdouble log_det2_eigenvalues(const GridFunction& u, cdouble z) {
    cdouble tr;
    Eigen::MatrixXcd M = detail::kernel_matrix(u, z, &tr);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    std::vector<cdouble> ev(es.eigenvalues().data(), es.eigenvalues().data() + M.rows());
    std::sort(ev.begin(), ev.end(), [](cdouble a, cdouble b) { return std::abs(a) > std::abs(b); });
    cdouble acc(0.0);
    for (cdouble l : ev) {
        if (std::abs(l + 1.0) < 1e-12) throw EigenvalueAtMinusOne("det2: eigenvalue at -1");
        acc += std::log(1.0 + l) - l;
    }
    return acc;
}

inline cdouble trace_K(const GridFunction& u, cdouble z) {
    cdouble tr;
    detail::kernel_matrix(u, z, &tr);
    return tr;
}

struct Det2Result {
    cdouble value;          // i z log det2(1+K), Richardson-extrapolated
    cdouble coarse, fine;   // the two grid levels
    double refinement_gap;  // |fine - coarse|
};

// i z log det2(1 + (d+iz)^{-1} u (-d+iz)^{-1}) with one Richardson step in h^2.
// Note the kernel sign convention: this equals -T_{-1}(z, u) (= i z log T_r^{-1});
// t_minus1_det2 below returns the T_{-1} normalization.
inline Det2Result iz_log_det2(const Potential& pot, cdouble z, std::size_t grid_n = 2048) {
    GridFunction uf = pot.discretize(grid_n);
    GridFunction uc = pot.discretize(grid_n / 2 + 1);  // same endpoints
    cdouble fine = cdouble(0, 1.0) * z * detail::log_det2_lu(uf, z);
    cdouble coarse = cdouble(0, 1.0) * z * detail::log_det2_lu(uc, z);
    cdouble rich = (4.0 * fine - coarse) / 3.0;
    double gap = std::abs(fine - coarse);
    if (gap > 1e-3 * (1.0 + std::abs(fine)))
        throw ConvergenceNotReached("det2: refinement gap " + std::to_string(gap));
    return {rich, coarse, fine, gap};
}

inline cdouble t_minus1_det2(const Potential& pot, cdouble z, std::size_t grid_n = 2048) {
    return -iz_log_det2(pot, z, grid_n).value;
}

}  // namespace hierlab::scattering
