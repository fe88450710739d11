#pragma once

#include "hierlab/hierarchy/tables.hpp"

namespace hierlab::hierarchy {

// (-d^3 + 4u d + 2u_x) g
inline DiffPoly lenard_operator(const DiffPoly& g, VarId u) {
    DiffPoly U = DiffPoly::variable(u);
    return -x_derivative(g, 3) + (U * x_derivative(g)).scaled(Rational(4)) +
           (x_derivative(U) * g).scaled(Rational(2));
}

// KdV hierarchy by the Lenard recursion d(dH_{N+1}/du) = (-d^3+4ud+2u_x) dH_N/du,
// seeded with dH_0/du = u; each step takes one exact formal antiderivative and
// reconstructs H_n from its gradient by the homotopy formula. Each gradient's
// leading terms are checked against (-1)^n u^{(2n)} and (1/2) C(2n+2, n+1) u^{n+1}.
inline HierarchyTable lenard_sequence(int N) {
    if (N < 0) throw std::invalid_argument("lenard_sequence: N >= 0 required");
    const VarId u = var("u");
    HierarchyTable tab{Family::KdV, N, {}};
    tab.entries.resize(static_cast<std::size_t>(N) + 1);
    tab.entries[0].gradients = {DiffPoly::variable(u)};
    tab.entries[0].hamiltonian = DiffPoly::variable(u, 0, 2).scaled(Rational(1, 2));
    tab.entries[0].vector_field = {x_derivative(tab.entries[0].gradients[0])};

    for (int n = 1; n <= N; ++n) {
        Entry& e = tab.entries[static_cast<std::size_t>(n)];
        const Entry& p = tab.entries[static_cast<std::size_t>(n - 1)];
        DiffPoly t = lenard_operator(p.gradients[0], u);
        DiffPoly g = formal_antiderivative(t);  // NotATotalDerivative = bug sentinel
        // leading linear term (-1)^n u^{(2n)}
        DiffPoly lin;
        for (const auto& [m, c] : g.terms())
            if (grading(m).homogeneity == 1) lin.add(m, c);
        DiffPoly expect_lin =
            DiffPoly::variable(u, 2 * n).scaled(Rational(n % 2 == 0 ? 1 : -1));
        if (lin != expect_lin)
            throw RecursionInconsistency("lenard_sequence: linear term of G_" + std::to_string(n));
        // top homogeneity (1/2) C(2n+2, n+1) u^{n+1}
        DiffPoly top;
        for (const auto& [m, c] : g.terms())
            if (grading(m).homogeneity == n + 1) top.add(m, c);
        DiffPoly expect_top = DiffPoly::variable(u, 0, n + 1)
                                  .scaled(binomial(2 * n + 2, n + 1) * Rational(1, 2));
        if (top != expect_top)
            throw RecursionInconsistency("lenard_sequence: top coefficient of G_" +
                                         std::to_string(n));
        e.gradients = {g};
        e.hamiltonian = reduce_density(hamiltonian_from_gradient(g, u));
        e.vector_field = {x_derivative(g)};
    }
    return tab;
}

// dH_{-1}/du for H_{-1} = 1/2 int u dx (enters the good-variable sums and the
// renormalized partial sums).
inline DiffPoly kdv_gradient_minus1() { return DiffPoly(Coeff(GaussianRational(Rational(1, 2)))); }

}  // namespace hierlab::hierarchy
