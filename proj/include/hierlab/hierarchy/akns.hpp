#pragma once

#include "hierlab/hierarchy/tables.hpp"

namespace hierlab::hierarchy {

// AKNS iterates and Hamiltonians:
//   alpha_{n+1} = i alpha_n' - i q gamma_n,  beta_{n+1} = -i beta_n' + i r gamma_n,
//   2 gamma_n = sum_{k=1}^{n-1} 4 alpha_k beta_{n-k} - gamma_k gamma_{n-k},
//   H_n = (1/2n) int gamma_{n+1} dx.
// gamma comes from the algebraic convolution, so gamma_n' = 2(q beta_n + r alpha_n)
// and the gradient identities dH/dq = -i beta_n, dH/dr = i alpha_n are free
// cross-checks; any failure raises RecursionInconsistency.
inline HierarchyTable akns_table(int N) {
    if (N < 1) throw std::invalid_argument("akns_table: N >= 1 required");
    const VarId q = var("q"), r = var("r");
    const DiffPoly Q = DiffPoly::variable(q), R = DiffPoly::variable(r);
    const DiffPoly I(coeff_i());

    HierarchyTable tab{Family::AKNS, N, {}};
    tab.entries.resize(static_cast<std::size_t>(N) + 2);
    tab.entries[0].alpha = DiffPoly();
    tab.entries[0].beta = DiffPoly();
    tab.entries[0].gamma = DiffPoly(1);

    for (int n = 1; n <= N + 1; ++n) {
        Entry& e = tab.entries[static_cast<std::size_t>(n)];
        const Entry& p = tab.entries[static_cast<std::size_t>(n - 1)];
        e.alpha = I * x_derivative(p.alpha) - I * Q * p.gamma;
        e.beta = -(I * x_derivative(p.beta)) + I * R * p.gamma;
        DiffPoly g;
        for (int k = 1; k <= n - 1; ++k) {
            const Entry& a = tab.entries[static_cast<std::size_t>(k)];
            const Entry& b = tab.entries[static_cast<std::size_t>(n - k)];
            g += (a.alpha * b.beta).scaled(Rational(2));
            g -= (a.gamma * b.gamma).scaled(Rational(1, 2));
        }
        e.gamma = g;
        if (x_derivative(e.gamma) != (Q * e.beta + R * e.alpha).scaled(Rational(2)))
            throw RecursionInconsistency("akns_table: gamma_" + std::to_string(n) +
                                         "' != 2(q beta + r alpha)");
    }

    for (int n = 1; n <= N; ++n) {
        Entry& e = tab.entries[static_cast<std::size_t>(n)];
        e.hamiltonian = reduce_density(tab.entries[static_cast<std::size_t>(n + 1)].gamma.scaled(
            Rational(1, 2 * n)));
        DiffPoly dq = variational_derivative(e.hamiltonian, q);
        DiffPoly dr = variational_derivative(e.hamiltonian, r);
        if (dq != -(I * e.beta) || dr != I * e.alpha)
            throw RecursionInconsistency("akns_table: gradient identity fails at H_" +
                                         std::to_string(n));
        e.gradients = {dq, dr};
        e.vector_field = {e.alpha, e.beta};
    }
    return tab;
}

// Swap q <-> qbar and conjugate all coefficients; the NLS reality check is
// invariance of a density under this involution (mod total derivatives).
inline DiffPoly conjugate_involution(const DiffPoly& p, VarId a, VarId b) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        Monomial mm;
        for (auto f : m) {
            if (f.var == a)
                f.var = b;
            else if (f.var == b)
                f.var = a;
            mm.push_back(f);
        }
        std::sort(mm.begin(), mm.end(), [](const VarFactor& x, const VarFactor& y) {
            return std::tie(x.var, x.order) < std::tie(y.var, y.order);
        });
        out.add(std::move(mm), c.conj_coefficients());
    }
    return out;
}

}  // namespace hierlab::hierarchy
