#pragma once

#include "hierlab/hierarchy/akns.hpp"
#include "hierlab/hierarchy/lenard.hpp"

namespace hierlab::hierarchy {

inline DiffPoly miura_image() {  // u = w_x + 2 tau w + w^2
    const VarId w = var("w");
    return DiffPoly::variable(w, 1) + DiffPoly::variable(w).scaled(coeff_tau(1, GaussianRational(2))) +
           DiffPoly::variable(w, 0, 2);
}

namespace detail {

inline Coeff minus4tau2_pow(int k) {
    GaussianRational c(Rational(1));
    for (int j = 0; j < k; ++j) c = c * GaussianRational(Rational(-4));
    return Coeff::monomial({2 * k, 0}, c);
}

inline void check_gardner_structure(const DiffPoly& h, int n) {
    const VarId w = var("w");
    for (const auto& [m, c] : h.terms()) {
        Grading g = grading(m);
        for (const auto& [e, gc] : c.terms()) {
            int mt = e[0];
            if (g.homogeneity == 2 && g.weight == 2 * n && mt == 0) continue;  // 1/2 |w^(n)|^2
            if (g.degree_gardner != 2 * n + 2 - mt)
                throw StructureViolation("gardner H_" + std::to_string(n) + ": degree");
            if (g.homogeneity < mt + 2)
                throw StructureViolation("gardner H_" + std::to_string(n) +
                                         ": tau-homogeneity bound");
        }
    }
    // quadratic part is exactly 1/2 (w^(n))^2
    DiffPoly quad;
    for (const auto& [m, c] : h.terms())
        if (grading(m).homogeneity == 2) quad.add(m, c);
    if (quad != DiffPoly::variable(w, n, 2).scaled(Rational(1, 2)))
        throw StructureViolation("gardner H_" + std::to_string(n) + ": quadratic part");
    // top homogeneity coefficient (inside the 1/2-convention density):
    // 1/2 * 1/(2(2n+1)) * C(2n+2, n+1) * w^{2n+2}
    if (n >= 1) {
        DiffPoly top;
        for (const auto& [m, c] : h.terms())
            if (grading(m).homogeneity == 2 * n + 2) top.add(m, c);
        DiffPoly expect = DiffPoly::variable(w, 0, 2 * n + 2)
                              .scaled(binomial(2 * n + 2, n + 1) * Rational(1, 4 * (2 * n + 1)));
        if (top != expect)
            throw StructureViolation("gardner H_" + std::to_string(n) + ": top coefficient");
    }
}

}  // namespace detail

// Gardner Hamiltonians by the closed formula
//   H_n^G(w, tau) = (-4 tau^2)^n 1/2 w^2 + sum_{m<n} (-4 tau^2)^{n-1-m} H_m^KdV(w_x+2 tau w+w^2),
// then verifies H_n^KdV(M(w)) = H_{n+1}^G + 4 tau^2 H_n^G mod d_x on the stored
// reduced densities, and the structure of the monomials.
inline HierarchyTable gardner_hamiltonians(int N, const HierarchyTable& lenard) {
    if (lenard.family != Family::KdV || lenard.order < N - 1)
        throw std::invalid_argument("gardner_hamiltonians: need lenard_sequence(N-1)");
    const VarId u = var("u"), w = var("w");
    const std::map<VarId, DiffPoly> repl{{u, miura_image()}};

    std::vector<DiffPoly> kdv_at_miura;  // H_m^KdV(M(w)), m <= N-1
    for (int m = 0; m <= N - 1; ++m)
        kdv_at_miura.push_back(substitute(lenard.at(m).hamiltonian, repl));

    HierarchyTable tab{Family::Gardner, N, {}};
    tab.entries.resize(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        DiffPoly h = DiffPoly::variable(w, 0, 2).scaled(Rational(1, 2)).scaled(detail::minus4tau2_pow(n));
        for (int m = 0; m <= n - 1; ++m)
            h += kdv_at_miura[static_cast<std::size_t>(m)].scaled(detail::minus4tau2_pow(n - 1 - m));
        Entry& e = tab.entries[static_cast<std::size_t>(n)];
        e.hamiltonian = reduce_density(h);
        detail::check_gardner_structure(e.hamiltonian, n);
        e.gradients = {variational_derivative(e.hamiltonian, w)};
        e.vector_field = {x_derivative(e.gradients[0])};
    }
    // eq. H_n^KdV(M(w)) = H_{n+1}^G + 4 tau^2 H_n^G mod d_x
    for (int n = 0; n <= N - 1; ++n) {
        DiffPoly rhs = tab.at(n + 1).hamiltonian +
                       tab.at(n).hamiltonian.scaled(coeff_tau(2, GaussianRational(Rational(4))));
        if (!equal_mod_total_derivative(kdv_at_miura[static_cast<std::size_t>(n)], rhs))
            throw RecursionInconsistency("gardner_hamiltonians: Miura identity at n=" +
                                         std::to_string(n));
    }
    return tab;
}

// Picks the monomials with w-homogeneity = tau-homogeneity + 2 and rescales:
// H_N^KdV(u) = lim 4 tau^2 H_N^G(u/(2 tau), tau). Must reproduce Lenard mod d_x.
inline DiffPoly kdv_from_gardner_limit(const HierarchyTable& gardner, int N,
                                       const HierarchyTable& lenard) {
    const VarId u = var("u");
    DiffPoly out;
    for (const auto& [m, c] : gardner.at(N).hamiltonian.terms()) {
        Grading g = grading(m);
        for (const auto& [e, gc] : c.terms()) {
            if (g.homogeneity != e[0] + 2) continue;
            Monomial mm;
            for (auto f : m) {
                f.var = u;
                mm.push_back(f);
            }
            std::sort(mm.begin(), mm.end(), [](const VarFactor& x, const VarFactor& y) {
                return std::tie(x.var, x.order) < std::tie(y.var, y.order);
            });
            // 4 tau^2 * (2 tau)^{-k} * tau^m with k = m+2: coefficient 2^{2-k}
            Rational scale = Rational(4) / boost::multiprecision::pow(
                                               boost::multiprecision::cpp_int(2), g.homogeneity);
            out.add(std::move(mm), Coeff(scale * gc));
        }
    }
    if (!equal_mod_total_derivative(out, lenard.at(N).hamiltonian))
        throw RecursionInconsistency("kdv_from_gardner_limit: mismatch with Lenard at N=" +
                                     std::to_string(N));
    return out;
}

// H_n^mKdV(v) = 1/2 H_{2n+1}^AKNS(v, v); even AKNS Hamiltonians must vanish
// under q = r = v, and the v^{2n+2} coefficient matches the closed formula.
inline HierarchyTable mkdv_hamiltonians(int N, const HierarchyTable& akns) {
    if (akns.family != Family::AKNS || akns.order < 2 * N + 1)
        throw std::invalid_argument("mkdv_hamiltonians: need akns_table(2N+1)");
    const VarId q = var("q"), r = var("r"), v = var("v");
    const std::map<VarId, DiffPoly> repl{{q, DiffPoly::variable(v)}, {r, DiffPoly::variable(v)}};

    HierarchyTable tab{Family::mKdV, N, {}};
    tab.entries.resize(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        if (n >= 1) {
            DiffPoly even = substitute(akns.at(2 * n).hamiltonian, repl);
            if (!equal_mod_total_derivative(even, DiffPoly()))
                throw RecursionInconsistency("mkdv: H_" + std::to_string(2 * n) +
                                             "^AKNS(v,v) != 0 mod d_x");
        }
        DiffPoly h = reduce_density(
            substitute(akns.at(2 * n + 1).hamiltonian, repl).scaled(Rational(1, 2)));
        Entry& e = tab.entries[static_cast<std::size_t>(n)];
        e.hamiltonian = h;
        DiffPoly top;
        for (const auto& [m, c] : h.terms())
            if (grading(m).homogeneity == 2 * n + 2) top.add(m, c);
        DiffPoly expect = DiffPoly::variable(v, 0, 2 * n + 2)
                              .scaled(binomial(2 * n + 2, n + 1) * Rational(1, 4 * (2 * n + 1)));
        if (top != expect)
            throw StructureViolation("mkdv H_" + std::to_string(n) + ": top coefficient");
        e.gradients = {variational_derivative(e.hamiltonian, v)};
        e.vector_field = {x_derivative(e.gradients[0])};
    }
    return tab;
}

// Flux of the N-th Gardner flow: d_t w^2 = d_x Fl_N with
// d_x Fl_N = 2 w d_x (dH_N/dw) exactly. The quadratic tau^0 part must be a
// combination (2N+1)(w^(N))^2 + sum_j f_j d^{2j} (w^(N-j))^2.
inline DiffPoly gardner_flux(const HierarchyTable& gardner, int N) {
    const VarId w = var("w");
    DiffPoly target = (DiffPoly::variable(w) * gardner.at(N).vector_field[0]).scaled(Rational(2));
    DiffPoly flux = formal_antiderivative(target);

    for (const auto& [m, c] : flux.terms()) {
        Grading g = grading(m);
        if (g.homogeneity < 2) throw StructureViolation("gardner_flux: homogeneity < 2");
        for (const auto& [e, gc] : c.terms())
            if (e[0] + g.degree_gardner != 2 * N + 2)
                throw StructureViolation("gardner_flux: degree of a monomial");
    }

    // quadratic tau^0 part: solve for c0, f_1..f_N exactly
    DiffPoly quad;
    for (const auto& [m, c] : flux.terms()) {
        if (grading(m).homogeneity != 2) continue;
        auto it = c.terms().find(kNoParams);
        if (it != c.terms().end()) quad.add(m, Coeff(it->second));
    }
    std::vector<DiffPoly> basis;
    basis.push_back(DiffPoly::variable(w, N, 2));
    for (int j = 1; j <= N; ++j)
        basis.push_back(x_derivative(DiffPoly::variable(w, N - j, 2), 2 * j));
    // gather monomials
    std::map<Monomial, std::size_t> rows;
    auto row_of = [&rows](const Monomial& m) {
        return rows.emplace(m, rows.size()).first->second;
    };
    for (const auto& b : basis)
        for (const auto& [m, c] : b.terms()) row_of(m);
    for (const auto& [m, c] : quad.terms()) row_of(m);
    std::size_t R = rows.size(), C = basis.size();
    std::vector<std::vector<Rational>> A(R, std::vector<Rational>(C + 1, Rational(0)));
    for (std::size_t j = 0; j < C; ++j)
        for (const auto& [m, c] : basis[j].terms())
            A[row_of(m)][j] = c.constant_part().re;
    for (const auto& [m, c] : quad.terms()) A[row_of(m)][C] = c.constant_part().re;
    // exact Gaussian elimination
    std::size_t rank = 0;
    std::vector<Rational> sol(C, Rational(0));
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < C && rank < R; ++col) {
        std::size_t p = rank;
        while (p < R && A[p][col] == 0) ++p;
        if (p == R) continue;
        std::swap(A[p], A[rank]);
        for (std::size_t i = 0; i < R; ++i) {
            if (i == rank || A[i][col] == 0) continue;
            Rational f = A[i][col] / A[rank][col];
            for (std::size_t j2 = col; j2 <= C; ++j2) A[i][j2] -= f * A[rank][j2];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t i = rank; i < R; ++i)
        if (A[i][C] != 0) throw StructureViolation("gardner_flux: quadratic part not in span");
    for (std::size_t i = 0; i < rank; ++i) sol[pivot_col[i]] = A[i][C] / A[i][pivot_col[i]];
    if (sol[0] != Rational(2 * N + 1))
        throw StructureViolation("gardner_flux: quadratic coefficient != 2N+1");
    return flux;
}

}  // namespace hierlab::hierarchy
