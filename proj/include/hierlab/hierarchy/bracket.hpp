#pragma once

#include "hierlab/hierarchy/tables.hpp"

namespace hierlab::hierarchy {

enum class BracketStructure { Gardner, Magri, AknsSymplectic };

struct BracketReport {
    BracketStructure structure;
    DiffPoly bracket_density;
    bool commutes;  // true iff the density is an exact total derivative
};

// {F,G}^Gardner = int dF/du d_x dG/du;
// {F,G}^Magri   = int dF/du (-d^3 + 2(u d + d u)) dG/du.
inline BracketReport poisson_bracket(const DiffPoly& f_density, const DiffPoly& g_density,
                                     BracketStructure structure, VarId v) {
    DiffPoly f = variational_derivative(f_density, v);
    DiffPoly g = variational_derivative(g_density, v);
    DiffPoly density;
    switch (structure) {
        case BracketStructure::Gardner:
            density = f * x_derivative(g);
            break;
        case BracketStructure::Magri: {
            DiffPoly U = DiffPoly::variable(v);
            DiffPoly op = -x_derivative(g, 3) + (U * x_derivative(g)).scaled(Rational(2)) +
                          x_derivative(U * g).scaled(Rational(2));
            density = f * op;
            break;
        }
        case BracketStructure::AknsSymplectic:
            throw std::invalid_argument("poisson_bracket: use poisson_bracket_akns");
    }
    return {structure, density, is_total_derivative(density)};
}

// {F,G} = -i int dF/dq dG/dr - dF/dr dG/dq
inline BracketReport poisson_bracket_akns(const DiffPoly& f_density, const DiffPoly& g_density) {
    const VarId q = var("q"), r = var("r");
    DiffPoly density = variational_derivative(f_density, q) * variational_derivative(g_density, r) -
                       variational_derivative(f_density, r) * variational_derivative(g_density, q);
    density = density.scaled(-GaussianRational::i());
    return {BracketStructure::AknsSymplectic, density, is_total_derivative(density)};
}

}  // namespace hierlab::hierarchy
