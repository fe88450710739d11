#pragma once

#include "hierlab/diffpoly.hpp"

#include <random>

namespace hierlab::testing {

// Small random differential polynomials for property tests. No s-variable.
struct RandomPoly {
    std::mt19937 rng;
    std::vector<VarId> vars;
    int max_terms = 4;
    int max_factors = 3;
    int max_order = 2;
    int max_power = 2;
    bool with_params = false;

    explicit RandomPoly(unsigned seed, std::vector<VarId> vs = {var("q"), var("r")})
        : rng(seed), vars(std::move(vs)) {}

    GaussianRational coeff() {
        std::uniform_int_distribution<int> num(-4, 4), den(1, 3), im(0, 1);
        GaussianRational g{Rational(num(rng), den(rng))};
        if (im(rng)) g.im = Rational(num(rng), den(rng));
        if (g.is_zero()) g.re = 1;
        return g;
    }

    Monomial monomial() {
        std::uniform_int_distribution<int> nf(0, max_factors), vi(0, static_cast<int>(vars.size()) - 1),
            ord(0, max_order), pw(1, max_power);
        Monomial m;
        int n = nf(rng);
        for (int k = 0; k < n; ++k) m = mono_mul(m, {vars[vi(rng)], ord(rng), pw(rng)});
        return m;
    }

    DiffPoly operator()() {
        std::uniform_int_distribution<int> nt(1, max_terms), pe(0, 2);
        DiffPoly p;
        int n = nt(rng);
        for (int k = 0; k < n; ++k) {
            ParamExp e{0, 0};
            if (with_params) e[0] = pe(rng);
            p.add(monomial(), Coeff::monomial(e, coeff()));
        }
        return p;
    }
};

}  // namespace hierlab::testing
