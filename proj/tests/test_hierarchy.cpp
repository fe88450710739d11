#include "hierlab/hierarchy/akns.hpp"
#include "hierlab/hierarchy/bracket.hpp"
#include "hierlab/hierarchy/gardner.hpp"
#include "hierlab/hierarchy/goodvar.hpp"
#include "hierlab/hierarchy/lenard.hpp"

#include "support/poly_parse.hpp"

#include <catch_amalgamated.hpp>

using namespace hierlab;
using namespace hierlab::hierarchy;
using hierlab::testing::P;

namespace {
const HierarchyTable& akns7() {
    static HierarchyTable t = akns_table(7);
    return t;
}
const HierarchyTable& lenard4() {
    static HierarchyTable t = lenard_sequence(4);
    return t;
}
const HierarchyTable& gardner4() {
    static HierarchyTable t = gardner_hamiltonians(4, lenard4());
    return t;
}

DiffPoly subst(const DiffPoly& p, const std::string& var_from, const DiffPoly& to) {
    return substitute(p, {{var(var_from), to}});
}
}  // namespace

// ---------------------------------------------------------------- AKNS

TEST_CASE("akns: appendix iterates n <= 6 regenerate exactly") {
    const auto& t = akns7();
    CHECK(t.at(0).alpha == P("0"));
    CHECK(t.at(0).beta == P("0"));
    CHECK(t.at(0).gamma == P("1"));
    CHECK(t.at(1).alpha == P("0-i*q"));
    CHECK(t.at(1).beta == P("i*r"));
    CHECK(t.at(1).gamma == P("0"));
    CHECK(t.at(2).alpha == P("q'"));
    CHECK(t.at(2).beta == P("r'"));
    CHECK(t.at(2).gamma == P("2*q*r"));
    CHECK(t.at(3).alpha == P("i*q'' - 2*i*q^2*r"));
    CHECK(t.at(3).beta == P("0 - i*r'' + 2*i*r^2*q"));
    CHECK(t.at(3).gamma == P("0 - 2*i*(q*r' - q'*r)"));
    CHECK(t.at(4).alpha == P("0 - q''' + 6*q*q'*r"));
    CHECK(t.at(4).beta == P("0 - r''' + 6*r*r'*q"));
    CHECK(t.at(4).gamma == P("0 - 2*(q*r'' + r*q'' - q'*r') + 6*q^2*r^2"));
    CHECK(t.at(5).alpha ==
          P("0 - i*(q'''' - 8*q*q''*r - 6*q'^2*r - 4*q*q'*r' - 2*q^2*r'' + 6*q^3*r^2)"));
    CHECK(t.at(5).beta ==
          P("i*(r'''' - 8*r*r''*q - 6*r'^2*q - 4*r*r'*q' - 2*r^2*q'' + 6*r^3*q^2)"));
    CHECK(t.at(5).gamma ==
          P("0 - 2*i*(q'''*r - r'''*q - q''*r' + r''*q' + 6*(0-q*q'*r^2 + r*r'*q^2))"));
    CHECK(t.at(6).gamma ==
          P("2*(q*r'''' + r*q'''' - (q'*r''' + q'''*r') + q''*r'') - 10*(q'^2*r^2 + q^2*r'^2)"
            "- 20*(q^2*r*r'' + r^2*q*q'') + 20*q^3*r^3"));
}

TEST_CASE("akns: appendix Hamiltonians regenerate mod total derivatives") {
    const auto& t = akns7();
    CHECK(equal_mod_total_derivative(t.at(1).hamiltonian, P("q*r")));
    CHECK(equal_mod_total_derivative(t.at(2).hamiltonian, P("0 - i*q*r'")));
    CHECK(equal_mod_total_derivative(t.at(3).hamiltonian, P("q'*r' + q^2*r^2")));
    CHECK(equal_mod_total_derivative(t.at(4).hamiltonian,
                                     P("0 - i*(q'*r'' + 3*q^2*r*r')")));
    CHECK(equal_mod_total_derivative(
        t.at(5).hamiltonian, P("q''*r'' + 6*q*q'*r*r' + (q'*r + q*r')^2 + 2*q^3*r^3")));
}

TEST_CASE("akns: gamma consistency and gradient identities up to n = 12") {
    // construction re-checks gamma_n' = 2(q beta_n + r alpha_n) for n <= 12 and
    // dH/dq = -i beta_n, dH/dr = i alpha_n for n <= 11
    CHECK_NOTHROW(akns_table(11));
}

TEST_CASE("akns: vector field is the Poisson field (alpha_N, beta_N)") {
    const auto& t = akns7();
    CHECK(t.at(4).vector_field[0] == P("0 - q''' + 6*q*q'*r"));
    // {q, H_N} = -i dH_N/dr must equal alpha_N
    DiffPoly lhs = variational_derivative(t.at(4).hamiltonian, var("r")).scaled(
        -GaussianRational::i());
    CHECK(lhs == t.at(4).alpha);
}

// ---------------------------------------------------------------- Lenard / KdV

TEST_CASE("lenard: seed and first gradients") {
    const auto& t = lenard4();
    CHECK(t.at(0).gradients[0] == P("u"));
    CHECK(t.at(1).gradients[0] == P("0 - u'' + 3*u^2"));
    CHECK(t.at(2).gradients[0] == P("u'''' - 10*u*u'' - 5*u'^2 + 10*u^3"));
}

TEST_CASE("lenard: H1 and H2 match the recursion-adjudicated densities") {
    const auto& t = lenard4();
    CHECK(equal_mod_total_derivative(t.at(1).hamiltonian, P("1/2*(u'^2 + 2*u^3)")));
    // eq 5u^4 convention; the 6u^4 variant printed elsewhere fails this check
    CHECK(equal_mod_total_derivative(t.at(2).hamiltonian,
                                     P("1/2*(u''^2 + 10*u*u'^2 + 5*u^4)")));
    CHECK_FALSE(equal_mod_total_derivative(t.at(2).hamiltonian,
                                           P("1/2*(u''^2 + 10*u*u'^2 + 6*u^4)")));
}

TEST_CASE("lenard: KdV vector field at N=1") {
    CHECK(lenard4().at(1).vector_field[0] == P("0 - u''' + 6*u*u'"));
}

TEST_CASE("lenard: leading coefficients follow the binomial formula") {
    // checked during construction; repeat explicitly for N=4
    const auto& g4 = lenard4().at(4).gradients[0];
    DiffPoly top;
    for (const auto& [m, c] : g4.terms())
        if (grading(m).homogeneity == 5) top.add(m, c);
    CHECK(top == P("126*u^5"));  // (1/2) C(10,5)
    DiffPoly lin;
    for (const auto& [m, c] : g4.terms())
        if (grading(m).homogeneity == 1) lin.add(m, c);
    CHECK(lin == P("u''''''''"));
}

TEST_CASE("kdv: complex KdV embedding H_n = 1/2 H_{2n+3}^AKNS(u, 1)") {
    static HierarchyTable t9 = akns_table(9);
    const std::map<VarId, DiffPoly> repl{{var("q"), P("u")}, {var("r"), P("1")}};
    for (int n = 0; n <= 3; ++n) {
        DiffPoly rhs = substitute(t9.at(2 * n + 3).hamiltonian, repl).scaled(Rational(1, 2));
        CHECK(equal_mod_total_derivative(lenard4().at(n).hamiltonian, rhs));
    }
}

TEST_CASE("kdv: beta recursion of the complex KdV embedding (derivative form)") {
    // beta_{2n-1}''' - 4 u beta_{2n-1}' - 2 u' beta_{2n-1} = -beta_{2n+1}'
    // (the printed identity misses the prime; n=1 fixes it: lhs = -2iu')
    const auto& t = akns7();
    const std::map<VarId, DiffPoly> repl{{var("q"), P("u")}, {var("r"), P("1")}};
    for (int n = 1; n <= 3; ++n) {
        DiffPoly b = substitute(t.at(2 * n - 1).beta, repl);
        DiffPoly bnext = substitute(t.at(2 * n + 1).beta, repl);
        DiffPoly lhs = x_derivative(b, 3) - (P("u") * x_derivative(b)).scaled(Rational(4)) -
                       (P("u'") * b).scaled(Rational(2));
        CHECK(lhs == -x_derivative(bnext));
    }
}

// ---------------------------------------------------------------- NLS / mKdV reductions

TEST_CASE("nls: appendix entries under r = qbar") {
    const auto& t = akns7();
    const std::map<VarId, DiffPoly> repl{{var("r"), P("qbar")}};
    auto sub = [&](const DiffPoly& p) { return substitute(p, repl); };
    CHECK(sub(t.at(3).gamma) == P("0 - 2*i*(q*qbar' - q'*qbar)"));  // 4 Im(q qbar')
    CHECK(sub(t.at(5).alpha) ==
          P("0 - i*(q'''' - 8*q*qbar*q'' - 6*q'^2*qbar - 4*q*q'*qbar' - 2*q^2*qbar''"
            "+ 6*q^2*qbar^2*q)"));
    CHECK(equal_mod_total_derivative(sub(t.at(3).hamiltonian), P("q'*qbar' + q^2*qbar^2")));
    CHECK(equal_mod_total_derivative(
        sub(t.at(4).hamiltonian),
        P("0 - 1/2*i*((q'*qbar'' - qbar'*q'') + 3*(q*qbar*q*qbar' - q*qbar*qbar*q'))")));
}

TEST_CASE("nls: reality as invariance under the conjugation involution") {
    const auto& t = akns7();
    const std::map<VarId, DiffPoly> repl{{var("r"), P("qbar")}};
    for (int n = 1; n <= 5; ++n) {
        DiffPoly h = substitute(t.at(n).hamiltonian, repl);
        DiffPoly hbar = conjugate_involution(h, var("q"), var("qbar"));
        CHECK(equal_mod_total_derivative(h, hbar));
    }
}

TEST_CASE("mkdv: appendix real-mKdV entries under r = q") {
    const auto& t = akns7();
    const std::map<VarId, DiffPoly> repl{{var("r"), P("q")}};
    auto sub = [&](const DiffPoly& p) { return substitute(p, repl); };
    CHECK(sub(t.at(3).gamma) == P("0"));
    CHECK(sub(t.at(5).alpha) == P("0 - i*(q'''' - 10*q^2*q'' - 10*q'^2*q + 6*q^5)"));
    CHECK(equal_mod_total_derivative(sub(t.at(1).hamiltonian), P("q^2")));
    CHECK(equal_mod_total_derivative(sub(t.at(2).hamiltonian), P("0")));
    CHECK(equal_mod_total_derivative(sub(t.at(3).hamiltonian), P("q'^2 + q^4")));
    CHECK(equal_mod_total_derivative(sub(t.at(4).hamiltonian), P("0")));
    CHECK(equal_mod_total_derivative(sub(t.at(5).hamiltonian),
                                     P("q''^2 + 10*q^2*q'^2 + 2*q^6")));
}

TEST_CASE("mkdv: table H_n = 1/2 H_{2n+1}^AKNS(v,v) with leading coefficients") {
    static HierarchyTable mk = mkdv_hamiltonians(2, akns_table(5));
    CHECK(equal_mod_total_derivative(mk.at(1).hamiltonian, P("1/2*(v'^2 + v^4)")));
    CHECK(equal_mod_total_derivative(mk.at(2).hamiltonian,
                                     P("1/2*(v''^2 + 10*v^2*v'^2 + 2*v^6)")));
    // third route: H_n^mKdV(v) = H_{n-1}^KdV(v_x + v^2)
    for (int n = 1; n <= 2; ++n) {
        DiffPoly rhs = subst(lenard4().at(n - 1).hamiltonian, "u", P("v' + v^2"));
        CHECK(equal_mod_total_derivative(mk.at(n).hamiltonian, rhs));
    }
}

// ---------------------------------------------------------------- Gardner

TEST_CASE("gardner: main-text Hamiltonians (misprint-corrected H2)") {
    const auto& t = gardner4();
    CHECK(t.at(0).hamiltonian == P("1/2*w^2"));
    CHECK(equal_mod_total_derivative(t.at(1).hamiltonian,
                                     P("1/2*(w'^2 + w^4 + 4*tau*w^3)")));
    // the paper prints 24 tau^2 w^4; the recursion gives 20 (see README conventions)
    CHECK(equal_mod_total_derivative(
        t.at(2).hamiltonian,
        P("1/2*(w''^2 + 10*w^2*w'^2 + 2*w^6 + 4*tau*(5*w*w'^2 + 3*w^5) + 20*tau^2*w^4)")));
    CHECK_FALSE(equal_mod_total_derivative(
        t.at(2).hamiltonian,
        P("1/2*(w''^2 + 10*w^2*w'^2 + 2*w^6 + 4*tau*(5*w*w'^2 + 3*w^5) + 24*tau^2*w^4)")));
}

TEST_CASE("gardner: appendix Wadati recursion H_n = 1/2 H_{2n+1}^W - 4 tau^2 H_{n-1}") {
    const auto& t = gardner4();
    const std::map<VarId, DiffPoly> repl{{var("q"), P("w")}, {var("r"), P("w + 2*tau")}};
    for (int n = 1; n <= 3; ++n) {
        DiffPoly wadati = substitute(akns7().at(2 * n + 1).hamiltonian, repl);
        DiffPoly rhs = wadati.scaled(Rational(1, 2)) -
                       t.at(n - 1).hamiltonian.scaled(coeff_tau(2, GaussianRational(Rational(4))));
        CHECK(equal_mod_total_derivative(t.at(n).hamiltonian, rhs));
    }
}

TEST_CASE("gardner: appendix Wadati iterates under q = w, r = w + 2 tau") {
    const auto& t = akns7();
    const std::map<VarId, DiffPoly> repl{{var("q"), P("w")}, {var("r"), P("w + 2*tau")}};
    auto sub = [&](const DiffPoly& p) { return substitute(p, repl); };
    CHECK(sub(t.at(3).gamma) == P("4*i*tau*w'"));
    CHECK(sub(t.at(4).alpha) == P("0 - w''' + 6*w^2*w' + 12*tau*w*w'"));
    CHECK(sub(t.at(5).gamma) ==
          P("0 - 2*i*(2*tau*w''' + 6*(0 - w*w'*(w + 2*tau)^2 + (w + 2*tau)*w'*w^2))"));
    // H_3^W = int (w')^2 + w^2 (w+2tau)^2 (the printed extra w^4 is a misprint)
    CHECK(equal_mod_total_derivative(sub(t.at(3).hamiltonian),
                                     P("w'^2 + w^2*(w + 2*tau)^2")));
}

TEST_CASE("gardner: KdV limit by graded selection matches Lenard for N <= 3") {
    for (int N = 0; N <= 3; ++N) CHECK_NOTHROW(kdv_from_gardner_limit(gardner4(), N, lenard4()));
}

TEST_CASE("gardner: vector field at N=1") {
    CHECK(gardner4().at(1).gradients[0] == P("0 - w'' + 2*w^3 + 6*tau*w^2"));
    CHECK(gardner4().at(1).vector_field[0] ==
          x_derivative(P("0 - w'' + 2*w^3 + 6*tau*w^2")));
}

TEST_CASE("gardner: fluxes for N <= 3") {
    // Fl_0: d(w^2)/dt = d_x(w^2) under w_t = w_x
    DiffPoly fl0 = gardner_flux(gardner4(), 0);
    CHECK(fl0 == P("w^2"));
    DiffPoly fl1 = gardner_flux(gardner4(), 1);
    CHECK(fl1 == P("0 - 2*w*w'' + w'^2 + 3*w^4 + 8*tau*w^3"));
    CHECK(x_derivative(fl1) ==
          (P("w") * gardner4().at(1).vector_field[0]).scaled(Rational(2)));
    for (int N = 2; N <= 3; ++N) {
        DiffPoly fl = gardner_flux(gardner4(), N);
        CHECK(x_derivative(fl) ==
              (P("w") * gardner4().at(N).vector_field[0]).scaled(Rational(2)));
    }
}

// ---------------------------------------------------------------- Poisson brackets

TEST_CASE("brackets: KdV Hamiltonians commute under Gardner and Magri, n,m <= 4") {
    const auto& t = lenard4();
    for (int n = 0; n <= 4; ++n)
        for (int m = n; m <= 4; ++m) {
            auto g = poisson_bracket(t.at(n).hamiltonian, t.at(m).hamiltonian,
                                     BracketStructure::Gardner, var("u"));
            CHECK(g.commutes);
            auto mg = poisson_bracket(t.at(n).hamiltonian, t.at(m).hamiltonian,
                                      BracketStructure::Magri, var("u"));
            CHECK(mg.commutes);
        }
}

TEST_CASE("brackets: Gardner Hamiltonians commute under the Gardner bracket, n,m <= 3") {
    const auto& t = gardner4();
    for (int n = 0; n <= 3; ++n)
        for (int m = n; m <= 3; ++m) {
            auto rep = poisson_bracket(t.at(n).hamiltonian, t.at(m).hamiltonian,
                                       BracketStructure::Gardner, var("w"));
            CHECK(rep.commutes);
        }
}

TEST_CASE("brackets: diagonal {H, H} density is an exact derivative") {
    auto rep = poisson_bracket(lenard4().at(1).hamiltonian, lenard4().at(1).hamiltonian,
                               BracketStructure::Gardner, var("u"));
    CHECK(rep.commutes);
    // density = dH d(dH) = 1/2 d((dH)^2)
    DiffPoly g = lenard4().at(1).gradients[0];
    CHECK(rep.bracket_density == x_derivative(g * g).scaled(Rational(1, 2)));
}

TEST_CASE("brackets: Magri bracket pulled back by the Miura map") {
    // {F(M(w)), G(M(w))}^Gardner_w = [{F,G}^Magri + (2iz)^2 {F,G}^Gardner]|_{u=M(w)}
    // with z = i tau, (2iz)^2 = -4 tau^2
    const auto& t = lenard4();
    DiffPoly M = miura_image();
    for (auto [fn, gn] : {std::pair{0, 1}, {1, 2}, {0, 2}}) {
        DiffPoly f_w = subst(t.at(fn).hamiltonian, "u", M);
        DiffPoly g_w = subst(t.at(gn).hamiltonian, "u", M);
        auto lhs = poisson_bracket(f_w, g_w, BracketStructure::Gardner, var("w"));
        DiffPoly magri = poisson_bracket(t.at(fn).hamiltonian, t.at(gn).hamiltonian,
                                         BracketStructure::Magri, var("u"))
                             .bracket_density;
        DiffPoly gard = poisson_bracket(t.at(fn).hamiltonian, t.at(gn).hamiltonian,
                                        BracketStructure::Gardner, var("u"))
                            .bracket_density;
        DiffPoly rhs = subst(magri, "u", M) -
                       subst(gard, "u", M).scaled(coeff_tau(2, GaussianRational(Rational(4))));
        CHECK(equal_mod_total_derivative(lhs.bracket_density, rhs));
    }
}

TEST_CASE("brackets: AKNS symplectic commutation of H_n, H_m") {
    const auto& t = akns7();
    for (int n = 1; n <= 4; ++n)
        for (int m = n; m <= 4; ++m)
            CHECK(poisson_bracket_akns(t.at(n).hamiltonian, t.at(m).hamiltonian).commutes);
}

// ---------------------------------------------------------------- good variables

TEST_CASE("goodvar: N = 0 is the translation flow") {
    CHECK(good_variable_equation(0, lenard4()) == P("v"));
}

TEST_CASE("goodvar: N = 1 matches the displayed equation") {
    DiffPoly f1 = good_variable_equation(1, lenard4());
    DiffPoly expect = canonicalize_vs(
        P("0 - v'' + 3/2*s*v'^2 + 2*tau^2*v^3 + 6*tau^2*v^2"));
    CHECK(f1 == expect);
}

TEST_CASE("goodvar: N = 2 contains the (v+1)^-3 quartic term; tau^0 groups match the display") {
    DiffPoly f2 = good_variable_equation(2, lenard4());
    // -45/8 s^3 v_x^4 present
    Monomial m = mono({{s_var(), 0, 3}, {var("v"), 1, 4}});
    auto it = f2.terms().find(m);
    REQUIRE(it != f2.terms().end());
    CHECK(it->second == Coeff(GaussianRational(Rational(-45, 8))));
    // tau^0 part of the display: v'''' + s(-5/2 v''^2 - 5 v''' v') + 25/2 s^2 v'' v'^2 - 45/8 s^3 v'^4
    DiffPoly tau0;
    for (const auto& [mm, c] : f2.terms()) {
        auto e = c.terms().find(kNoParams);
        if (e != c.terms().end()) tau0.add(mm, Coeff(e->second));
    }
    DiffPoly expect = canonicalize_vs(P(
        "v'''' + s*(0 - 5/2*v''^2 - 5*v'''*v') + 25/2*s^2*v''*v'^2 - 45/8*s^3*v'^4"));
    CHECK(tau0 == expect);
}

TEST_CASE("goodvar: W-map intertwining with the Gardner flow (symbolic, N <= 2)") {
    // if v_t = dx F_N and w = tau v - 1/2 dx log(1+v) then w_t must equal the
    // N-th Gardner vector field at w; expand w_t = tau v_t - 1/2 dx(s v_t).
    const VarId v = var("v"), s = s_var(), w = var("w");
    for (int N = 1; N <= 2; ++N) {
        DiffPoly F = good_variable_equation(N, lenard4());
        DiffPoly vt = x_derivative(F);
        DiffPoly wt = vt.scaled(coeff_tau(1)) -
                      x_derivative(DiffPoly::variable(s) * vt).scaled(Rational(1, 2));
        // w(v) = tau v - 1/2 s v'
        DiffPoly w_of_v = DiffPoly::variable(v).scaled(coeff_tau(1)) -
                          DiffPoly::term(mono({{s, 0, 1}, {v, 1, 1}}), Coeff(GaussianRational(Rational(1, 2))));
        DiffPoly rhs = substitute(gardner4().at(N).vector_field[0], {{w, w_of_v}});
        CHECK(canonicalize_vs(wt - rhs) == P("0"));
    }
}

TEST_CASE("goodvar: pulled normal form for N = 2") {
    DiffPoly f2 = good_variable_equation(2, lenard4());
    auto levels = pull_derivatives(f2, 2);
    CHECK(levels.size() <= 2);  // j <= N-1
    DiffPoly back;
    for (std::size_t j = 0; j < levels.size(); ++j) back += x_derivative(levels[j], static_cast<int>(j));
    CHECK(back == f2);
    for (std::size_t j = 0; j < levels.size(); ++j)
        for (const auto& [m, c] : levels[j].terms()) {
            Grading g = grading(m);
            if (g.homogeneity + g.s_power <= 1) continue;
            for (const auto& f : m) CHECK(f.order <= 2);
        }
}
