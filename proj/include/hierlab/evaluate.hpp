#pragma once

#include "hierlab/diffpoly.hpp"
#include "hierlab/grid.hpp"

#include <array>

namespace hierlab {

struct SingularS : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature of the pointwise-evaluated density over the common grid.
// Derivatives of the fields are spectral (periodic) or 8th-order finite
// differences (line); s = (1+v)^{-1} is formed pointwise from the v field.
inline cdouble evaluate_density(const DiffPoly& p,
                                const std::map<VarId, GridFunction>& fields,
                                const std::array<cdouble, 2>& params = {cdouble(0), cdouble(0)}) {
    if (p.is_zero()) return {0.0, 0.0};
    if (fields.empty()) {
        // constants only
        cdouble acc(0.0, 0.0);
        for (const auto& [m, c] : p.terms()) {
            if (!m.empty()) throw GridMismatch("evaluate_density: no fields supplied");
            acc += c.evaluate(params);
        }
        return acc;
    }
    const GridFunction& proto = fields.begin()->second;
    for (const auto& [v, f] : fields)
        if (!f.same_grid(proto)) throw GridMismatch("evaluate_density: fields on different grids");

    const VarId s = s_var();
    std::map<std::pair<VarId, int>, GridFunction> ders;
    auto get = [&](VarId v, int order) -> const GridFunction& {
        auto key = std::make_pair(v, order);
        auto it = ders.find(key);
        if (it != ders.end()) return it->second;
        if (v == s) {
            if (order != 0) throw std::logic_error("evaluate_density: s carries no derivatives");
            auto vit = fields.find(s_companion());
            if (vit == fields.end()) throw GridMismatch("evaluate_density: s needs the v field");
            GridFunction sf = vit->second;
            bool real_field = true;
            for (const auto& z : vit->second.v)
                if (std::abs(z.imag()) > 1e-10) real_field = false;
            for (auto& z : sf.v) {
                cdouble d = 1.0 + z;
                if ((real_field && d.real() <= 0.0) || std::abs(d) < 1e-12)
                    throw SingularS("evaluate_density: 1+v <= 0 on the grid");
                z = 1.0 / d;
            }
            return ders.emplace(key, std::move(sf)).first->second;
        }
        auto fit = fields.find(v);
        if (fit == fields.end())
            throw GridMismatch("evaluate_density: missing field " + var_name(v));
        return ders.emplace(key, derivative(fit->second, order)).first->second;
    };

    GridFunction acc = GridFunction::zeros(proto.geom, proto.a, proto.length, proto.n());
    for (const auto& [m, c] : p.terms()) {
        cdouble coeff = c.evaluate(params);
        if (coeff == cdouble(0.0)) continue;
        std::vector<cdouble> term(proto.n(), coeff);
        for (const auto& f : m) {
            const GridFunction& d = get(f.var, f.var == s ? 0 : f.order);
            for (std::size_t j = 0; j < term.size(); ++j) {
                cdouble val = d.v[j];
                cdouble pw = val;
                for (int k = 1; k < f.power; ++k) pw *= val;
                term[j] *= pw;
            }
        }
        for (std::size_t j = 0; j < term.size(); ++j) acc.v[j] += term[j];
    }
    return integrate(acc);
}

}  // namespace hierlab
