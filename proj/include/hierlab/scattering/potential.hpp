#pragma once

#include "hierlab/grid.hpp"

#include <cmath>
#include <string>

namespace hierlab::scattering {

// Closed-form potential families (real valued, with analytic derivatives up
// to order 2) plus sampled data. Closed forms can be evaluated in any scalar
// type; samples are interpolated in double precision only.
struct Potential {
    enum class Kind { Zero, Sech, Sech2, Sech4, Gaussian, TwoBump, Samples };
    Kind kind = Kind::Zero;
    double amp = 0.0;
    double width = 1.0;
    double sep = 2.0;  // TwoBump centers at +-sep
    double a = -34.0, b = 34.0;
    GridFunction samples;  // Kind::Samples

    template <class Real>
    Real value(Real x) const {
        return deriv(x, 0);
    }

    template <class Real>
    Real deriv(Real x, int k) const {
        using std::cosh;
        using std::exp;
        using std::tanh;
        const Real w = Real(width);
        const Real u = x / w;
        auto wpow = [&](Real val, int kk) {
            for (int j = 0; j < kk; ++j) val /= w;
            return val;
        };
        switch (kind) {
            case Kind::Zero:
                return Real(0);
            case Kind::Sech: {
                Real s = Real(1) / cosh(u), t = tanh(u);
                if (k == 0) return Real(amp) * s;
                if (k == 1) return wpow(-Real(amp) * s * t, 1);
                if (k == 2) return wpow(Real(amp) * s * (Real(1) - Real(2) * s * s), 2);
                break;
            }
            case Kind::Sech2: {
                Real s = Real(1) / cosh(u), t = tanh(u), s2 = s * s;
                if (k == 0) return Real(amp) * s2;
                if (k == 1) return wpow(-Real(2) * Real(amp) * s2 * t, 1);
                if (k == 2) return wpow(Real(amp) * s2 * (Real(4) - Real(6) * s2), 2);
                break;
            }
            case Kind::Sech4: {
                Real s = Real(1) / cosh(u), t = tanh(u), s4 = s * s * s * s;
                if (k == 0) return Real(amp) * s4;
                if (k == 1) return wpow(-Real(4) * Real(amp) * s4 * t, 1);
                if (k == 2)
                    return wpow(Real(amp) * s4 * (Real(16) - Real(20) * s * s), 2);
                break;
            }
            case Kind::Gaussian: {
                Real g = exp(-u * u);
                if (k == 0) return Real(amp) * g;
                if (k == 1) return wpow(-Real(2) * u * Real(amp) * g, 1);
                if (k == 2) return wpow((Real(4) * u * u - Real(2)) * Real(amp) * g, 2);
                break;
            }
            case Kind::TwoBump: {
                Real acc(0);
                for (int sgn : {-1, 1}) {
                    Real uu = (x - Real(sgn) * Real(sep)) / w;
                    Real g = exp(-uu * uu);
                    if (k == 0)
                        acc += Real(amp) * g;
                    else if (k == 1)
                        acc += wpow(-Real(2) * uu * Real(amp) * g, 1);
                    else if (k == 2)
                        acc += wpow((Real(4) * uu * uu - Real(2)) * Real(amp) * g, 2);
                }
                return acc;
            }
            case Kind::Samples:
                throw std::invalid_argument("Potential: sampled data has no closed-form scalar path");
        }
        throw std::invalid_argument("Potential::deriv: order not supported");
    }

    bool is_samples() const { return kind == Kind::Samples; }

    cdouble value_c(double x) const {
        if (kind == Kind::Samples) return interp6(samples, x);
        return cdouble(deriv<double>(x, 0), 0.0);
    }

    GridFunction discretize(std::size_t n) const {
        if (kind == Kind::Samples) return samples;
        return GridFunction::sample(Geometry::Line, a, b - a, n,
                                    [this](double x) { return value_c(x); });
    }

    static Potential from_samples(GridFunction g) {
        Potential p;
        p.kind = Kind::Samples;
        p.a = g.a;
        p.b = g.b();
        p.samples = std::move(g);
        return p;
    }
};

}  // namespace hierlab::scattering
