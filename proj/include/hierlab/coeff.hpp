#pragma once

#include "hierlab/rational.hpp"

#include <array>
#include <complex>
#include <map>

namespace hierlab {

// Exponents of the formal parameters (tau, tau0).
using ParamExp = std::array<int, 2>;

inline constexpr ParamExp kNoParams{0, 0};
inline constexpr const char* kParamNames[2] = {"tau", "tau0"};

// Polynomial in the commuting parameters tau, tau0 over Q(i); no
// zero-coefficient entries are stored.
class Coeff {
public:
    using Terms = std::map<ParamExp, GaussianRational>;

    Coeff() = default;
    Coeff(GaussianRational c) {
        if (!c.is_zero()) t_.emplace(kNoParams, std::move(c));
    }
    Coeff(long n) : Coeff(GaussianRational(n)) {}
    static Coeff monomial(ParamExp e, GaussianRational c) {
        Coeff r;
        if (!c.is_zero()) r.t_.emplace(e, std::move(c));
        return r;
    }

    bool is_zero() const { return t_.empty(); }
    const Terms& terms() const { return t_; }

    // the exponent-(0,0) part
    GaussianRational constant_part() const {
        auto it = t_.find(kNoParams);
        return it == t_.end() ? GaussianRational() : it->second;
    }

    Coeff& operator+=(const Coeff& o) {
        for (const auto& [e, c] : o.t_) add(e, c);
        return *this;
    }
    Coeff& operator-=(const Coeff& o) {
        for (const auto& [e, c] : o.t_) add(e, -c);
        return *this;
    }
    friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
    friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
    friend Coeff operator-(const Coeff& a) {
        Coeff r;
        for (const auto& [e, c] : a.t_) r.t_.emplace(e, -c);
        return r;
    }
    friend Coeff operator*(const Coeff& a, const Coeff& b) {
        Coeff r;
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_)
                r.add({ea[0] + eb[0], ea[1] + eb[1]}, ca * cb);
        return r;
    }
    Coeff& operator*=(const Coeff& o) { return *this = *this * o; }

    Coeff scaled(const GaussianRational& c) const {
        Coeff r;
        if (c.is_zero()) return r;
        for (const auto& [e, v] : t_) r.t_.emplace(e, c * v);
        return r;
    }

    Coeff conj_coefficients() const {
        Coeff r;
        for (const auto& [e, c] : t_) r.t_.emplace(e, c.conj());
        return r;
    }

    friend bool operator==(const Coeff& a, const Coeff& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

    std::complex<double> evaluate(const std::array<std::complex<double>, 2>& p) const {
        std::complex<double> acc{0.0, 0.0};
        for (const auto& [e, c] : t_) {
            std::complex<double> m = c.to_complex();
            for (int k = 0; k < e[0]; ++k) m *= p[0];
            for (int k = 0; k < e[1]; ++k) m *= p[1];
            acc += m;
        }
        return acc;
    }

    void add(const ParamExp& e, const GaussianRational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = t_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

private:
    Terms t_;
};

inline Coeff coeff_i() { return Coeff(GaussianRational::i()); }
inline Coeff coeff_tau(int pow = 1, GaussianRational c = GaussianRational(1)) {
    return Coeff::monomial({pow, 0}, std::move(c));
}

std::string to_string(const Coeff& c);

}  // namespace hierlab
