#pragma once

#include "hierlab/diffpoly.hpp"
#include "hierlab/grid.hpp"

namespace hierlab::flows {

struct StabilityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BlowupDetected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One pseudospectral evaluation plan for a differential polynomial in a single
// field (plus s = (1+v)^{-1}); parameters are substituted at compile time.
struct TermPlan {
    cdouble coeff;
    std::vector<std::pair<int, int>> factors;  // (derivative order, power)
    int s_power = 0;
};

struct FieldPlan {
    std::vector<TermPlan> terms;
    int max_order = 0;
    int degree = 1;  // max homogeneity incl. s factors
    bool has_s = false;

    static FieldPlan compile(const DiffPoly& p, VarId field,
                             const std::array<cdouble, 2>& params) {
        FieldPlan plan;
        const VarId s = s_var();
        for (const auto& [m, c] : p.terms()) {
            TermPlan t;
            t.coeff = c.evaluate(params);
            if (t.coeff == cdouble(0.0)) continue;
            int deg = 0;
            for (const auto& f : m) {
                if (f.var == s) {
                    t.s_power = f.power;
                    plan.has_s = true;
                } else if (f.var == field) {
                    t.factors.push_back({f.order, f.power});
                    plan.max_order = std::max(plan.max_order, f.order);
                } else {
                    throw std::invalid_argument("FieldPlan: foreign variable " + var_name(f.var));
                }
                deg += f.power;
            }
            plan.degree = std::max(plan.degree, deg);
            plan.terms.push_back(std::move(t));
        }
        return plan;
    }
};

// Alias-free pointwise evaluation: derivative arrays are zero-padded to a grid
// of size >= (degree+1)/2 * n before multiplication, and the result spectrum
// is truncated back to n.
namespace detail {
// smallest 2^a 3^b 5^c >= target (fast FFT sizes)
inline std::size_t next_fast_size(std::size_t target) {
    for (std::size_t m = target;; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2u, 3u, 5u})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}
}  // namespace detail

class PseudoSpectral {
public:
    // active_fraction: fraction of the Nyquist range actually carrying modes
    // (the state is truncated there); the padded size is chosen alias-free
    // for products of the given degree over the active band.
    PseudoSpectral(std::size_t n, double period, int degree, double active_fraction = 1.0)
        : n_(n), period_(period), k_(wavenumbers(n, period)) {
        auto kact = static_cast<std::size_t>(
            std::ceil(active_fraction * static_cast<double>(n) / 2.0));
        std::size_t m = (static_cast<std::size_t>(degree) + 1) * kact + 2;
        m_ = std::max(detail::next_fast_size(m), n_);
        km_ = wavenumbers(m_, period);
    }

    std::size_t n() const { return n_; }
    const std::vector<double>& k() const { return k_; }

    std::vector<cdouble> pad(const std::vector<cdouble>& hat) const {
        std::vector<cdouble> out(m_, cdouble(0.0));
        const double scale = static_cast<double>(m_) / static_cast<double>(n_);
        std::size_t h = n_ / 2;
        for (std::size_t j = 0; j <= h; ++j) out[j] = hat[j] * scale;
        for (std::size_t j = h + 1; j < n_; ++j) out[m_ - n_ + j] = hat[j] * scale;
        return out;
    }

    std::vector<cdouble> truncate(const std::vector<cdouble>& hat_m) const {
        std::vector<cdouble> out(n_, cdouble(0.0));
        const double scale = static_cast<double>(n_) / static_cast<double>(m_);
        std::size_t h = n_ / 2;
        for (std::size_t j = 0; j <= h; ++j) out[j] = hat_m[j] * scale;
        for (std::size_t j = h + 1; j < n_; ++j) out[j] = hat_m[m_ - n_ + j] * scale;
        if (n_ % 2 == 0) out[h] = 0.0;
        return out;
    }

    // plan(state) in spectral space -> spectrum of the evaluated polynomial
    std::vector<cdouble> apply(const FieldPlan& plan, const std::vector<cdouble>& hat) const {
        // padded real-space derivative arrays, built lazily
        std::map<int, std::vector<cdouble>> der;
        auto der_of = [&](int order) -> const std::vector<cdouble>& {
            auto it = der.find(order);
            if (it != der.end()) return it->second;
            std::vector<cdouble> h = hat;
            for (std::size_t j = 0; j < n_; ++j) {
                cdouble ik(0.0, k_[j]);
                cdouble mult(1.0, 0.0);
                for (int p = 0; p < order; ++p) mult *= ik;
                h[j] *= mult;
            }
            if (order % 2 == 1 && n_ % 2 == 0) h[n_ / 2] = 0.0;
            return der.emplace(order, ifft(pad(h))).first->second;
        };
        std::vector<cdouble> s_arr;
        if (plan.has_s) {
            const auto& v = der_of(0);
            s_arr.resize(m_);
            for (std::size_t j = 0; j < m_; ++j) {
                cdouble d = 1.0 + v[j];
                if (d.real() <= 0.05 && std::abs(d.imag()) < 1e-6)
                    throw StabilityViolation("pseudospectral: 1+v below the positivity guard");
                s_arr[j] = 1.0 / d;
            }
        }
        std::vector<cdouble> acc(m_, cdouble(0.0));
        for (const auto& t : plan.terms) {
            std::vector<cdouble> term(m_, t.coeff);
            for (const auto& [order, power] : t.factors) {
                const auto& d = der_of(order);
                for (std::size_t j = 0; j < m_; ++j) {
                    cdouble pw = d[j];
                    for (int p = 1; p < power; ++p) pw *= d[j];
                    term[j] *= pw;
                }
            }
            for (int p = 0; p < t.s_power; ++p)
                for (std::size_t j = 0; j < m_; ++j) term[j] *= s_arr[j];
            for (std::size_t j = 0; j < m_; ++j) acc[j] += term[j];
        }
        return truncate(fft(std::move(acc)));
    }

private:
    std::size_t n_, m_;
    double period_;
    std::vector<double> k_, km_;
};

}  // namespace hierlab::flows
