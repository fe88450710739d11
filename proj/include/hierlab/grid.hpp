#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hierlab {

struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonDecayingPotential : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using cdouble = std::complex<double>;

enum class Geometry { Periodic, Line };

// Uniformly sampled complex field. Periodic: n samples on [a, a+period), no
// duplicate endpoint, dx = period/n. Line: inclusive endpoints, dx = (b-a)/(n-1).
struct GridFunction {
    std::vector<cdouble> v;
    Geometry geom = Geometry::Periodic;
    double a = 0.0;
    double length = 0.0;  // period (Periodic) or b-a (Line)

    std::size_t n() const { return v.size(); }
    double dx() const {
        return geom == Geometry::Periodic ? length / static_cast<double>(n())
                                          : length / static_cast<double>(n() - 1);
    }
    double x(std::size_t j) const { return a + dx() * static_cast<double>(j); }
    double b() const { return a + length; }

    static GridFunction zeros(Geometry g, double a, double length, std::size_t n) {
        GridFunction f;
        f.v.assign(n, cdouble(0.0));
        f.geom = g;
        f.a = a;
        f.length = length;
        if (n < 16) throw std::invalid_argument("GridFunction: need at least 16 samples");
        return f;
    }

    template <class F>
    static GridFunction sample(Geometry g, double a, double length, std::size_t n, F&& fn) {
        GridFunction f = zeros(g, a, length, n);
        for (std::size_t j = 0; j < n; ++j) f.v[j] = fn(f.x(j));
        return f;
    }

    bool same_grid(const GridFunction& o) const {
        return geom == o.geom && n() == o.n() && a == o.a && length == o.length;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }

    void require_decayed_tails(double tol = 1e-12) const {
        if (geom != Geometry::Line) return;
        if (std::abs(v.front()) > tol || std::abs(v.back()) > tol)
            throw NonDecayingPotential("line-grid tail above the declared tolerance");
    }
};

namespace fftdetail {

struct Plans {
    std::size_t n;
    fftw_complex* buf;
    fftw_plan fwd, bwd;
    explicit Plans(std::size_t n_) : n(n_) {
        buf = fftw_alloc_complex(n);
        fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Plans() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
};

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

inline Plans& plans_for(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<Plans>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::lock_guard<std::mutex> lock(planner_mutex());  // FFTW planner is not thread safe
        it = cache.emplace(n, std::make_unique<Plans>(n)).first;
    }
    return *it->second;
}

inline void run(std::vector<cdouble>& data, bool forward) {
    Plans& p = plans_for(data.size());
    auto* b = reinterpret_cast<cdouble*>(p.buf);
    std::copy(data.begin(), data.end(), b);
    fftw_execute(forward ? p.fwd : p.bwd);
    std::copy(b, b + data.size(), data.begin());
}

}  // namespace fftdetail

inline std::vector<cdouble> fft(std::vector<cdouble> data) {
    fftdetail::run(data, true);
    return data;
}
inline std::vector<cdouble> ifft(std::vector<cdouble> data) {
    fftdetail::run(data, false);
    const double s = 1.0 / static_cast<double>(data.size());
    for (auto& z : data) z *= s;
    return data;
}

// wavenumbers 2 pi / L * (0, 1, ..., n/2, -n/2+1, ..., -1)
inline std::vector<double> wavenumbers(std::size_t n, double period) {
    std::vector<double> k(n);
    const double f = 2.0 * 3.141592653589793238462643383279502884 / period;
    for (std::size_t j = 0; j < n; ++j) {
        auto jj = static_cast<long>(j);
        long half = static_cast<long>(n) / 2;
        k[j] = f * static_cast<double>(jj <= half ? jj : jj - static_cast<long>(n));
    }
    return k;
}

namespace fd {
// 9-point central first-derivative weights, O(h^8)
inline constexpr double c1[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
}  // namespace fd

// order-m derivative: spectral (periodic) or repeated 8th-order central
// differences with zero extension (line; fields are required to decay)
inline GridFunction derivative(const GridFunction& f, int m = 1) {
    GridFunction out = f;
    if (m == 0) return out;
    if (f.geom == Geometry::Periodic) {
        auto fh = fft(f.v);
        auto k = wavenumbers(f.n(), f.length);
        for (std::size_t j = 0; j < f.n(); ++j) {
            cdouble ik(0.0, k[j]);
            cdouble mult(1.0, 0.0);
            for (int p = 0; p < m; ++p) mult *= ik;
            fh[j] *= mult;
        }
        if (m % 2 == 1 && f.n() % 2 == 0) fh[f.n() / 2] = 0.0;  // Nyquist
        out.v = ifft(std::move(fh));
        return out;
    }
    const double h = f.dx();
    std::vector<cdouble> cur = f.v, next(f.n());
    for (int pass = 0; pass < m; ++pass) {
        auto at = [&cur](long j) -> cdouble {
            if (j < 0 || j >= static_cast<long>(cur.size())) return {0.0, 0.0};
            return cur[static_cast<std::size_t>(j)];
        };
        for (long j = 0; j < static_cast<long>(f.n()); ++j) {
            cdouble acc(0.0, 0.0);
            for (int s = 1; s <= 4; ++s) acc += fd::c1[s - 1] * (at(j + s) - at(j - s));
            next[static_cast<std::size_t>(j)] = acc / h;
        }
        cur.swap(next);
    }
    out.v = std::move(cur);
    return out;
}

// trapezoid; spectrally accurate on periodic grids and for decaying line data
inline cdouble integrate(const GridFunction& f) {
    cdouble s(0.0, 0.0);
    for (const auto& z : f.v) s += z;
    if (f.geom == Geometry::Line) s -= 0.5 * (f.v.front() + f.v.back());
    return s * f.dx();
}

// 6-point Lagrange interpolation on the uniform grid. Periodic grids wrap;
// on line grids the stencil is clamped one-sided at the boundary, and points
// outside [a, b] evaluate to 0 (fields are required to decay).
inline cdouble interp6(const GridFunction& f, double x) {
    const double h = f.dx();
    const long n = static_cast<long>(f.n());
    double t = (x - f.a) / h;
    long j0 = static_cast<long>(std::floor(t)) - 2;
    if (f.geom == Geometry::Line) {
        if (t < -1e-9 || t > static_cast<double>(n - 1) + 1e-9) return {0.0, 0.0};
        j0 = std::clamp(j0, 0L, n - 6);
    }
    auto at = [&f, n](long j) -> cdouble {
        if (f.geom == Geometry::Periodic) {
            j %= n;
            if (j < 0) j += n;
        }
        return f.v[static_cast<std::size_t>(j)];
    };
    cdouble acc(0.0, 0.0);
    for (int i = 0; i < 6; ++i) {
        double li = 1.0;
        double xi = static_cast<double>(j0 + i);
        for (int k = 0; k < 6; ++k) {
            if (k == i) continue;
            double xk = static_cast<double>(j0 + k);
            li *= (t - xk) / (xi - xk);
        }
        acc += li * at(j0 + i);
    }
    return acc;
}

}  // namespace hierlab
