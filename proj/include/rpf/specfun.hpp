#pragma once

// Dilogarithm, its branch values and zeros, Clausen's integral, cot and log-sinc derivatives.

#include "numkit.hpp"

#include <optional>

namespace rpf {

namespace detail {

// Per-precision cache of real coefficient tables.
template <class Make>
const std::vector<real>& cached_table(std::map<unsigned, std::vector<real>>& store, std::mutex& mu, size_t need,
                                      Make make) {
    std::lock_guard<std::mutex> lk(mu);
    auto& v = store[precision_bits()];
    if (v.size() < need) v = make(need);
    return v;
}

// B_n/(n+1)!
inline const std::vector<real>& dilog_bern_coeffs(size_t need) {
    static std::map<unsigned, std::vector<real>> store;
    static std::mutex mu;
    return cached_table(store, mu, need, [](size_t n) {
        std::vector<real> v(n);
        bigint f = 1;
        for (size_t i = 0; i < n; ++i) {
            f *= static_cast<unsigned long>(i + 1);
            v[i] = to_real(rat(bernoulli_number(static_cast<long>(i)) / rat(f)));
        }
        return v;
    });
}

inline cx dilog_direct(const cx& z) {
    cx s, zn = z;
    real eps = epsilon();
    for (long n = 1;; ++n) {
        cx t = zn / real(n * n);
        s += t;
        if (norm(t) <= eps * eps * norm(s) || n > 100000) break;
        zn *= z;
    }
    return s;
}

// sum_n B_n u^{n+1}/(n+1)!, u = -log(1-z); valid for |u| < 2 pi
inline cx dilog_bernoulli(const cx& z) {
    cx u = -log(1 - z);
    real eps = epsilon();
    size_t need = 64 + precision_bits();
    const auto& b = dilog_bern_coeffs(need);
    cx s = u - u * u / real(4);
    cx u2 = u * u, up = u;  // up = u^{n+1} for even n
    for (size_t n = 2; n < b.size(); n += 2) {
        up *= u2;
        cx t = up * b[n];
        s += t;
        if (norm(t) <= eps * eps * norm(s)) break;
    }
    return s;
}

inline cx dilog_unit(const cx& z) {
    real a = abs(z);
    if (a <= real(0.5)) return dilog_direct(z);
    if (z.re <= real(0.5)) return dilog_bernoulli(z);
    real p = pi();
    cx w = 1 - z;
    return p * p / 6 - log(z) * log(w) - (abs(w) <= real(0.5) ? dilog_direct(w) : dilog_bernoulli(w));
}

}  // namespace detail

// Principal-branch Li_2. On the cut (1, inf) the value is the limit from the upper half-plane.
inline cx dilog(const cx& z) {
    if (z.re == 0 && z.im == 0) return cx();
    real p = pi();
    if (z.im == 0 && z.re == 1) return cx(p * p / 6);
    if (abs(z) > 1) {
        cx lz = (z.im == 0 && z.re > 1) ? cx(bmp::log(z.re), -p) : log(-z);
        return -detail::dilog_unit(cx(1) / z) - p * p / 6 - lz * lz / real(2);
    }
    return detail::dilog_unit(z);
}

inline cx dilog_continued(const cx& z, long A, long B) {
    real p = pi();
    return dilog(z) + cx(4 * p * p * A) + cx(0, 2 * p * B) * log(z);
}

struct DilogZero {
    long A = 0, B = 0;
    cx w;
    real residual;
};

inline bool dilog_zero_exists(long A, long B) {
    return B != 0 && -std::labs(B) < 2 * A && 2 * A <= std::labs(B);
}

inline DilogZero dilog_zero(long A, long B) {
    if (!dilog_zero_exists(A, B)) throw std::invalid_argument("dilog_zero: need B != 0 and -|B|/2 < A <= |B|/2");
    real p = pi();
    auto F = [&](const cx& w) { return dilog_continued(w, A, B); };
    auto dF = [&](const cx& w) { return (-log(1 - w) + cx(0, 2 * p * B)) / w; };

    std::vector<cx> seeds;
    if (A == 0 && B == -1) seeds.push_back(cx(0.916198, -0.182459));
    if (A == 0 && B == -2) seeds.push_back(cx(0.968482, -0.109531));
    if (A == 1 && B == -3) seeds.push_back(cx(-0.459473, -0.848535));
    auto grid_seed = [&] {
        // coarse grid minimisation of |F| on [-2,2]^2
        cx best;
        real bestv = -1;
        for (int i = 0; i < 40; ++i)
            for (int j = 0; j < 40; ++j) {
                cx w(-2 + 4 * (i + 0.5) / 40, -2 + 4 * (j + 0.5) / 40);
                if (abs(w) < real(1e-9)) continue;
                real v = abs(F(w));
                if (bestv < 0 || v < bestv) bestv = v, best = w;
            }
        return best;
    };
    real tol = pow2(-static_cast<long>(precision_bits()) + 16);
    std::optional<DilogZero> best;
    bool gridded = false;
    for (size_t si = 0; si < seeds.size() || !gridded; ++si) {
        if (si == seeds.size()) {
            seeds.push_back(grid_seed());
            gridded = true;
        }
        cx w = seeds[si];
        real r = abs(F(w));
        for (int it = 0; it < 200 && r > tol; ++it) {
            cx step = F(w) / dF(w);
            // damp steps that leave the punctured plane or grow the residual
            real lam = 1;
            cx wn;
            real rn = r;
            for (int h = 0; h < 30; ++h) {
                wn = w - step * lam;
                if (abs(wn) > real(1e-30) && !(wn.im == 0 && wn.re >= 1)) {
                    rn = abs(F(wn));
                    if (rn < r || h == 29) break;
                }
                lam /= 2;
            }
            if (!(rn < r)) break;
            w = wn;
            r = rn;
        }
        if (!best || r < best->residual) best = DilogZero{A, B, w, r};
        if (r <= tol) break;
    }
    if (!best || best->residual > tol)
        throw numeric_error("dilog_zero: Newton did not converge for (" + std::to_string(A) + "," +
                            std::to_string(B) + ")");
    return *best;
}

// Cl_2(theta) = Im Li_2(e^{i theta})
inline real clausen(const real& theta) { return dilog(expi(theta)).im; }

namespace detail {
// cot^{(d)} = P_d(cot), P_0(c) = c, P_{d+1} = P_d'(c) (-1 - c^2)
inline const std::vector<bigint>& cot_poly(long d) {
    static std::vector<std::vector<bigint>> polys{{0, 1}};
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    while (static_cast<long>(polys.size()) <= d) {
        const auto& p = polys.back();
        std::vector<bigint> q(p.size() + 1, 0);
        for (size_t i = 1; i < p.size(); ++i) {
            bigint di = p[i] * static_cast<long>(i);
            q[i - 1] -= di;
            q[i + 1] -= di;
        }
        polys.push_back(std::move(q));
    }
    return polys[d];
}
}  // namespace detail

inline cx cot_deriv(long d, const cx& z) {
    cx s = sin(z);
    if (abs(s) < pow2(-static_cast<long>(precision_bits()) + 8)) throw numeric_error("cot_deriv: pole");
    cx c = cot(z);
    const auto& p = detail::cot_poly(d);
    cx r;
    for (size_t i = p.size(); i-- > 0;) r = r * c + cx(to_real(p[i]));
    return r;
}

// rho(z) = log(sin z / z) and its derivatives
inline cx rho_deriv(long d, const cx& z) {
    if (abs(z) <= 1) {
        // rho(z) = sum_{n>=1} r_n z^{2n}, r_n = (-1)^n 2^{2n-1} B_{2n}/(n (2n)!)
        static std::map<unsigned, std::vector<real>> store;
        static std::mutex mu;
        size_t need = precision_bits() / 2 + 64;
        const auto& r = detail::cached_table(store, mu, need, [](size_t n) {
            std::vector<real> v(n);
            for (size_t k = 1; k < n; ++k) {
                long kk = static_cast<long>(k);
                rat c = bernoulli_number(2 * kk) * rat(bigint(1) << static_cast<unsigned>(2 * kk - 1)) /
                        (rat(kk) * rat(factorial(2 * kk)));
                if (kk & 1) c = -c;
                v[k] = to_real(c);
            }
            return v;
        });
        cx s;
        real eps = epsilon();
        int small = 0;
        for (long n = 1; n < static_cast<long>(r.size()); ++n) {
            long e = 2 * n - d;
            if (e < 0) continue;
            real fall = 1;
            for (long i = 0; i < d; ++i) fall *= (2 * n - i);
            cx t = pow(z, e) * (r[n] * fall);
            s += t;
            if (norm(t) <= eps * eps * rmax(norm(s), real(eps))) {
                if (++small >= 2) break;
            } else {
                small = 0;
            }
        }
        return s;
    }
    if (d == 0) return log(sin(z) / z);
    cx t = cot_deriv(d - 1, z);
    real f = to_real(factorial(d - 1));
    if ((d - 1) & 1) f = -f;
    return t - f / pow(z, d);
}

}  // namespace rpf
