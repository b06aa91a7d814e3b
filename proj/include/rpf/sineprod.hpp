#pragma once

// Sine products prod_{j<=m} 2 sin(pi j h/k), the lattice sums S(m;h,k) and the Clausen estimates.

#include "specfun.hpp"

#include <numeric>

namespace rpf {

inline long mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

// 2 sin(pi r/k) for an integer r, reduced exactly mod 2k
inline real two_sin_pi_frac(long r, long k) {
    long s = mod(r, 2 * k);
    return 2 * bmp::sin(pi() * s / k);
}

struct SineProduct {
    real value;
    bool zero = false;  // some factor vanished
};

inline SineProduct sine_product_checked(long h, long k, long m) {
    if (m < 0 || k < 1) throw std::invalid_argument("sine_product: need m >= 0, k >= 1");
    SineProduct out{real(1), false};
    for (long j = 1; j <= m; ++j) {
        long r = mod(j * h, 2 * k);
        if (r % k == 0) {
            out.value = 0;
            out.zero = true;
            return out;
        }
        out.value *= two_sin_pi_frac(r, k);
    }
    return out;
}

inline real sine_product(long h, long k, long m) { return sine_product_checked(h, k, m).value; }

// 1/prod; throws on a vanishing factor
inline real sine_product_inv(long h, long k, long m) {
    auto p = sine_product_checked(h, k, m);
    if (p.zero) throw numeric_error("sine_product_inv: zero factor");
    return 1 / p.value;
}

struct MinPair {
    long beta0 = 0, gamma0 = 0, D = 0;
    bool unique = true;
};

// Minimal |beta gamma| over Z(h,k); ties go to the smallest gamma, then beta > 0.
inline MinPair min_pair(long h, long k) {
    if (k < 2 || h < 1 || h >= k || std::gcd(h, k) != 1) throw std::invalid_argument("min_pair: need 1 <= h < k coprime");
    MinPair best;
    long count = 0;
    for (long b = -(k - 1); b <= k - 1; ++b) {
        if (b == 0) continue;
        long g = mod(b * h, k);
        long D = std::labs(b) * g;
        bool better = best.D == 0 || D < best.D ||
                      (D == best.D && (g < best.gamma0 || (g == best.gamma0 && b > 0 && best.beta0 < 0)));
        if (best.D == 0 || D < best.D) count = 1;
        else if (D == best.D) ++count;
        if (better) best = MinPair{b, g, D, true};
    }
    best.unique = count == 1;
    return best;
}

inline real s_sum(long m, long h, long k) {
    if (m < 0 || m >= k) throw std::invalid_argument("s_sum: need 0 <= m < k");
    real s = 0, twopi = 2 * pi();
    for (long b = -(k - 1); b <= k - 1; ++b) {
        if (b == 0) continue;
        long g = mod(b * h, k);
        s += bmp::sin(twopi * mod(m * g, k) / k) / (std::labs(b) * g);
    }
    return s;
}

inline real estimate_budget(long k) {
    return (real(16.05) + bmp::sqrt(real(2)) / pi() * bmp::log(real(k))) / bmp::sqrt(real(k));
}

struct Estimate {
    real estimate, errbound;
};

// (1/k) log|1/prod_m(h/k)| ~ Cl_2(2 pi m gamma0/k)/(2 pi D)
inline Estimate log_product_estimate(long m, long h, long k) {
    auto mp = min_pair(h, k);
    real est = clausen(2 * pi() * mod(m * mp.gamma0, k) / k) / (2 * pi() * mp.D);
    return {est, estimate_budget(k)};
}

// (1/k) log|1/prod_m(h/k)|
inline real log_product_lhs(long m, long h, long k) {
    return -bmp::log(bmp::abs(sine_product(h, k, m))) / k;
}

inline real psi(long h, long k) {
    real best = 0, prod = 1;
    for (long m = 1; m < k; ++m) {
        prod *= two_sin_pi_frac(m * h, k);
        best = rmax(best, bmp::abs(bmp::log(bmp::abs(prod))) / k);
    }
    return best;
}

// max_m (1/k) log|1/prod_m(h/k)|; psi(h,k) equals this plus log(k)/k since |prod_m prod_{k-1-m}| = k
inline real psi_recip(long h, long k) {
    real best = 0, prod = 1;
    for (long m = 1; m < k; ++m) {
        prod *= two_sin_pi_frac(m * h, k);
        best = rmax(best, -bmp::log(bmp::abs(prod)) / k);
    }
    return best;
}

inline real c_of_h(long h) {
    real hh = h;
    return bmp::sqrt(hh) * bmp::exp(pi() * pi() * hh / 18 + real(1) / 6) / 2;
}

namespace detail {
// Gauss-Legendre nodes and weights on [0,1]
inline const std::pair<std::vector<real>, std::vector<real>>& gauss_legendre01(int n) {
    static std::map<std::pair<unsigned, int>, std::pair<std::vector<real>, std::vector<real>>> store;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_pair(precision_bits(), n);
    auto it = store.find(key);
    if (it != store.end()) return it->second;
    std::vector<real> x(n), w(n);
    real eps = epsilon() * 64;
    for (int i = 0; i < n; ++i) {
        real t = bmp::cos(pi() * (i + real(0.75)) / (n + real(0.5)));
        real dp;
        for (int it2 = 0; it2 < 100; ++it2) {
            real p0 = 1, p1 = t;
            for (int k = 2; k <= n; ++k) {
                real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1);
            real dt = p1 / dp;
            t -= dt;
            if (bmp::abs(dt) < eps) break;
        }
        real p0 = 1, p1 = t;
        for (int k = 2; k <= n; ++k) {
            real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1);
        x[i] = (1 - t) / 2;
        w[i] = 1 / ((1 - t * t) * dp * dp);
    }
    return store.emplace(key, std::make_pair(std::move(x), std::move(w))).first->second;
}

// B_{2L} - B_{2L}(y) on [0,1]
inline real bern_gap(long twoL, const real& y) {
    real s = 0, yp = 1;
    std::vector<real> c(twoL + 1);
    for (long j = 0; j <= twoL; ++j) c[j] = to_real(rat(binom(twoL, j)) * bernoulli_number(twoL - j));
    for (long j = 0; j <= twoL; ++j) {
        s += c[j] * yp;
        yp *= y;
    }
    return to_real(bernoulli_number(twoL)) - s;
}
}  // namespace detail

struct EMResult {
    real mainterm, TL, quad_err;
};

// Euler-Maclaurin form of prod_m(theta), theta = h/k, with remainder exp(T_L).
inline EMResult sine_product_em(long h, long k, long m, long L, const real& tol = real(1e-40)) {
    if (L < 1 || m < 1) throw std::invalid_argument("sine_product_em: need m, L >= 1");
    if (m * std::labs(h) >= k) throw std::invalid_argument("sine_product_em: need m theta < 1");
    real th = real(h) / k, p = pi();
    real x = p * m * th;
    real main = (h < 0 && (m & 1)) ? real(-1) : real(1);
    main *= bmp::sqrt(2 * bmp::sin(x) / th);
    main *= bmp::exp(-clausen(2 * x) / (2 * p * th));
    real corr = 0;
    for (long l = 1; l < L; ++l) {
        rat c = bernoulli_number(2 * l) / rat(factorial(2 * l));
        corr += to_real(c) * bmp::pow(p * th, 2 * l - 1) * cot_deriv(2 * l - 2, cx(x)).re;
    }
    main *= bmp::exp(corr);

    // first remainder integral: Gauss-Legendre per unit panel, node count doubling
    long twoL = 2 * L;
    real fact = to_real(factorial(twoL));
    auto integrate = [&](int n) {
        const auto& [nx, nw] = detail::gauss_legendre01(n);
        real s = 0;
        for (long j = 0; j < m; ++j)
            for (int i = 0; i < n; ++i) {
                real xx = j + nx[i];
                s += nw[i] * detail::bern_gap(twoL, nx[i]) * rho_deriv(twoL, cx(p * xx * th)).re;
            }
        return s / fact * bmp::pow(p * th, twoL);
    };
    int n = 16;
    real prev = integrate(n), cur = prev, err = 1;
    for (int d = 0; d < 5; ++d) {
        n *= 2;
        cur = integrate(n);
        err = bmp::abs(cur - prev);
        prev = cur;
        if (err < tol) break;
    }
    // second integral is the Stirling remainder of log Gamma(m)
    real mm = m;
    real stir = (mm - real(0.5)) * bmp::log(mm) - mm + bmp::log(2 * p) / 2;
    for (long l = 1; l < L; ++l)
        stir += to_real(bernoulli_number(2 * l)) / (2 * l * (2 * l - 1) * bmp::pow(mm, 2 * l - 1));
    real RL = bmp::lgamma(mm) - stir;
    return {main, cur + RL, err};
}

enum class HalfIdentity { shift_two, half_decomposition, parity_shift };

// Relative residual of the selected identity.
// shift_two: k odd, arg = a, 1 <= a <= (k-1)/2
// half_decomposition: k odd, arg = m even, 0 <= m < k
// parity_shift: k odd, arg = N odd with k < N and N - k even
inline real half_identities(HalfIdentity which, long k, long arg) {
    if (k % 2 == 0 || k < 3) throw std::invalid_argument("half_identities: k must be odd");
    real lhs, rhs;
    switch (which) {
    case HalfIdentity::shift_two: {
        long a = arg;
        if (a < 1 || 2 * a > k - 1) throw std::invalid_argument("half_identities: need 1 <= a <= (k-1)/2");
        long m = a + (k - 1) / 2;
        lhs = sine_product_inv(2, k, m);
        rhs = ((a & 1) ? -1 : 1) / bmp::sqrt(real(k)) * sine_product_inv(1, k, 2 * a) / sine_product_inv(2, k, a);
        break;
    }
    case HalfIdentity::half_decomposition: {
        long m = arg;
        if (m < 0 || m >= k || (m & 1)) throw std::invalid_argument("half_identities: need m even, 0 <= m < k");
        lhs = sine_product_inv(k - 1, 2 * k, m);
        real s = sine_product_inv(1, k, m / 2);
        rhs = sine_product_inv(1, k, m) / sine_product_inv(1, 2 * k, m) * s * s / sine_product_inv(2, k, m / 2);
        break;
    }
    case HalfIdentity::parity_shift: {
        long N = arg;
        if (!(N & 1) || N <= k || ((N - k) & 1)) throw std::invalid_argument("half_identities: need N odd, N > k");
        lhs = sine_product_inv(k - 1, 2 * k, N - 1 - k);
        long e = (N - k) / 2 + 1;
        rhs = 2 * ((e & 1) ? -1 : 1) * bmp::sin(pi() * (real(N) / k - 1) / 2) * sine_product_inv(k - 1, 2 * k, N - k);
        break;
    }
    }
    return bmp::abs(lhs - rhs) / bmp::abs(lhs);
}

}  // namespace rpf
