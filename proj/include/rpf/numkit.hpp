#pragma once

// Arbitrary-precision scalars, exact combinatorics and truncated power series.

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace rpf {

namespace bmp = boost::multiprecision;
using real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;
using rat = mpq_class;
using bigint = mpz_class;

class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline unsigned& bits_ref() {
    static unsigned bits = 256;
    return bits;
}
}  // namespace detail

// Global working precision. Set it before spawning workers; it is read-only afterwards.
inline void set_precision(unsigned bits) {
    if (bits < 64) throw std::invalid_argument("precision must be at least 64 bits");
    detail::bits_ref() = bits;
    real::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1);
}
inline unsigned precision_bits() { return detail::bits_ref(); }

inline real pow2(long e) {
    real r = 1;
    mpfr_mul_2si(r.backend().data(), r.backend().data(), e, MPFR_RNDN);
    return r;
}
// 2^-bits at the working precision
inline real epsilon() { return pow2(-static_cast<long>(precision_bits())); }

inline real pi() {
    real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

inline real to_real(const rat& q) {
    real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}
inline real to_real(const bigint& z) {
    real r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

inline real rmax(const real& a, const real& b) { return a < b ? b : a; }
inline real rmin(const real& a, const real& b) { return a < b ? a : b; }

inline double to_double(const real& x) { return x.convert_to<double>(); }

inline std::string to_string(const real& x, int digits = 0) {
    if (digits <= 0) digits = static_cast<int>(precision_bits() * 0.30103) - 2;
    return x.str(digits, std::ios_base::scientific);
}

// ---------------------------------------------------------------- complex

struct cx {
    real re, im;
    cx() : re(0), im(0) {}
    cx(const real& r) : re(r), im(0) {}
    cx(const real& r, const real& i) : re(r), im(i) {}
    template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
    cx(T r) : re(r), im(0) {}
    template <class T, class U, class = std::enable_if_t<std::is_arithmetic_v<T> && std::is_arithmetic_v<U>>>
    cx(T r, U i) : re(r), im(i) {}

    cx& operator+=(const cx& o) { re += o.re; im += o.im; return *this; }
    cx& operator-=(const cx& o) { re -= o.re; im -= o.im; return *this; }
    cx& operator*=(const cx& o) {
        real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    cx& operator/=(const cx& o) {
        real d = o.re * o.re + o.im * o.im;
        real r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = std::move(r);
        return *this;
    }
    cx& operator*=(const real& s) { re *= s; im *= s; return *this; }
    cx& operator/=(const real& s) { re /= s; im /= s; return *this; }
};

inline cx operator-(const cx& a) { return cx(-a.re, -a.im); }
inline cx operator+(cx a, const cx& b) { return a += b; }
inline cx operator-(cx a, const cx& b) { return a -= b; }
inline cx operator*(cx a, const cx& b) { return a *= b; }
inline cx operator/(cx a, const cx& b) { return a /= b; }
inline cx operator*(cx a, const real& s) { return a *= s; }
inline cx operator*(const real& s, cx a) { return a *= s; }
inline cx operator/(cx a, const real& s) { return a /= s; }
inline cx operator+(cx a, const real& s) { a.re += s; return a; }
inline cx operator+(const real& s, cx a) { a.re += s; return a; }
inline cx operator-(cx a, const real& s) { a.re -= s; return a; }
inline cx operator-(const real& s, const cx& a) { return cx(s - a.re, -a.im); }
inline cx operator/(const real& s, const cx& a) { return cx(s) / a; }

template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
inline cx operator*(cx a, T s) { return a *= real(s); }
template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
inline cx operator*(T s, cx a) { return a *= real(s); }
template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
inline cx operator/(cx a, T s) { return a /= real(s); }
template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
inline cx operator/(T s, const cx& a) { return cx(real(s)) / a; }
template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
inline cx operator+(cx a, T s) { a.re += s; return a; }
template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
inline cx operator+(T s, cx a) { a.re += s; return a; }
template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
inline cx operator-(cx a, T s) { a.re -= s; return a; }
template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
inline cx operator-(T s, const cx& a) { return cx(real(s) - a.re, -a.im); }

inline cx I() { return cx(0, 1); }
inline cx conj(const cx& a) { return cx(a.re, -a.im); }
inline real norm(const cx& a) { return a.re * a.re + a.im * a.im; }
inline real abs(const cx& a) { return bmp::hypot(a.re, a.im); }
inline real arg(const cx& a) { return bmp::atan2(a.im, a.re); }

// e^{i theta}
inline cx expi(const real& t) { return cx(bmp::cos(t), bmp::sin(t)); }

inline cx exp(const cx& a) { return bmp::exp(a.re) * expi(a.im); }
inline cx log(const cx& a) { return cx(bmp::log(abs(a)), arg(a)); }
inline cx sqrt(const cx& a) {
    if (a.re == 0 && a.im == 0) return cx();
    real r = bmp::sqrt(abs(a));
    real t = arg(a) / 2;
    return r * expi(t);
}
inline cx sin(const cx& a) { return cx(bmp::sin(a.re) * bmp::cosh(a.im), bmp::cos(a.re) * bmp::sinh(a.im)); }
inline cx cos(const cx& a) { return cx(bmp::cos(a.re) * bmp::cosh(a.im), -bmp::sin(a.re) * bmp::sinh(a.im)); }
inline cx cot(const cx& a) {
    // cot z = i (e^{2iz} + 1)/(e^{2iz} - 1), computed with the decaying exponential
    cx w = a.im >= 0 ? exp(cx(-2 * a.im, 2 * a.re)) : exp(cx(2 * a.im, -2 * a.re));
    cx r = I() * (w + 1) / (w - 1);
    return a.im >= 0 ? r : -r;
}
inline cx pow(cx a, long n) {
    if (n < 0) return cx(1) / pow(a, -n);
    cx r(1);
    while (n) {
        if (n & 1) r *= a;
        n >>= 1;
        if (n) a *= a;
    }
    return r;
}
inline cx pow(const cx& a, const cx& b) { return exp(b * log(a)); }

// e^{pi i n/d}, with n reduced exactly modulo 2d
inline cx expi_pi_frac(long long n, long long d) {
    long long m = ((n % (2 * d)) + 2 * d) % (2 * d);
    return expi(pi() * m / d);
}

inline std::string to_string(const cx& z, int digits = 0) {
    std::string s = to_string(z.re, digits);
    s += z.im < 0 ? " - " : " + ";
    s += to_string(bmp::abs(z.im), digits) + "i";
    return s;
}

// ---------------------------------------------------------------- exact combinatorics

inline bigint binom(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    bigint r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline bigint factorial(long n) {
    bigint r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

namespace detail {
struct bernoulli_cache {
    std::mutex mu;
    std::vector<rat> b{rat(1)};
};
inline bernoulli_cache& bcache() {
    static bernoulli_cache c;
    return c;
}
}  // namespace detail

// B_n with B_1 = -1/2, from sum_{k<=n} binom(n+1,k) B_k = 0
inline rat bernoulli_number(long n) {
    if (n < 0) throw std::invalid_argument("bernoulli_number: n < 0");
    if (n == 1) return rat(-1, 2);
    if (n > 1 && (n & 1)) return rat(0);
    auto& c = detail::bcache();
    std::lock_guard<std::mutex> lk(c.mu);
    while (static_cast<long>(c.b.size()) <= n) {
        long m = static_cast<long>(c.b.size());
        rat s = 0;
        for (long k = 0; k < m; ++k)
            if (c.b[k] != 0) s += rat(binom(m + 1, k)) * c.b[k];
        rat bm = -s / (m + 1);
        bm.canonicalize();
        c.b.push_back(bm);
    }
    return c.b[n];
}

inline rat bernoulli_poly(long a, const rat& x) {
    rat s = 0, xp = 1;
    // Horner-free form: sum_k binom(a,k) B_{a-k} x^k
    for (long k = 0; k <= a; ++k) {
        rat b = bernoulli_number(a - k);
        if (b != 0) s += rat(binom(a, k)) * b * xp;
        xp *= x;
    }
    s.canonicalize();
    return s;
}

inline bigint stirling_subset(long n, long m) {
    if (m > n || m < 0 || n < 0) return 0;
    if (n == 0) return 1;
    if (m == 0) return 0;
    std::vector<bigint> row(m + 1, 0);
    row[0] = 1;
    for (long i = 1; i <= n; ++i)
        for (long j = std::min(i, m); j >= 0; --j)
            row[j] = j == 0 ? bigint(0) : bigint(j * row[j] + row[j - 1]);
    return row[m];
}

template <class T>
T binomial_general(const T& alpha, long r) {
    if (r < 0) throw std::invalid_argument("binomial_general: r < 0");
    T out(1);
    for (long i = 0; i < r; ++i) {
        out *= (alpha - T(i));
        out /= T(i + 1);
    }
    return out;
}
inline rat binomial_general(const rat& alpha, long r) {
    rat out = 1;
    for (long i = 0; i < r; ++i) out = out * (alpha - i) / (i + 1);
    out.canonicalize();
    return out;
}
inline cx binomial_general(const cx& alpha, long r) {
    cx out(1);
    for (long i = 0; i < r; ++i) out = out * (alpha - real(i)) / real(i + 1);
    return out;
}

// Table T[i][j] = coefficient of x^i in (p_1 x + p_2 x^2 + ...)^j, args[0] = p_1.
inline std::vector<std::vector<cx>> ordinary_bell_table(long imax, const std::vector<cx>& args) {
    if (static_cast<long>(args.size()) < imax) throw std::invalid_argument("partial_ordinary_bell: insufficient args");
    std::vector<std::vector<cx>> t(imax + 1, std::vector<cx>(imax + 1));
    t[0][0] = cx(1);
    for (long j = 1; j <= imax; ++j)
        for (long i = j; i <= imax; ++i) {
            cx s;
            for (long k = 1; k <= i - j + 1; ++k) s += args[k - 1] * t[i - k][j - 1];
            t[i][j] = s;
        }
    return t;
}

inline cx partial_ordinary_bell(long i, long j, const std::vector<cx>& args) {
    if (i < 0 || j < 0) throw std::invalid_argument("partial_ordinary_bell: negative index");
    if (j > i) return (i == 0 && j == 0) ? cx(1) : cx();
    return ordinary_bell_table(i, args)[i][j];
}

// ---------------------------------------------------------------- truncated series

struct TruncSeries {
    cx center;
    std::vector<cx> coeffs;  // coeffs[n] multiplies (z - center)^n

    TruncSeries() = default;
    TruncSeries(cx c, std::vector<cx> v) : center(std::move(c)), coeffs(std::move(v)) {}
    static TruncSeries constant(const cx& c, const cx& v, size_t order) {
        TruncSeries s(c, std::vector<cx>(order));
        s.coeffs[0] = v;
        return s;
    }
    size_t order() const { return coeffs.size(); }
    const cx& operator[](size_t n) const { return coeffs[n]; }
    cx& operator[](size_t n) { return coeffs[n]; }

    cx eval(const cx& z) const {
        cx x = z - center, r;
        for (size_t n = coeffs.size(); n-- > 0;) r = r * x + coeffs[n];
        return r;
    }
};

inline TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
    size_t n = std::min(a.order(), b.order());
    TruncSeries r(a.center, std::vector<cx>(n));
    for (size_t i = 0; i < n; ++i) r[i] = a[i] + b[i];
    return r;
}
inline TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
    size_t n = std::min(a.order(), b.order());
    TruncSeries r(a.center, std::vector<cx>(n));
    for (size_t i = 0; i < n; ++i) r[i] = a[i] - b[i];
    return r;
}
inline TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    size_t n = std::min(a.order(), b.order());
    TruncSeries r(a.center, std::vector<cx>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
    return r;
}
inline TruncSeries operator*(const cx& s, TruncSeries a) {
    for (auto& c : a.coeffs) c *= s;
    return a;
}

// exp of a series: E' = A' E
inline TruncSeries series_exp(const TruncSeries& a) {
    size_t n = a.order();
    TruncSeries e(a.center, std::vector<cx>(n));
    e[0] = exp(a[0]);
    for (size_t k = 1; k < n; ++k) {
        cx s;
        for (size_t j = 1; j <= k; ++j) s += real(static_cast<long>(j)) * a[j] * e[k - j];
        e[k] = s / real(static_cast<long>(k));
    }
    return e;
}

inline TruncSeries series_inv(const TruncSeries& a) {
    size_t n = a.order();
    if (a[0].re == 0 && a[0].im == 0) throw numeric_error("series_inv: zero constant term");
    TruncSeries r(a.center, std::vector<cx>(n));
    cx inv0 = cx(1) / a[0];
    r[0] = inv0;
    for (size_t k = 1; k < n; ++k) {
        cx s;
        for (size_t j = 1; j <= k; ++j) s += a[j] * r[k - j];
        r[k] = -s * inv0;
    }
    return r;
}

using cfun = std::function<cx(const cx&)>;

struct TaylorOptions {
    long min_nodes = 32;
    int max_doublings = 9;
    long tol_bits = 20;  // agreement target 2^{-(precision - tol_bits)} relative to max |f|
};

// Taylor coefficients by the trapezoidal Cauchy integral on a circle; node count doubles
// until two successive passes agree.
inline TruncSeries taylor_coeffs(const cfun& f, const cx& center, const real& radius, long order,
                                 const TaylorOptions& opt = {}) {
    if (order < 1) throw std::invalid_argument("taylor_coeffs: order < 1");
    long n = std::max(opt.min_nodes, 4 * order);
    long p2 = 1;
    while (p2 < n) p2 <<= 1;
    n = p2;
    real twopi = 2 * pi();
    real tol = pow2(-static_cast<long>(precision_bits()) + opt.tol_bits);

    std::vector<cx> vals;  // f at nodes, natural order for the current n
    auto sample = [&](long nn) {
        std::vector<cx> v(nn);
        for (long j = 0; j < nn; ++j) {
            if (!vals.empty() && j % 2 == 0) {
                v[j] = vals[j / 2];
                continue;
            }
            v[j] = f(center + radius * expi(twopi * j / nn));
        }
        vals = std::move(v);
    };
    auto coeffs_of = [&](long nn) {
        // scaled coefficients c_k r^k
        std::vector<cx> c(order);
        std::vector<cx> roots(nn);
        for (long j = 0; j < nn; ++j) roots[j] = expi(-twopi * j / nn);
        for (long k = 0; k < order; ++k) {
            cx s;
            for (long j = 0; j < nn; ++j) s += vals[j] * roots[(j * k) % nn];
            c[k] = s / real(nn);
        }
        return c;
    };
    sample(n);
    auto prev = coeffs_of(n);
    real resid = -1;
    for (int d = 0; d < opt.max_doublings; ++d) {
        n *= 2;
        sample(n);
        auto cur = coeffs_of(n);
        real fmax = 0;
        for (auto& v : vals) fmax = rmax(fmax, abs(v));
        resid = 0;
        for (long k = 0; k < order; ++k) resid = rmax(resid, abs(cur[k] - prev[k]));
        prev = std::move(cur);
        if (resid <= tol * rmax(fmax, real(1e-300))) {
            TruncSeries s(center, std::vector<cx>(order));
            real rk = 1;
            for (long k = 0; k < order; ++k) {
                s[k] = prev[k] / rk;
                rk *= radius;
            }
            return s;
        }
    }
    throw numeric_error("taylor_coeffs: no convergence, last residual " + to_string(resid, 6));
}

// Coefficients of sum_j alpha_j/(N+a)^{j+2} re-expanded as sum_t beta_t/N^{t+2}.
inline std::vector<cx> shift_series_basis(const std::vector<cx>& alphas, const rat& a) {
    std::vector<cx> out(alphas.size());
    real ar = to_real(a);
    for (size_t t = 0; t < alphas.size(); ++t) {
        cx s;
        for (size_t j = 0; j <= t; ++j) {
            rat b = binomial_general(rat(-static_cast<long>(j) - 2), static_cast<long>(t - j));
            s += alphas[j] * (to_real(b) * bmp::pow(ar, static_cast<long>(t - j)));
        }
        out[t] = s;
    }
    return out;
}

// ---------------------------------------------------------------- parallel map

inline unsigned& default_threads() {
    static unsigned t = std::max(1u, std::thread::hardware_concurrency());
    return t;
}

// Evaluates fn(i) for i in [0, n) into slot i; the caller reduces in index order.
template <class T, class F>
std::vector<T> parallel_map(long n, F&& fn, unsigned threads = 0) {
    if (threads == 0) threads = default_threads();
    std::vector<T> out(std::max<long>(n, 0));
    if (n <= 0) return out;
    if (threads <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<long> next{0};
    std::exception_ptr err;
    std::mutex emu;
    auto work = [&] {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= n) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(emu);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<unsigned>(threads, static_cast<unsigned>(n)); ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace rpf
