#pragma once

// Correction kernels, prefactors and the asymptotic coefficients for the subset sums C2, C2*, D1 and E1.

#include "rademacher.hpp"
#include "saddle.hpp"

#include <optional>

namespace rpf {

// ---------------------------------------------------------------- kernels

enum class Kernel { g, g_star, g_tilde, g_C, g_D };

namespace detail {
inline cx bern_over_fact(long ell) { return cx(to_real(bernoulli_number(2 * ell) / rat(factorial(2 * ell)))); }
}  // namespace detail

inline cx g_kernel(Kernel family, long ell, const cx& z) {
    if (ell < 1) throw std::invalid_argument("g_kernel: ell >= 1");
    real p = pi();
    cx b = detail::bern_over_fact(ell);
    auto g = [&] { return -b * pow(p * z, 2 * ell - 1) * cot_deriv(2 * ell - 2, p * z); };
    auto gs = [&] { return -b * pow(p * z / 2, 2 * ell - 1) * cot_deriv(2 * ell - 2, p * (z - 1) / 2); };
    switch (family) {
    case Kernel::g: return g();
    case Kernel::g_star: return gs();
    case Kernel::g_tilde:
        return b * pow(p * z, 2 * ell - 1) *
               (p * z * cot_deriv(2 * ell - 1, p * z) + real(2 * ell - 1) * cot_deriv(2 * ell - 2, p * z));
    case Kernel::g_C: return g() * (pow2(-(2 * ell - 1)) - 1);
    case Kernel::g_D: {
        cx a = g(), c = gs();
        return a - c + pow2(2 * ell - 1) * (2 * c - a);
    }
    }
    return cx();
}

// ---------------------------------------------------------------- u coefficients

enum class UKind { C, Cstar, D };

// Coefficients E_j of x^j in exp(sum_n A_n x^n), A_0 = 0, E_0 = one.
template <class T>
std::vector<T> exp_compose(const std::vector<T>& A, long jmax, const T& one) {
    std::vector<T> E(jmax + 1, one);
    for (long n = 1; n <= jmax; ++n) {
        T s = cx() * one;
        for (long k = 1; k <= n && k < static_cast<long>(A.size()); ++k) s = s + cx(real(k)) * (A[k] * E[n - k]);
        E[n] = cx(real(1) / n) * s;
    }
    return E;
}

namespace detail {
inline Kernel ukernel(UKind k) { return k == UKind::C ? Kernel::g : k == UKind::Cstar ? Kernel::g_C : Kernel::g_D; }

// coefficient of the linear term in the exponent
inline cx ulinear(UKind k, long sigma) {
    real p = pi();
    switch (k) {
    case UKind::C: return cx(0, 2 * p * sigma);
    case UKind::Cstar: return cx(0, p * (16 * sigma + 1) / 8);
    case UKind::D: return cx(0, p * sigma);
    }
    return cx();
}

// exponent coefficients A_n(z): A_1 = linear + g_1, A_{2l-1} = g_l, even terms vanish
inline std::vector<cx> uexponent(UKind kind, long sigma, long jmax, const cx& z) {
    std::vector<cx> A(jmax + 1);
    for (long ell = 1; 2 * ell - 1 <= jmax; ++ell) A[2 * ell - 1] = g_kernel(ukernel(kind), ell, z);
    if (jmax >= 1) A[1] += ulinear(kind, sigma) * z;
    return A;
}
}  // namespace detail

// u_j(z) as a pointwise function
inline cfun u_coeffs(UKind kind, long sigma, long j) {
    if (j < 0) throw std::invalid_argument("u_coeffs: j >= 0");
    return [=](const cx& z) {
        if (j == 0) return cx(1);
        return exp_compose(detail::uexponent(kind, sigma, j, z), j, cx(1))[j];
    };
}

// ---------------------------------------------------------------- prefactors

enum class Prefactor { C, Cstar, D, Dstar };

namespace detail {
inline void strip_check(Prefactor k, const cx& z) {
    real lo = (k == Prefactor::C) ? 2 : (k == Prefactor::Cstar) ? 3 : 1;
    if (!(z.re > lo && z.re < lo + real(0.5))) throw std::invalid_argument("prefactor: z outside its strip");
}

// z/(2 sin(pi z)) or z/(2 sin(pi (z-1)/2)); real and positive on the real strip
inline cx sqrt_base(Prefactor k, const cx& z) {
    if (k == Prefactor::C) return z / (2 * sin(pi() * z));
    return z / (2 * sin(pi() * (z - 1) / 2));
}

// square root continued from the real axis along the vertical segment to z
inline cx continued_sqrt(Prefactor k, const cx& z) {
    cx cur = sqrt(sqrt_base(k, cx(z.re)));
    const int steps = 64;
    for (int i = 1; i <= steps; ++i) {
        cx s = sqrt(sqrt_base(k, cx(z.re, z.im * i / steps)));
        if ((s * conj(cur)).re < 0) s = -s;
        cur = s;
    }
    return cur;
}
}  // namespace detail

inline cx prefactor(Prefactor kind, const cx& z) {
    detail::strip_check(kind, z);
    real p = pi();
    switch (kind) {
    case Prefactor::C: return detail::continued_sqrt(kind, z) * exp(cx(0, -p / 2) * z);
    case Prefactor::Cstar: return expi(-3 * p / 4) * sqrt(z);
    case Prefactor::D: return detail::continued_sqrt(kind, z) * exp(cx(0, -p / 4) * (z + 3));
    case Prefactor::Dstar:
        return 2 * sin(p * (z - 1) / 2) * detail::continued_sqrt(kind, z) * exp(cx(0, p / 4) * (z - 1));
    }
    return cx();
}

// prefactor as a function near an anchor; the sqrt branch is fixed by its value at the anchor
inline cfun prefactor_near(Prefactor kind, const cx& anchor) {
    if (kind == Prefactor::Cstar) return [](const cx& z) { return prefactor(Prefactor::Cstar, z); };
    cx ref = detail::continued_sqrt(kind, anchor);
    return [kind, ref](const cx& z) {
        real p = pi();
        cx s = sqrt(detail::sqrt_base(kind, z));
        if ((s * conj(ref)).re < 0) s = -s;
        switch (kind) {
        case Prefactor::C: return s * exp(cx(0, -p / 2) * z);
        case Prefactor::D: return s * exp(cx(0, -p / 4) * (z + 3));
        default: return 2 * sin(p * (z - 1) / 2) * s * exp(cx(0, p / 4) * (z - 1));
        }
    };
}

// ---------------------------------------------------------------- phi series

// phi_{sigma,0} continued off the real line
inline cx phi0(const cx& z) {
    real p = pi();
    cx e = exp(cx(0, 2 * p) * z);
    return (p * p / 6 - dilog(e) + 6 * p * p - cx(0, 2 * p) * z * log(1 - e)) / (4 * p * p);
}

inline cx phi_series(long sigma, long ell, const cx& z) {
    if (ell < 0) throw std::invalid_argument("phi_series: ell >= 0");
    real p = pi();
    if (ell == 0) return phi0(z);
    if (ell == 1) return z * z * cot(p * z) / cx(0, 4) + z * z / 4 - 5 * z / cx(0, 4 * p);
    if (ell & 1) return cx();
    cx v = z * g_kernel(Kernel::g_tilde, ell / 2, z) / cx(0, 2 * p);
    if (ell == 2) v -= real(sigma) * z * z;
    return v;
}

// phi(N, k, sigma) at z = N/k without the remainder: the l = 0, 1 terms, -sigma z^2/N^2 and g~_1 .. g~_{L-1}
inline cx phi_truncated(long N, long k, long sigma, long L) {
    if (L < 1) throw std::invalid_argument("phi_truncated: L >= 1");
    cx z(real(N) / k);
    real n = N;
    cx s = phi_series(sigma, 0, z) + phi_series(sigma, 1, z) / n - real(sigma) * z * z / (n * n);
    for (long ell = 1; ell < L; ++ell)
        s += z * g_kernel(Kernel::g_tilde, ell, z) / (cx(0, 2 * pi()) * bmp::pow(n, 2 * ell));
    return s;
}

// bound on |phi - phi_truncated|, m = N - 2k
inline real phi_error_bound(long N, long k, long L) {
    long m = N - 2 * k;
    real e = bmp::exp(real(1));
    return 2 * pi() * pi() * (2 * L - 1) * bmp::pow((2 * L - 1) / (2 * pi() * e * m), 2 * L - 1);
}

// ---------------------------------------------------------------- coefficient tables

enum class ExpansionKind { C2, C2star, D1, E1 };
enum class TableKind { C2, C2star, D1odd, D1even, E1 };

inline const char* kind_name(TableKind k) {
    switch (k) {
    case TableKind::C2: return "C2";
    case TableKind::C2star: return "C2star";
    case TableKind::D1odd: return "D1odd";
    case TableKind::D1even: return "D1even";
    case TableKind::E1: return "E1";
    }
    return "?";
}

struct ExpansionResult {
    cx w;                       // the sum behaves like Re[w^{-N} ...]
    std::optional<int> parity;  // N mod 2 for D1
    std::vector<cx> coeffs;
    ExpansionKind kind = ExpansionKind::C2;
    cx zstar;
    long sigma = 1;
};

// closed forms of the leading coefficients
inline cx c0_closed() {
    cx z = saddle_point(0, 2, 4).zstar;
    return -z * exp(cx(0, -pi()) * z) / 2;
}
inline cx c0star_closed() {
    cx z = saddle_point(1, 3, 4).zstar;
    return -z * exp(cx(0, -pi()) * z) / 4;
}
inline cx e0_closed() { return 3 * c0_closed(); }
inline cx d0_squared(int parity) {
    cx z = saddle_point(0, 1, 4).zstar;
    cx e = exp(cx(0, -pi()) * z);
    return 2 * z * z * e * (e + real(parity ? -1 : 1));
}
inline cx b0_constant() {
    cx z = saddle_point(0, 1, 4).zstar;
    return 2 * z * exp(cx(0, -pi()) * z);
}

namespace detail {

inline TruncSeries series_of(const cfun& f, const cx& c, long order) { return taylor_coeffs(f, c, taylor_radius(c), order); }

// u_j as series about c, j <= jmax
inline std::vector<TruncSeries> u_series(UKind kind, long sigma, long jmax, const cx& c, long order) {
    std::vector<TruncSeries> A(jmax + 1, TruncSeries::constant(c, cx(), order));
    for (long ell = 1; 2 * ell - 1 <= jmax; ++ell)
        A[2 * ell - 1] = series_of([kind, ell](const cx& z) { return g_kernel(ukernel(kind), ell, z); }, c, order);
    if (jmax >= 1) {
        cx lin = ulinear(kind, sigma);
        A[1][0] += lin * c;
        A[1][1] += lin;
    }
    return exp_compose(A, jmax, TruncSeries::constant(c, cx(1), order));
}

// sum_{s<=t} Gamma(s+1/2) a_{2s}(q * u_{t-s}) for t <= tmax
inline std::vector<cx> saddle_sums(const TruncSeries& pser, const TruncSeries& q, const std::vector<TruncSeries>& u,
                                   const cx& omega, long tmax) {
    std::vector<cx> out(tmax + 1);
    for (long t = 0; t <= tmax; ++t)
        for (long s = 0; s <= t; ++s)
            out[t] += bmp::tgamma(real(s) + real(0.5)) * wojdylo_a2s(pser, q * u[t - s], omega, s);
    return out;
}

inline void gate(const cx& got, const cx& want, const char* what) {
    real tol = pow2(-static_cast<long>(precision_bits()) / 2);
    if (!(abs(got - want) <= tol * rmax(abs(want), real(1))))
        throw numeric_error(std::string("coeff_table: leading coefficient check failed for ") + what + ": " +
                            to_string(got, 12) + " vs " + to_string(want, 12));
}

}  // namespace detail

// Coefficients t = 0..tmax of the asymptotic expansion.
inline ExpansionResult coeff_table(TableKind kind, long sigma, long tmax) {
    if (tmax < 0) throw std::invalid_argument("coeff_table: tmax >= 0");
    long order = 2 * tmax + 4;
    ExpansionResult res;
    res.sigma = sigma;
    switch (kind) {
    case TableKind::C2:
    case TableKind::E1: {
        auto ctx = saddle_point(0, 2, order);
        cx c = ctx.zstar;
        auto q = detail::series_of(prefactor_near(Prefactor::C, c), c, order);
        auto u = detail::u_series(UKind::C, sigma, tmax, c, order);
        res.zstar = c;
        res.w = ctx.w;
        if (kind == TableKind::C2) {
            res.kind = ExpansionKind::C2;
            res.coeffs = detail::saddle_sums(ctx.pseries, q, u, ctx.omega, tmax);
            detail::gate(res.coeffs[0], c0_closed(), "C2");
        } else {
            res.kind = ExpansionKind::E1;
            res.coeffs.assign(tmax + 1, cx());
            for (long k = 0; k <= tmax; ++k) {
                auto ph = detail::series_of([sigma, k](const cx& z) { return phi_series(sigma, k, z); }, c, order);
                auto part = detail::saddle_sums(ctx.pseries, q * ph, u, ctx.omega, tmax - k);
                for (long t = k; t <= tmax; ++t) res.coeffs[t] += 2 * part[t - k];
            }
            detail::gate(res.coeffs[0], e0_closed(), "E1");
        }
        break;
    }
    case TableKind::C2star: {
        auto ctx = saddle_point(1, 3, order);
        cx c = ctx.zstar;
        auto q = detail::series_of(prefactor_near(Prefactor::Cstar, c), c, order);
        q = cx(0, 1) * q;
        auto u = detail::u_series(UKind::Cstar, sigma, tmax, c, order);
        auto inner = detail::saddle_sums(ctx.pseries, q, u, ctx.omega, tmax);
        cx f = exp(-p_d(1, c) / 2) / 2;
        for (auto& v : inner) v *= f;
        res.kind = ExpansionKind::C2star;
        res.zstar = c;
        res.w = ctx.w;
        res.coeffs = shift_series_basis(inner, rat(1, 2));
        detail::gate(res.coeffs[0], c0star_closed(), "C2star");
        break;
    }
    case TableKind::D1odd:
    case TableKind::D1even: {
        auto ctx = saddle_point(0, 1, order);
        cx c = ctx.zstar;
        TruncSeries half = cx(real(0.5)) * ctx.pseries;
        auto u = detail::u_series(UKind::D, sigma, tmax, c, order);
        res.kind = ExpansionKind::D1;
        res.zstar = c;
        res.w = exp(p_d(0, c) / 2);
        if (!(res.w.re > 0)) throw numeric_error("coeff_table: exp(p(z0)/2) has non-positive real part");
        if (kind == TableKind::D1odd) {
            res.parity = 1;
            auto q = detail::series_of(prefactor_near(Prefactor::D, c), c, order);
            res.coeffs = detail::saddle_sums(half, q, u, ctx.omega, tmax);
            for (auto& v : res.coeffs) v *= real(-2);
        } else {
            res.parity = 0;
            auto q = cx(0, 1) * detail::series_of(prefactor_near(Prefactor::Dstar, c), c, order);
            auto inner = detail::saddle_sums(half, q, u, ctx.omega, tmax);
            cx f = -2 * exp(-p_d(0, c) / 2);
            for (auto& v : inner) v *= f;
            res.coeffs = shift_series_basis(inner, rat(1));
        }
        detail::gate(res.coeffs[0] * res.coeffs[0], d0_squared(*res.parity), "D1");
        break;
    }
    }
    return res;
}

// Re[w^{-N}/N^2 sum_{t<m} coeffs[t]/N^t]
inline real eval_expansion(const ExpansionResult& res, long N, long m) {
    if (m < 1 || m > static_cast<long>(res.coeffs.size())) throw std::invalid_argument("eval_expansion: need 1 <= m <= tmax+1");
    if (res.parity && (N & 1) != *res.parity) throw std::invalid_argument("eval_expansion: N has the wrong parity");
    cx s, Np(1);
    real Nr = N;
    for (long t = 0; t < m; ++t) {
        s += res.coeffs[t] / Np;
        Np *= Nr;
    }
    return (pow(cx(1) / res.w, N) * s / (Nr * Nr)).re;
}

inline Subset subset_of(ExpansionKind k) {
    switch (k) {
    case ExpansionKind::C2: return Subset::C2;
    case ExpansionKind::C2star: return Subset::C2star;
    case ExpansionKind::D1: return Subset::D;
    case ExpansionKind::E1: return Subset::E;
    }
    return Subset::C;
}

inline TableKind table_kind(ExpansionKind k, long N) {
    switch (k) {
    case ExpansionKind::C2: return TableKind::C2;
    case ExpansionKind::C2star: return TableKind::C2star;
    case ExpansionKind::D1: return (N & 1) ? TableKind::D1odd : TableKind::D1even;
    case ExpansionKind::E1: return TableKind::E1;
    }
    return TableKind::C2;
}

struct Comparison {
    real direct, approx, abserr;
};

inline Comparison compare(ExpansionKind kind, long sigma, long N, long m) {
    auto res = coeff_table(table_kind(kind, N), sigma, std::max<long>(m - 1, 0));
    real a = eval_expansion(res, N, m);
    real d = subset_sum(subset_of(kind), sigma, N);
    return {d, a, bmp::abs(d - a)};
}

// D1 leading-term sign: which of +-sqrt(d0^2) tracks the direct sum better at N.
inline int d0_sign_by_direct(long N, long sigma = 1) {
    auto res = coeff_table((N & 1) ? TableKind::D1odd : TableKind::D1even, sigma, 0);
    real d = subset_sum(Subset::D, sigma, N);
    real a = eval_expansion(res, N, 1);
    return bmp::abs(d - a) <= bmp::abs(d + a) ? 1 : -1;
}

}  // namespace rpf
