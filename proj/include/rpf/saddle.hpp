#pragma once

// The phase functions p_d, their saddle points, polygonal paths through them, path checks,
// and the steepest-descent coefficients a_{2s}.

#include "specfun.hpp"

namespace rpf {

inline bool on_cut(const cx& z) {
    real r = bmp::round(z.re);
    return z.re == r && z.im <= 0;
}

// p_d(z) = (-Li2(e^{2 pi i z}) + Li2(1) + 4 pi^2 d)/(2 pi i z)
inline cx p_d(long d, const cx& z) {
    if (on_cut(z)) throw std::invalid_argument("p_d: z lies on a branch cut");
    real p = pi();
    cx e = exp(cx(0, 2 * p) * z);
    return (-dilog(e) + p * p / 6 + 4 * p * p * d) / (cx(0, 2 * p) * z);
}

// 2 pi i z^2 p_d'(z) = Li2(e) - Li2(1) - 4 pi^2 d + 2 pi i z log(1 - e)
inline cx p_d_deriv(long d, const cx& z) {
    if (on_cut(z)) throw std::invalid_argument("p_d_deriv: z lies on a branch cut");
    real p = pi();
    cx tpi(0, 2 * p);
    cx e = exp(tpi * z);
    return (dilog(e) - p * p / 6 - 4 * p * p * d + tpi * z * log(1 - e)) / (tpi * z * z);
}

// p'' = -(2 p' + 2 pi i e/(1 - e))/z
inline cx p_d_second(long d, const cx& z) {
    cx tpi(0, 2 * pi());
    cx e = exp(tpi * z);
    return -(2 * p_d_deriv(d, z) + tpi * e / (1 - e)) / z;
}

// radius for Taylor sampling: 0.4 times the distance to the nearest integer
inline real taylor_radius(const cx& z) {
    real fr = z.re - bmp::round(z.re);
    return real(0.4) * bmp::hypot(fr, z.im);
}

struct SaddleContext {
    long d = 0, m = 0;
    cx zstar, w, omega;
    TruncSeries pseries;
    real residual;  // |p_d'(zstar)|
};

inline SaddleContext saddle_point(long d, long m, long order = 24) {
    if (!(-std::labs(m) < 2 * d && 2 * d <= std::labs(m)) || m == 0)
        throw std::invalid_argument("saddle_point: need -|m|/2 < d <= |m|/2, m != 0");
    SaddleContext c;
    c.d = d;
    c.m = m;
    c.w = dilog_zero(d, -m).w;
    c.zstar = cx(real(m)) + log(1 - c.w) / cx(0, 2 * pi());
    c.omega = c.zstar;
    c.residual = abs(p_d_deriv(d, c.zstar));
    c.pseries = taylor_coeffs([d](const cx& z) { return p_d(d, z); }, c.zstar, taylor_radius(c.zstar), order);
    return c;
}

// ---------------------------------------------------------------- paths

enum class PathKind { P, Q, R, S };

struct PathSpec {
    PathKind kind = PathKind::Q;
    long d = 0, m = 2;
    std::vector<cx> vertices;
    size_t saddle_index = 1;  // segment vertices[i] -> vertices[i+1] carries the saddle
    cx zstar;
    real v;
};

inline const char* path_name(PathKind k) {
    switch (k) {
    case PathKind::P: return "P";
    case PathKind::Q: return "Q";
    case PathKind::R: return "R";
    case PathKind::S: return "S";
    }
    return "?";
}

// d and m of the saddle each path passes through
inline std::pair<long, long> path_saddle(PathKind k) {
    switch (k) {
    case PathKind::P: return {0, 1};
    case PathKind::Q: return {0, 2};
    case PathKind::R: return {0, 3};
    case PathKind::S: return {1, 3};
    }
    return {0, 0};
}

inline PathSpec build_path(PathKind kind) {
    auto [d, m] = path_saddle(kind);
    PathSpec p;
    p.kind = kind;
    p.d = d;
    p.m = m;
    cx w = dilog_zero(d, -m).w;
    p.zstar = cx(real(m)) + log(1 - w) / cx(0, 2 * pi());
    p.v = p.zstar.im / p.zstar.re;
    cx c(real(1), p.v);
    real a = real(m) + real(1) / 100, b = real(m) + real(49) / 100;
    p.vertices = {cx(a), c * a, c * b, cx(b)};
    p.saddle_index = 1;
    return p;
}

// ---------------------------------------------------------------- ray derivative bounds

struct Interval {
    real lo, hi;
};

inline Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval imul(const Interval& a, const Interval& b) {
    real c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    real lo = c[0], hi = c[0];
    for (auto& x : c) lo = rmin(lo, x), hi = rmax(hi, x);
    return {lo, hi};
}

// range of cos over [a, b]
inline Interval cos_range(const real& a, const real& b) {
    real p = pi();
    real lo = rmin(bmp::cos(a), bmp::cos(b)), hi = rmax(bmp::cos(a), bmp::cos(b));
    // interior extrema at multiples of pi
    real k = bmp::ceil(a / p);
    for (; k * p <= b; k += 1) {
        long kk = static_cast<long>(k.convert_to<long long>());
        if (kk % 2 == 0) hi = 1;
        else lo = -1;
    }
    return {lo, hi};
}

enum class RayDerivative { first, second };

struct RayBound {
    real lower, upper;
};

// Envelope bound for d/dt or d^2/dt^2 of Re p_d(ct), c = 1 + iv, over v in [v_lo, v_hi] and t in [t_lo, t_hi]
// split into n pieces, using the first L-1 Fourier terms plus the tail bound.
inline RayBound ray_deriv_bounds(long d, const real& v_lo, const real& v_hi, const real& t_lo, const real& t_hi, long L,
                                 long n, RayDerivative which) {
    if (!(v_lo > 0) || v_hi < v_lo) throw std::invalid_argument("ray_deriv_bounds: need 0 < v_lo <= v_hi");
    if (L < 2 || n < 1 || !(t_lo > 0) || t_hi <= t_lo) throw std::invalid_argument("ray_deriv_bounds: bad L, n or t");
    real p = pi();
    real rho1 = bmp::sqrt(1 + v_lo * v_lo), rho2 = bmp::sqrt(1 + v_hi * v_hi);
    real s1 = v_lo / rho1, s2 = v_hi / rho2;  // sin theta
    real c1 = 1 / rho1, c2 = 1 / rho2;        // cos theta (c2 < c1)
    real kappa = p * (24 * d + 1);
    RayBound out{real(0), real(0)};
    bool first = true;
    for (long j = 1; j <= n; ++j) {
        real a = t_lo + (t_hi - t_lo) * (j - 1) / n, b = t_lo + (t_hi - t_lo) * j / n;
        Interval sum{0, 0};
        Interval sr{s1 / rho2, s2 / rho1};
        real tail;
        if (which == RayDerivative::second) {
            sum = imul({-kappa / 6, -kappa / 6}, imul(sr, {1 / (b * b * b), 1 / (a * a * a)}));
            for (long m = 1; m < L; ++m) {
                auto A = [&](const real& t, const real& v, const real& s, const real& r1, const real& r2) {
                    return bmp::exp(-2 * p * m * v * t) * (2 / (m * t * t) + s * (2 * p * r1 / t + 1 / (m * m * p * r2 * t * t * t)));
                };
                auto B = [&](const real& t, const real& v, const real& c, const real& r) {
                    return bmp::exp(-2 * p * m * v * t) * c * (2 * p * r / t - 1 / (m * m * p * r * t * t * t));
                };
                Interval Ai{A(b, v_hi, s1, rho1, rho2), A(a, v_lo, s2, rho2, rho1)};
                Interval Bi{B(b, v_hi, c2, rho1), B(a, v_lo, c1, rho2)};
                sum = sum + imul(Ai, cos_range(2 * p * m * a, 2 * p * m * b));
                sum = sum + imul(Bi, cos_range(2 * p * m * a - p / 2, 2 * p * m * b - p / 2));
            }
            tail = bmp::exp(-2 * p * L * v_lo * a) / (1 - bmp::exp(-2 * p * v_lo * a)) *
                   (1 / (p * rho1 * L * L * a * a * a) + 2 / (L * a * a) + 2 * p * rho2 / a);
        } else {
            sum = imul({kappa / 12, kappa / 12}, imul(sr, {1 / (b * b), 1 / (a * a)}));
            for (long m = 1; m < L; ++m) {
                real e_lo_b = bmp::exp(-2 * p * m * v_hi * b), e_hi_a = bmp::exp(-2 * p * m * v_lo * a);
                Interval Ci{e_lo_b * (1 / (m * b) + s1 / (2 * p * m * m * rho2 * b * b)),
                            e_hi_a * (1 / (m * a) + s2 / (2 * p * m * m * rho1 * a * a))};
                Interval Di{e_lo_b * c2 / (2 * p * m * m * rho2 * b * b), e_hi_a * c1 / (2 * p * m * m * rho1 * a * a)};
                Interval negcos = cos_range(2 * p * m * a, 2 * p * m * b);
                negcos = {-negcos.hi, -negcos.lo};
                sum = sum + imul(Ci, negcos);
                sum = sum + imul(Di, cos_range(2 * p * m * a - p / 2, 2 * p * m * b - p / 2));
            }
            tail = bmp::exp(-2 * p * L * v_lo * a) / (1 - bmp::exp(-2 * p * v_lo * a)) *
                   (1 / (2 * p * rho1 * L * L * a * a) + 1 / (L * a));
        }
        real lo = sum.lo - tail, hi = sum.hi + tail;
        if (first || lo < out.lower) out.lower = lo;
        if (first || hi > out.upper) out.upper = hi;
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------- path verification

struct PathOptions {
    long samples = 1000;
    real disk = real(1e-3);
    real window = real(0.005);  // v window half-width around Im z*/Re z*
    long L = 3;
    long n = 10;
};

struct PathCheck {
    bool ok = false;
    real margin;           // min Re(p - p(z*)) on the path outside the disk
    std::string failure;   // offending segment
    bool middle_certified = false;  // middle segment handled by the ray envelopes
};

namespace detail {
// Lipschitz-corrected sampled minimum of f on [0,1] along a segment
inline real sampled_min(const std::function<real(const real&)>& f, const std::function<real(const real&)>& df_abs,
                        long samples, real& raw_min) {
    real h = real(1) / samples, lip = 0;
    raw_min = f(real(0));
    for (long i = 0; i <= samples; ++i) {
        real s = h * i;
        raw_min = rmin(raw_min, f(s));
        lip = rmax(lip, df_abs(s));
    }
    return raw_min - lip * h;  // |f'| sampled; the same grid bounds the gap between nodes
}
}  // namespace detail

// Checks Re(p_d(z) - p_d(z*)) > 0 on the path except at z*.
inline PathCheck verify_path(const PathSpec& path, const PathOptions& opt = {}) {
    PathCheck out;
    long d = path.d;
    cx pstar = p_d(d, path.zstar);
    auto gap = [&](const cx& z) { return (p_d(d, z) - pstar).re; };
    real margin = -1;
    bool have = false;
    auto note_margin = [&](const cx& z) {
        if (abs(z - path.zstar) < opt.disk) return;
        real g = gap(z);
        if (!have || g < margin) margin = g, have = true;
    };

    // side segments: sampled minimum with a Lipschitz correction
    for (size_t seg = 0; seg + 1 < path.vertices.size(); ++seg) {
        if (seg == path.saddle_index) continue;
        cx a = path.vertices[seg], b = path.vertices[seg + 1];
        cx dir = b - a;
        real raw;
        real certified = detail::sampled_min([&](const real& s) { return gap(a + dir * s); },
                                             [&](const real& s) { return abs(p_d_deriv(d, a + dir * s) * dir); },
                                             opt.samples, raw);
        for (long i = 0; i <= opt.samples; ++i) note_margin(a + dir * (real(i) / opt.samples));
        if (!(certified > 0)) {
            out.failure = "segment " + std::to_string(seg) + " (sampled minimum " + to_string(raw, 6) + ")";
            out.margin = have ? margin : raw;
            return out;
        }
    }

    // middle segment along the ray c t: unique minimum at t* = Re z*
    cx a = path.vertices[path.saddle_index], b = path.vertices[path.saddle_index + 1];
    cx c(real(1), path.v);
    real ta = a.re, tb = b.re, ts = path.zstar.re;
    for (long i = 0; i <= opt.samples; ++i) note_margin(a + (b - a) * (real(i) / opt.samples));
    bool ok_mid = true;
    if (path.v > 0) {
        // pieces certified convex, increasing (right of t*) or decreasing (left of t*)
        long pieces = 48;
        real v1 = path.v - opt.window, v2 = path.v + opt.window;
        real h = (tb - ta) / pieces;
        for (long i = 0; i < pieces && ok_mid; ++i) {
            real lo = ta + h * i, hi = lo + h;
            auto second = ray_deriv_bounds(d, v1, v2, lo, hi, opt.L, 4, RayDerivative::second);
            if (second.lower > 0) continue;
            auto first = ray_deriv_bounds(d, v1, v2, lo, hi, opt.L, 4, RayDerivative::first);
            if (lo >= ts && first.lower > 0) continue;
            if (hi <= ts && first.upper < 0) continue;
            ok_mid = false;
            out.failure = "middle segment near t = " + to_string(lo, 6);
        }
        // convex pieces must form one block containing t*
        if (ok_mid) {
            bool seen_convex = false, left_block = false;
            for (long i = 0; i < pieces; ++i) {
                real lo = ta + h * i, hi = lo + h;
                bool convex = ray_deriv_bounds(d, v1, v2, lo, hi, opt.L, 4, RayDerivative::second).lower > 0;
                bool contains = lo <= ts && ts <= hi;
                if (contains && !convex) {
                    // t* in a monotone piece is impossible since the derivative vanishes there
                    ok_mid = false;
                    out.failure = "middle segment: saddle piece not convex";
                }
                if (convex && left_block) {
                    ok_mid = false;
                    out.failure = "middle segment: convex pieces not contiguous";
                }
                if (convex) seen_convex = true;
                if (!convex && seen_convex) left_block = true;
            }
        }
        out.middle_certified = ok_mid;
    } else {
        // sampled derivative sign test along the ray
        long ns = opt.samples;
        real h = (tb - ta) / ns;
        real maxsec = 0;
        for (long i = 0; i <= ns; ++i) maxsec = rmax(maxsec, abs(c * c * p_d_second(d, c * (ta + h * i))));
        for (long i = 0; i <= ns && ok_mid; ++i) {
            real t = ta + h * i;
            real f1 = (c * p_d_deriv(d, c * t)).re;
            real slack = maxsec * h;
            // sign of the derivative away from t*, convexity where it is too small to resolve
            bool mono = t > ts ? f1 > slack : f1 < -slack;
            if (!mono && !((c * c * p_d_second(d, c * t)).re > 0)) ok_mid = false;
            if (!ok_mid) out.failure = "middle segment near t = " + to_string(t, 6);
        }
    }
    out.margin = margin;
    out.ok = ok_mid && have && margin > 0;
    if (ok_mid && !(margin > 0) && out.failure.empty()) out.failure = "non-positive margin";
    return out;
}

// ---------------------------------------------------------------- steepest descent coefficients

// sqrt with positive real part (imaginary part >= 0 on the imaginary axis)
inline cx sqrt_right(const cx& x) {
    cx s = sqrt(x);
    if (s.re < 0 || (s.re == 0 && s.im < 0)) s = -s;
    return s;
}

// a_{2s} for p(z) = p(z0) + p0 t^2 + p1 t^3 + ..., q(z) = q0 + q1 t + ...; pseries holds the full Taylor series.
inline cx wojdylo_a2s(const TruncSeries& pseries, const TruncSeries& qseries, const cx& omega, long s) {
    if (s < 0) throw std::invalid_argument("wojdylo_a2s: s < 0");
    if (static_cast<long>(pseries.order()) < 2 * s + 3 || static_cast<long>(qseries.order()) < 2 * s + 1)
        throw std::invalid_argument("wojdylo_a2s: series too short");
    cx p0 = pseries[2];
    if (p0.re == 0 && p0.im == 0) throw numeric_error("wojdylo_a2s: p0 = 0, not a simple saddle");
    std::vector<cx> args;
    for (long k = 3; k < 3 + 2 * s; ++k) args.push_back(pseries[k]);
    auto bell = ordinary_bell_table(2 * s, args);
    cx pre = omega / (2 * sqrt_right(omega * omega * p0));
    cx p0inv = cx(1) / p0;
    cx total;
    for (long i = 0; i <= 2 * s; ++i) {
        cx inner;
        for (long j = 0; j <= i; ++j) {
            cx bj = binomial_general(cx(real(-s) - real(0.5)), j);
            inner += pow(p0inv, s + j) * bj * bell[i][j];
        }
        total += qseries[2 * s - i] * inner;
    }
    return pre * total;
}

// a_0 and a_2 closed forms
inline cx wojdylo_a0(const TruncSeries& p, const TruncSeries& q, const cx& omega) {
    return omega / (2 * sqrt_right(omega * omega * p[2])) * q[0];
}
inline cx wojdylo_a2(const TruncSeries& p, const TruncSeries& q, const cx& omega) {
    cx p0 = p[2], p1 = p[3], p2 = p[4];
    cx body = q[2] / p0 - real(1.5) * (p1 * q[1] + p2 * q[0]) / (p0 * p0) + real(15) / 8 * p1 * p1 * q[0] / (p0 * p0 * p0);
    return omega / (2 * sqrt_right(omega * omega * p0)) * body;
}

// 2 Gamma(s+1/2) a_{2s}, s < S: the integral is e^{-N p(z0)} sum_s terms[s]/N^{s+1/2}
inline std::vector<cx> steepest_expansion(const TruncSeries& pseries, const TruncSeries& qseries, const cx& omega, long S) {
    std::vector<cx> out(S);
    for (long s = 0; s < S; ++s) out[s] = 2 * bmp::tgamma(real(s) + real(0.5)) * wojdylo_a2s(pseries, qseries, omega, s);
    return out;
}

inline std::vector<cx> steepest_expansion(const SaddleContext& ctx, const cfun& q, long S) {
    long order = std::max<long>(2 * S + 3, static_cast<long>(ctx.pseries.order()));
    auto qs = taylor_coeffs(q, ctx.zstar, taylor_radius(ctx.zstar), order);
    return steepest_expansion(ctx.pseries, qs, ctx.omega, S);
}

}  // namespace rpf
