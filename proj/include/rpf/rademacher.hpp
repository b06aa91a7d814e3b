#pragma once

// Residue coefficients Q_{hk sigma}(N) of e^{2 pi i sigma z}/prod_{j<=N}(1 - e^{2 pi i j z}),
// the partial-fraction coefficients C_{hk l}(N), Farey subsets and the |Q| bounds.

#include "sineprod.hpp"

namespace rpf {

struct FareyFrac {
    long h = 0, k = 1;
    bool operator==(const FareyFrac&) const = default;
};

// Fractions 0 <= h/k < 1 with k <= N, ordered by k then h.
inline std::vector<FareyFrac> farey(long N) {
    std::vector<FareyFrac> out;
    for (long k = 1; k <= N; ++k)
        for (long h = 0; h < k; ++h)
            if (std::gcd(h, k) == 1) out.push_back({h, k});
    return out;
}

enum class QMethod { exact_recursion, simple_pole, double_pole, laurent };

inline const char* method_name(QMethod m) {
    switch (m) {
    case QMethod::exact_recursion: return "exact-recursion";
    case QMethod::simple_pole: return "simple-pole";
    case QMethod::double_pole: return "double-pole";
    case QMethod::laurent: return "laurent";
    }
    return "?";
}

struct QValue {
    FareyFrac frac;
    long sigma = 0, N = 0;
    cx value;
    QMethod method = QMethod::exact_recursion;
};

inline void check_frac(long h, long k) {
    if (k < 1 || h < 0 || h >= k || std::gcd(h, k) != 1) throw std::invalid_argument("need 0 <= h < k with gcd(h,k) = 1");
}

// ---------------------------------------------------------------- exact recursion

// E_k(n, m; r) for 0 <= n <= Nmax, 0 <= m < Nmax, 0 <= r < k.
class EkTable {
public:
    EkTable(long k, long Nmax) : k_(k), Nmax_(Nmax) {
        if (k < 1 || Nmax < 0) throw std::invalid_argument("ek_table: need k >= 1, N >= 0");
        long M = std::max<long>(Nmax, 1);
        // B_a(j/k) k^{a-1}/a!
        std::vector<std::vector<rat>> bk(M, std::vector<rat>(k));
        for (long a = 0; a < M; ++a) {
            rat scale = rat(1) / rat(factorial(a));
            if (a == 0) scale /= k;
            else scale *= rat(pow_big(k, a - 1));
            for (long j = 0; j < k; ++j) {
                rat v = bernoulli_poly(a, rat(j, k)) * scale;
                v.canonicalize();
                bk[a][j] = v;
            }
        }
        rows_.resize(Nmax + 1);
        rows_[0].assign(M, std::vector<rat>(k, 0));
        rows_[0][0][0] = 1;
        for (long n = 1; n <= Nmax; ++n) {
            auto& cur = rows_[n];
            cur.assign(M, std::vector<rat>(k, 0));
            const auto& prev = rows_[n - 1];
            rat npow = 1;
            for (long a = 0; a < M; ++a) {
                // T[m'][r] = sum_j prev[m'][(r - n j) mod k] B_a(j/k) k^{a-1}/a!
                for (long mp = 0; mp + a < M; ++mp) {
                    bool any = false;
                    for (long r = 0; r < k; ++r)
                        if (sgn(prev[mp][r]) != 0) { any = true; break; }
                    if (!any) continue;
                    for (long r = 0; r < k; ++r) {
                        rat s = 0;
                        for (long j = 0; j < k; ++j) {
                            const rat& e = prev[mp][mod(r - n * j, k)];
                            if (sgn(e) != 0 && sgn(bk[a][j]) != 0) s += e * bk[a][j];
                        }
                        if (sgn(s) != 0) cur[mp + a][r] += npow * s;
                    }
                }
                npow *= n;
            }
            for (auto& row : cur)
                for (auto& v : row) v.canonicalize();
        }
    }
    long k() const { return k_; }
    long Nmax() const { return Nmax_; }
    const rat& operator()(long n, long m, long r) const { return rows_.at(n).at(m).at(r); }

private:
    static bigint pow_big(long b, long e) {
        bigint r;
        mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e));
        return r;
    }
    long k_, Nmax_;
    std::vector<std::vector<std::vector<rat>>> rows_;
};

inline EkTable ek_table(long N, long k) { return EkTable(k, N); }

// Q from a prebuilt table (table.Nmax() >= N).
inline QValue q_exact(const EkTable& t, long h, long sigma, long N) {
    long k = t.k();
    check_frac(h, k);
    if (N < 1 || N > t.Nmax() || k > N) throw std::invalid_argument("q_exact: need 1 <= k <= N <= table size");
    cx sum;
    bigint fact = 1;
    for (long r = 0; r < k; ++r) {
        rat s = 0, sp = 1;
        fact = 1;
        for (long j = 0; j <= N - 1; ++j) {
            if (j > 0) {
                sp *= sigma;
                fact *= j;
            }
            const rat& e = t(N, N - 1 - j, r);
            if (sgn(e) != 0) s += sp / rat(fact) * e;
        }
        if (sgn(s) == 0) continue;
        sum += expi_pi_frac(2 * (r + sigma) * h, k) * to_real(s);
    }
    rat pre = rat(N & 1 ? -1 : 1) / rat(factorial(N));
    return {{h, k}, sigma, N, sum * to_real(pre), QMethod::exact_recursion};
}

inline QValue q_exact(long h, long k, long sigma, long N) { return q_exact(EkTable(k, N), h, sigma, N); }

// ---------------------------------------------------------------- closed forms

// N/2 < k <= N
inline QValue q_simple(long h, long k, long sigma, long N) {
    check_frac(h, k);
    if (!(2 * k > N && k <= N)) throw std::invalid_argument("q_simple: need N/2 < k <= N");
    // phase exponent in units of pi/(2k)
    long long n = -static_cast<long long>(h) * (static_cast<long long>(N) * N + N - 4LL * sigma) +
                  static_cast<long long>(k) * (2LL * N * h + N + h + k - static_cast<long long>(h) * k);
    cx v = expi_pi_frac(n, 2 * k) * (sine_product_inv(h, k, N - k) / (real(k) * k));
    if (!(k & 1)) v = -v;
    return {{h, k}, sigma, N, v, QMethod::simple_pole};
}

// phi(N,k,sigma) with the cotangent sum taken directly
inline cx phi_direct(long N, long k, long sigma) {
    real p = pi();
    std::vector<real> c(k);
    for (long r = 1; r < k; ++r) c[r] = bmp::cos(p * r / k) / bmp::sin(p * r / k);
    real s = 0;
    for (long j = 1; j <= N; ++j) {
        long r = j % k;
        if (r) s += j * c[r];
    }
    // (1/(2 pi i k)) sum (pi j/k) cot(pi j/k) = -i s/(2 k^2)
    real re = real(static_cast<long long>(N) * N + N - 4LL * sigma) / (4 * real(k) * k);
    return cx(re, -s / (2 * real(k) * k));
}

// N/3 < k <= N/2, h in {1, k-1}
inline QValue q_double(long k, long sigma, long N, long h = 1) {
    if (!(3 * k > N && 2 * k <= N)) throw std::invalid_argument("q_double: need N/3 < k <= N/2");
    if (h != 1 && h != k - 1) throw std::invalid_argument("q_double: need h = 1 or k - 1");
    long long n = -(static_cast<long long>(N) * N + N) + static_cast<long long>(N) * k - 2LL * k * k + 4LL * sigma;
    cx v = phi_direct(N, k, sigma) * expi_pi_frac(n, 2 * k) * (sine_product_inv(1, k, N - 2 * k) / (2 * real(k) * k));
    if (h != 1) v = conj(v);
    return {{h, k}, sigma, N, v, QMethod::double_pole};
}

// Double pole for arbitrary h.
inline QValue q_double_general(long h, long k, long sigma, long N) {
    check_frac(h, k);
    if (!(3 * k > N && 2 * k <= N)) throw std::invalid_argument("q_double_general: need N/3 < k <= N/2");
    real twopi = 2 * pi();
    cx s;
    for (long m = 1; m <= N; ++m)
        if (m % k) s += cx(real(m)) / (1 - expi(twopi * mod(m * h, k) / k));
    cx bracket = cx(real(static_cast<long long>(N) * (N + 1) - 3LL * k - 2LL * sigma) / 2) - s;
    cx prod(1);
    for (long j = 1; j <= N - 2 * k; ++j) prod /= (1 - expi(twopi * mod(h * j, k) / k));
    real k4 = real(k) * k * k * k;
    cx v = -expi(twopi * mod(sigma * h, k) / k) * bracket * prod / (2 * k4);
    return {{h, k}, sigma, N, v, QMethod::double_pole};
}

// Residue from the Laurent expansion at h/k; any pole order.
inline QValue q_laurent(long h, long k, long sigma, long N) {
    check_frac(h, k);
    if (k > N) throw std::invalid_argument("q_laurent: need k <= N");
    long s = N / k;
    real twopi = 2 * pi();
    auto series_of_exp = [&](long mult) {
        std::vector<cx> v(s);
        real t = 1;
        for (long n = 0; n < s; ++n) {
            v[n] = cx(t);
            t = t * mult / (n + 1);
        }
        return v;
    };
    auto mul = [&](std::vector<cx>& a, const std::vector<cx>& b) {
        std::vector<cx> r(s);
        for (long i = 0; i < s; ++i)
            for (long j = 0; i + j < s; ++j) r[i + j] += a[i] * b[j];
        a = std::move(r);
    };
    std::vector<cx> F = series_of_exp(sigma);
    bigint jprod = 1;
    for (long j = 1; j <= N; ++j) {
        if (j % k == 0) {
            // jt/(e^{jt} - 1) = sum B_n (jt)^n/n!
            std::vector<cx> g(s);
            rat jp = 1;
            for (long n = 0; n < s; ++n) {
                g[n] = cx(to_real(bernoulli_number(n) * jp / rat(factorial(n))));
                jp *= j;
            }
            mul(F, g);
            jprod *= j;
        } else {
            cx z = expi(twopi * mod(j * h, k) / k);
            auto e = series_of_exp(j);
            std::vector<cx> d(s);
            for (long n = 0; n < s; ++n) d[n] = -(z * e[n]);
            d[0] += cx(1);
            TruncSeries inv = series_inv(TruncSeries(cx(), d));
            mul(F, inv.coeffs);
        }
    }
    cx v = F[s - 1] * expi(twopi * mod(sigma * h, k) / k) / to_real(jprod);
    if (s & 1) v = -v;
    return {{h, k}, sigma, N, v, QMethod::laurent};
}

// Cheapest valid formula; exact recursion below exact_cap.
inline QValue q_auto(long h, long k, long sigma, long N, long exact_cap = 0) {
    if (2 * k > N) return q_simple(h, k, sigma, N);
    if (3 * k > N) return (h == 1 || h == k - 1) ? q_double(k, sigma, N, h) : q_double_general(h, k, sigma, N);
    if (N <= exact_cap) return q_exact(h, k, sigma, N);
    return q_laurent(h, k, sigma, N);
}

// ---------------------------------------------------------------- partial fractions

// C_{hkl}(N) = sum_sigma binom(l-1, sigma-1) (-zeta)^{l-sigma} Q_{hk sigma}(N)
template <class QFn>
cx c_coeff_from(long h, long k, long ell, QFn&& q) {
    cx zeta = expi(2 * pi() * h / k);
    cx s;
    for (long sg = 1; sg <= ell; ++sg)
        s += to_real(rat(binom(ell - 1, sg - 1))) * pow(-zeta, ell - sg) * q(sg);
    return s;
}

inline cx c_coeff(long h, long k, long ell, long N, long exact_cap = 40) {
    check_frac(h, k);
    if (ell < 1 || ell > N / k) throw std::invalid_argument("c_coeff: need 1 <= l <= N/k");
    if (N <= exact_cap) {
        EkTable t(k, N);
        return c_coeff_from(h, k, ell, [&](long sg) { return q_exact(t, h, sg, N).value; });
    }
    return c_coeff_from(h, k, ell, [&](long sg) { return q_auto(h, k, sg, N).value; });
}

// C_{01l}(N) from the Stirling/Bernoulli composition sum
inline rat c01_formula(long ell, long N) {
    if (ell < 1 || ell > N) throw std::invalid_argument("c01_formula: need 1 <= l <= N");
    long deg = N - ell;
    // product of generating polynomials, truncated at x^deg
    std::vector<rat> acc(deg + 1, 0);
    for (long j = 0; j <= deg; ++j) acc[j] = rat(stirling_subset(ell + j, ell)) / rat(factorial(ell - 1 + j));
    for (long i = 1; i <= N; ++i) {
        std::vector<rat> f(deg + 1);
        rat ip = 1;
        for (long j = 0; j <= deg; ++j) {
            f[j] = bernoulli_number(j) * ip / rat(factorial(j));
            ip *= i;
        }
        std::vector<rat> r(deg + 1, 0);
        for (long a = 0; a <= deg; ++a)
            if (sgn(acc[a]) != 0)
                for (long b = 0; a + b <= deg; ++b)
                    if (sgn(f[b]) != 0) r[a + b] += acc[a] * f[b];
        acc = std::move(r);
    }
    rat out = acc[deg] * rat(factorial(ell - 1)) / rat(factorial(N));
    if (N & 1) out = -out;
    out.canonicalize();
    return out;
}

// partitions of n into at most N parts
inline bigint partition_count(long N, long n) {
    if (N < 0 || n < 0) throw std::invalid_argument("partition_count: negative input");
    std::vector<bigint> p(n + 1, 0);
    p[0] = 1;
    for (long part = 1; part <= N; ++part)
        for (long m = part; m <= n; ++m) p[m] += p[m - part];
    return p[n];
}

// coefficient of q^n in sum C_{hkl}/(q - zeta)^l
inline cx reconstruct_from_pf(long N, long n, long exact_cap = 40) {
    cx total;
    for (auto f : farey(N)) {
        long s = N / f.k;
        real twopi = 2 * pi();
        cx zinv = expi(-twopi * f.h / f.k);
        std::optional<EkTable> t;
        if (N <= exact_cap) t.emplace(f.k, N);
        for (long ell = 1; ell <= s; ++ell) {
            cx c = t ? c_coeff_from(f.h, f.k, ell, [&](long sg) { return q_exact(*t, f.h, sg, N).value; })
                     : c_coeff(f.h, f.k, ell, N, exact_cap);
            cx term = c * pow(zinv, ell + n) * to_real(rat(binom(n + ell - 1, ell - 1)));
            if (ell & 1) term = -term;
            total += term;
        }
    }
    return total;
}

// ---------------------------------------------------------------- bounds

struct Xi {
    real xi1, xi2, xi3;
};

inline real xi_alpha(const real& y) { return (bmp::exp(y) - 1) / y; }
inline real xi_beta(const real& y) { return 2 + y * (1 - 1 / bmp::tan(y / 2)) / 2; }
inline real xi_gamma(const real& y) { return bmp::log(1 / (1 - y)) / y; }

inline Xi xi_triple(long K) {
    if (K < 2) throw std::invalid_argument("xi_triple: need K >= 2");
    real lam = real(0.5) + real(K) / 8;
    real Y = 1 / (K * lam);
    Xi x;
    x.xi1 = xi_beta(Y);
    x.xi2 = xi_alpha(Y);
    x.xi3 = xi_gamma(x.xi2 / (4 * lam));
    return x;
}

inline real q_bound(long h, long k, long sigma, long N) {
    if (k < 2 || k > N) throw std::invalid_argument("q_bound: need 2 <= k <= N");
    long s = N / k;
    real kk = k;
    real e = N * (2 + bmp::log(1 + 3 * kk / 4)) / kk + real(std::labs(sigma)) / N;
    return 3 / (kk * kk * kk) * bmp::exp(e) * bmp::abs(sine_product_inv(h, k, N - s * k));
}

inline real q_bound_refined(long K, long h, long k, long sigma, long N) {
    if (K < 2 || K > k || k > N) throw std::invalid_argument("q_bound_refined: need 2 <= K <= k <= N");
    long s = N / k;
    real kk = k;
    Xi x = xi_triple(K);
    real e = N * (2 + bmp::log(x.xi1 / 2 + x.xi1 * x.xi2 * x.xi3 * kk / 8)) / kk + real(std::labs(sigma)) / N;
    return 9 / (kk * kk * kk) * bmp::exp(e) * bmp::abs(sine_product_inv(h, k, N - s * k));
}

// ---------------------------------------------------------------- Farey subsets

enum class Subset { A, B, C, C2, C2star, D, E };

inline const char* subset_name(Subset s) {
    switch (s) {
    case Subset::A: return "A";
    case Subset::B: return "B";
    case Subset::C: return "C";
    case Subset::C2: return "C2";
    case Subset::C2star: return "C2star";
    case Subset::D: return "D";
    case Subset::E: return "E";
    }
    return "?";
}

inline bool in_subset(Subset s, long h, long k, long N, long K = 101) {
    bool odd = k & 1;
    auto pm = [&](long a) { return mod(h - a, k) == 0 || mod(h + a, k) == 0; };
    switch (s) {
    case Subset::A: return 2 * k > N && k <= N && (h == 1 || h == k - 1);
    case Subset::C: return 2 * k > N && k <= N && odd && (h == 2 || h == k - 2);
    case Subset::C2: return 3 * k > 2 * N && k <= N && odd && (h == 2 || h == k - 2);
    case Subset::C2star: return 2 * k > N && 3 * k <= 2 * N && odd && (h == 2 || h == k - 2);
    case Subset::D: return 2 * k > N && k <= N && odd && (2 * h == k - 1 || 2 * h == k + 1);
    case Subset::E: return 3 * k > N && 2 * k <= N && (h == 1 || h == k - 1);
    case Subset::B: {
        if (k < K || k > N || std::gcd(h, k) != 1) return false;
        if (3 * k > N && 2 * k <= N && pm(1)) return false;
        if (2 * k > N) {
            if (pm(1) || pm(2)) return false;
            if (odd && (pm((k - 1) / 2) || pm((k + 1) / 2))) return false;
        }
        return true;
    }
    }
    return false;
}

inline std::vector<FareyFrac> subset_members(Subset s, long N, long K = 101) {
    std::vector<FareyFrac> out;
    long klo = 1;
    if (s != Subset::B) klo = N / 3;
    for (long k = std::max<long>(klo, 2); k <= N; ++k)
        for (long h = 1; h < k; ++h)
            if (std::gcd(h, k) == 1 && in_subset(s, h, k, N, K)) out.push_back({h, k});
    return out;
}

// Real sum of Q over a subset: conjugate pairs are folded as 2 Re, ascending k.
inline real subset_sum(Subset s, long sigma, long N, long K = 101, unsigned threads = 0) {
    if (N < 4) throw std::invalid_argument("subset_sum: need N >= 4");
    auto members = subset_members(s, N, K);
    std::vector<FareyFrac> reps;
    for (auto f : members)
        if (2 * f.h <= f.k) reps.push_back(f);
    auto vals = parallel_map<real>(static_cast<long>(reps.size()), [&](long i) {
        auto f = reps[i];
        cx q = q_auto(f.h, f.k, sigma, N).value;
        bool paired = 2 * f.h != f.k && in_subset(s, f.k - f.h, f.k, N, K);
        return paired ? real(2 * q.re) : q.re;
    }, threads);
    real total = 0;
    for (auto& v : vals) total += v;
    return total;
}

}  // namespace rpf
