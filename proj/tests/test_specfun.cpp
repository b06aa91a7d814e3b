#include "common.hpp"

#include <random>

using namespace rpf;
using rpf_test::close_bits;
using rpf_test::d;

namespace {

// plain power series, |z| < 1
cx dilog_series(const cx& z, long terms) {
    cx s, zn = z;
    for (long n = 1; n <= terms; ++n) {
        s += zn / real(n * n);
        zn *= z;
    }
    return s;
}

}  // namespace

TEST(Dilog, SpecialValues) {
    EXPECT_TRUE(close_bits(dilog(cx()), cx(), 250));
    EXPECT_TRUE(close_bits(dilog(cx(1)), cx(pi() * pi() / 6), 250));
    // Li2(-1) = -pi^2/12
    EXPECT_TRUE(close_bits(dilog(cx(-1)), cx(-pi() * pi() / 12), 245));
    // Li2(1/2) = pi^2/12 - log(2)^2/2
    real l2 = bmp::log(real(2));
    EXPECT_TRUE(close_bits(dilog(cx(real(0.5))), cx(pi() * pi() / 12 - l2 * l2 / 2), 248));
}

TEST(Dilog, MatchesPowerSeriesInsideDisk) {
    set_precision(128);
    for (double r : {0.3, 0.6, 0.8}) {
        for (double t : {0.4, 1.7, 2.9, -2.2}) {
            cx z = real(r) * expi(real(t));
            EXPECT_TRUE(close_bits(dilog(z), dilog_series(z, 600), 110)) << r << " " << t;
        }
    }
    set_precision(256);
}

TEST(Dilog, ZeroOfPrincipalValue) {
    auto z = dilog_zero(0, -1);
    // Li2(w0) + 2 pi i (-1) log w0 = 0
    EXPECT_TRUE(close_bits(dilog(z.w), cx(0, 2 * pi()) * log(z.w), 230));
}

TEST(Dilog, ReflectionAcrossUnitCircle) {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> ux(0.05, 0.95), uy(0.01, 0.6);
    for (long m = 0; m <= 3; ++m)
        for (int i = 0; i < 5; ++i) {
            cx z(real(m + ux(g)), real(uy(g)));
            cx tpi(0, 2 * pi());
            cx lhs = dilog(exp(-tpi * z)) + dilog(exp(tpi * z));
            cx rhs = 2 * pi() * pi() * (z * z - real(2 * m + 1) * z + real(m * m + m) + real(1) / 6);
            EXPECT_TRUE(close_bits(lhs, rhs, 220)) << m;
        }
}

TEST(Dilog, BoundedInUpperHalfPlane) {
    real li1 = pi() * pi() / 6;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 10; ++j) {
            cx z(real(i) / 20, real(j) / 10);
            EXPECT_LE(abs(dilog(exp(cx(0, 2 * pi()) * z))), li1 + pow2(-200));
        }
}

TEST(Dilog, ImagPartDecreasingInY) {
    for (double x : {0.1, 0.2, 0.3, 0.4}) {
        real prev = dilog(expi(2 * pi() * real(x))).im;
        for (int j = 1; j <= 20; ++j) {
            cx z(real(x), real(j) / 20);
            real cur = dilog(exp(cx(0, 2 * pi()) * z)).im;
            EXPECT_LT(cur, prev) << x << " " << j;
            prev = cur;
        }
    }
}

TEST(DilogContinued, Zeros) {
    cx z(real(0.3), real(-0.2));
    EXPECT_TRUE(close_bits(dilog_continued(z, 0, 0), dilog(z), 250));
    auto a = dilog_zero(0, -2), b = dilog_zero(1, -3);
    EXPECT_TRUE(close_bits(dilog_continued(a.w, 0, -2), cx(), 230));
    EXPECT_TRUE(close_bits(dilog_continued(b.w, 1, -3), cx(), 230));
}

TEST(DilogZero, QuotedValues) {
    struct Row {
        long A, B;
        double re, im;
    };
    for (auto r : {Row{0, -1, 0.916198, -0.182459}, Row{0, -2, 0.968482, -0.109531}, Row{1, -3, -0.459473, -0.848535}}) {
        auto z = dilog_zero(r.A, r.B);
        EXPECT_NEAR(d(z.w.re), r.re, 1e-6);
        EXPECT_NEAR(d(z.w.im), r.im, 1e-6);
        EXPECT_LT(z.residual, pow2(-240));
    }
}

TEST(DilogZero, GridSeedForOtherBranches) {
    // no quoted seed for (1, -2); the grid fallback must still converge
    auto z = dilog_zero(1, -2);
    EXPECT_LT(abs(dilog_continued(z.w, 1, -2)), pow2(-230));
    auto z2 = dilog_zero(0, 1);
    EXPECT_LT(abs(dilog_continued(z2.w, 0, 1)), pow2(-230));
}

TEST(DilogZero, ExistenceCondition) {
    EXPECT_THROW(dilog_zero(0, 0), std::invalid_argument);
    EXPECT_THROW(dilog_zero(2, -3), std::invalid_argument);
    EXPECT_THROW(dilog_zero(-1, -2), std::invalid_argument);
    EXPECT_TRUE(dilog_zero_exists(1, -2));
}

TEST(Clausen, Values) {
    EXPECT_NEAR(d(clausen(real(0))), 0.0, 1e-70);
    EXPECT_NEAR(d(clausen(pi() / 3)), 1.0149416, 1e-7);
    EXPECT_NEAR(d(clausen(pi())), 0.0, 1e-70);
}

TEST(Clausen, OddPeriodicAndBounded) {
    real top = clausen(pi() / 3);
    for (int i = -50; i <= 50; ++i) {
        real t = real(i) / 7;
        EXPECT_TRUE(close_bits(clausen(-t), -clausen(t), 240));
        EXPECT_TRUE(close_bits(clausen(t + 2 * pi()), clausen(t), 235));
        EXPECT_LE(bmp::abs(clausen(t)), top + pow2(-240));
    }
}

TEST(Clausen, MatchesSlowSineSeries) {
    set_precision(64);
    real t(1.1), s = 0;
    for (long n = 1; n <= 200000; ++n) s += bmp::sin(n * t) / (real(n) * n);
    EXPECT_NEAR(d(clausen(t)), d(s), 1e-5);
    set_precision(256);
}

TEST(CotDeriv, Values) {
    EXPECT_TRUE(close_bits(cot_deriv(0, cx(pi() / 4)), cx(1), 245));
    EXPECT_TRUE(close_bits(cot_deriv(1, cx(pi() / 2)), cx(-1), 245));
    EXPECT_THROW(cot_deriv(0, cx(pi())), numeric_error);
}

TEST(CotDeriv, MatchesTaylorCoefficients) {
    cx z0(real(0.7), real(0.2));
    auto s = taylor_coeffs([](const cx& z) { return cot(z); }, z0, real(0.3), 8);
    for (long dd = 0; dd < 8; ++dd)
        EXPECT_TRUE(close_bits(cot_deriv(dd, z0), s[dd] * to_real(factorial(dd)), 220)) << dd;
}

TEST(RhoDeriv, OddDerivativesVanishAtZero) {
    for (long dd = 1; dd <= 9; dd += 2) EXPECT_TRUE(close_bits(rho_deriv(dd, cx()), cx(), 240)) << dd;
    // rho''(0) = -1/3
    EXPECT_TRUE(close_bits(rho_deriv(2, cx()), cx(real(-1) / 3), 240));
}

TEST(RhoDeriv, BranchesAgree) {
    // series branch inside |z| <= 1 vs closed form just outside, through Taylor data
    cx z0(real(1.2), real(0.1));
    auto s = taylor_coeffs([](const cx& z) { return log(sin(z) / z); }, z0, real(0.3), 6);
    for (long dd = 0; dd < 6; ++dd)
        EXPECT_TRUE(close_bits(rho_deriv(dd, z0), s[dd] * to_real(factorial(dd)), 220)) << dd;
    cx z1(real(0.9), real(0.1));
    auto s1 = taylor_coeffs([](const cx& z) { return log(sin(z) / z); }, z1, real(0.3), 6);
    for (long dd = 0; dd < 6; ++dd)
        EXPECT_TRUE(close_bits(rho_deriv(dd, z1), s1[dd] * to_real(factorial(dd)), 220)) << dd;
}
