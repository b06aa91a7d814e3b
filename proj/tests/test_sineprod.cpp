#include "common.hpp"

using namespace rpf;
using rpf_test::close_bits;
using rpf_test::d;

TEST(SineProduct, Values) {
    EXPECT_TRUE(close_bits(sine_product(1, 5, 0), real(1), 250));
    EXPECT_TRUE(close_bits(sine_product(1, 5, 4), real(5), 245));
    real direct = 1;
    for (int j = 1; j <= 3; ++j) direct *= 2 * bmp::sin(2 * pi() * j / 7);
    EXPECT_TRUE(close_bits(sine_product(2, 7, 3), direct, 245));
    EXPECT_TRUE(close_bits(sine_product(2, 7, 3), bmp::sqrt(real(7)), 245));
}

TEST(SineProduct, ZeroFactorIsFlagged) {
    auto p = sine_product_checked(1, 5, 5);
    EXPECT_TRUE(p.zero);
    EXPECT_EQ(p.value, 0);
    EXPECT_THROW(sine_product_inv(1, 5, 6), numeric_error);
}

TEST(SineProduct, FullProductIsSignedK) {
    for (long k = 2; k <= 60; ++k)
        for (long h = 1; h < k; ++h) {
            if (std::gcd(h, k) != 1) continue;
            long e = ((h - 1) * (k - 1) / 2) % 2;
            real want = e ? real(-k) : real(k);
            ASSERT_TRUE(close_bits(sine_product(h, k, k - 1), want, 220)) << h << "/" << k;
        }
}

TEST(MinPair, Examples) {
    for (long k : {5L, 17L, 101L}) EXPECT_EQ(min_pair(1, k).D, 1);
    EXPECT_EQ(min_pair(2, 7).D, 2);
    auto m = min_pair(3, 7);
    EXPECT_EQ(m.D, 2);
    EXPECT_EQ(m.beta0, -2);
    EXPECT_EQ(m.gamma0, 1);
}

TEST(MinPair, UniqueBelowThreshold) {
    for (long k : {31L, 101L})
        for (long h = 1; h < k; ++h) {
            auto m = min_pair(h, k);
            EXPECT_EQ(mod(m.beta0 * h - m.gamma0, k), 0);
            if (m.D * m.D < k / 2.0) EXPECT_TRUE(m.unique) << h << "/" << k;
        }
}

TEST(SSum, Examples) {
    EXPECT_TRUE(close_bits(s_sum(0, 3, 7), real(0), 250));
    // enumerate Z(3,7) directly
    real s = 0;
    for (long b = -6; b <= 6; ++b)
        for (long g = 1; g <= 6; ++g)
            if (b != 0 && mod(b * 3 - g, 7) == 0) s += bmp::sin(2 * pi() * 3 * g / 7) / (std::labs(b) * g);
    EXPECT_TRUE(close_bits(s_sum(3, 3, 7), s, 240));
}

TEST(SSum, NearClausenForHOne) {
    for (long k : {31L, 101L})
        for (long m = 1; m < k; ++m) {
            real diff = bmp::abs(s_sum(m, 1, k) - clausen(2 * pi() * m / k));
            real budget = (real(15.06) + 2 * bmp::sqrt(real(2)) * bmp::log(real(k))) / bmp::sqrt(real(k));
            EXPECT_LE(diff, budget) << m << " " << k;
        }
}

TEST(SSum, TracksLogProduct) {
    for (long k : {11L, 31L, 101L}) {
        real lk = bmp::log(real(k));
        real budget = real(40.18) * lk * lk / k;
        for (long h = 1; h < k; ++h) {
            if (std::gcd(h, k) != 1) continue;
            for (long m = 0; m < k; ++m) {
                real lhs = log_product_lhs(m, h, k);
                ASSERT_LE(bmp::abs(lhs - s_sum(m, h, k) / (2 * pi())), budget) << h << "/" << k << " m=" << m;
            }
        }
    }
}

TEST(LogProductEstimate, WithinBudget) {
    for (long k : {101L, 211L})
        for (long h = 1; h < k; ++h)
            for (long m = 0; m < k; ++m) {
                auto e = log_product_estimate(m, h, k);
                ASSERT_LE(bmp::abs(log_product_lhs(m, h, k) - e.estimate), e.errbound) << h << "/" << k << " m=" << m;
            }
}

TEST(LogProductEstimate, TrivialCases) {
    auto e = log_product_estimate(0, 5, 101);
    EXPECT_EQ(e.estimate, 0);
    EXPECT_EQ(log_product_lhs(0, 5, 101), 0);
    auto f = log_product_estimate(7, 1, 101);
    EXPECT_TRUE(close_bits(f.estimate, clausen(2 * pi() * 7 / 101) / (2 * pi()), 240));
}

TEST(Psi, Values) {
    EXPECT_TRUE(close_bits(psi(1, 2), bmp::log(real(2)) / 2, 248));
    EXPECT_NEAR(d(psi_recip(50, 101)), 0.0612263, 5e-8);
    EXPECT_NEAR(d(psi_recip(2, 101)), 0.061391, 5e-7);
}

TEST(Psi, ReciprocalSumBoundAtK101) {
    real top = clausen(pi() / 3);
    for (long h = 1; h < 101; ++h) {
        real bound = top / (2 * pi() * min_pair(h, 101).D) + estimate_budget(101);
        EXPECT_LE(psi(h, 101), bound) << h;
    }
}

TEST(SineProductEM, ExactRepresentation) {
    for (auto [h, k, m] : std::vector<std::tuple<long, long, long>>{{1, 50, 20}, {2, 101, 30}, {3, 97, 25}}) {
        auto r = sine_product_em(h, k, m, 3);
        real rebuilt = r.mainterm * bmp::exp(r.TL);
        EXPECT_LT(bmp::abs(rebuilt / sine_product(h, k, m) - 1), real(1e-38)) << h << "/" << k;
    }
}

TEST(SineProductEM, T1Bound) {
    for (long h : {1L, 2L, 3L}) {
        long k = 61;
        for (long m = 1; m * h < k; ++m) {
            auto r = sine_product_em(h, k, m, 1);
            EXPECT_LE(bmp::abs(r.TL), pi() * pi() * h / 18 + real(1) / 12) << h << " " << m;
        }
    }
}

TEST(SineProductEM, MainTermForTwoOver801) {
    // k = 801, m = N - k with N = 1000; the main term with L = 4 tracks the exact product
    auto r = sine_product_em(2, 801, 199, 4);
    real rel = bmp::abs(r.mainterm / sine_product(2, 801, 199) - 1);
    real W(0.05);
    EXPECT_LT(rel, bmp::exp(W * 500) / bmp::abs(sine_product(2, 801, 199)));
    EXPECT_THROW(sine_product_em(2, 10, 5, 2), std::invalid_argument);
}

TEST(HalfIdentities, Residuals) {
    EXPECT_LT(half_identities(HalfIdentity::shift_two, 7, 1), pow2(-240));
    for (long k : {7L, 11L, 21L})
        for (long a = 1; 2 * a <= k - 1; ++a) EXPECT_LT(half_identities(HalfIdentity::shift_two, k, a), pow2(-230));
    for (long k : {7L, 11L})
        for (long m = 0; m < k; m += 2) EXPECT_LT(half_identities(HalfIdentity::half_decomposition, k, m), pow2(-230));
    EXPECT_LT(half_identities(HalfIdentity::parity_shift, 11, 15), pow2(-230));
    EXPECT_THROW(half_identities(HalfIdentity::parity_shift, 11, 14), std::invalid_argument);
}

TEST(HalfIdentities, HalfPointProduct) {
    EXPECT_TRUE(close_bits(sine_product_inv(2, 7, 3), 1 / bmp::sqrt(real(7)), 245));
}

TEST(CofH, ReciprocalProductBound) {
    real W(0.05), delta(0.01);
    for (long h : {1L, 2L, 3L})
        for (long k : {101L, 211L, 401L}) {
            if (std::gcd(h, k) != 1) continue;
            real bound = c_of_h(h) * bmp::exp(real(k) * W / h);
            for (long m = 0; m * h < k; ++m) {
                real x = real(m * h) / k;
                if (!(x <= delta || x >= real(0.5) - delta)) continue;
                EXPECT_LE(bmp::abs(sine_product_inv(h, k, m)), bound) << h << "/" << k << " m=" << m;
            }
        }
}
