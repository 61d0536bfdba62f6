#include <random>

#include <gtest/gtest.h>

#include <phisig/arith.hpp>
#include <phisig/sieve.hpp>
#include <phisig/word.hpp>

#include "oracle.hpp"

using namespace phisig;

namespace {

Factorization fac(u64 m) { return factorize_trial(m); }

} // namespace

TEST(Factorization, InvariantsEnforced) {
    Factorization f;
    EXPECT_TRUE(f.empty());
    EXPECT_EQ(f.value(), 1u);
    f.push_back(2, 2);
    f.push_back(3, 1);
    EXPECT_EQ(f.value(), 12u);
    EXPECT_THROW(f.push_back(3, 1), Error);
    EXPECT_THROW(f.push_back(5, 0), Error);
    EXPECT_THROW(f.push_back(1, 1), Error);
}

TEST(Factorization, TrialExamples) {
    EXPECT_EQ(fac(12).factors(), (std::vector<PrimePower>{{2, 2}, {3, 1}}));
    EXPECT_TRUE(fac(1).empty());
    EXPECT_EQ(fac(97).factors(), (std::vector<PrimePower>{{97, 1}}));
    EXPECT_EQ(fac(999983ull * 1000003ull).factors(),
              (std::vector<PrimePower>{{999983, 1}, {1000003, 1}}));
}

TEST(Phi, Examples) {
    EXPECT_EQ(phi(fac(1)), 1u);
    EXPECT_EQ(phi(fac(12)), oracle::phi_count(12));
    EXPECT_EQ(phi(fac(12)), 4u);
    EXPECT_EQ(phi(fac(100)), 40u);
}

TEST(Sigma, Examples) {
    EXPECT_EQ(sigma(fac(1)), 1u);
    EXPECT_EQ(sigma(fac(6)), 12u);
    EXPECT_EQ(sigma(fac(12)), 28u);
}

TEST(Sigma, OverflowIsAnError) {
    // 2^63 has sigma 2^64 - 1, still representable; 2^62 * 3 is not.
    Factorization big;
    big.push_back(2, 63);
    EXPECT_EQ(sigma(big), u64_max);
    Factorization over;
    over.push_back(2, 62);
    over.push_back(3, 1);
    try {
        sigma(over);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::overflow);
    }
}

TEST(Omega, Examples) {
    EXPECT_EQ(big_omega(fac(12)), 3u);
    EXPECT_EQ(big_omega(fac(1)), 0u);
    EXPECT_EQ(big_omega(fac(97)), 1u);
    EXPECT_EQ(big_omega_above(fac(12), 2), 1u);
    EXPECT_EQ(big_omega_above(fac(12), 10), 0u);
    EXPECT_EQ(big_omega_above(fac(720), 3), 1u);
    // strict inequality at a prime threshold
    EXPECT_EQ(big_omega_above(fac(5), 5.0), 0u);
    EXPECT_EQ(big_omega_above(fac(5), 4.999), 1u);
}

TEST(RoughSmooth, Examples) {
    EXPECT_EQ(rough_smooth_split(fac(720), 3), (RoughSmooth{5, 144}));
    EXPECT_EQ(rough_smooth_split(fac(1), 7.5), (RoughSmooth{1, 1}));
    EXPECT_EQ(rough_smooth_split(fac(97), 100), (RoughSmooth{1, 97}));
}

TEST(ArithProperties, PhiSigmaBoundsAndMultiplicativity) {
    const FactorSieve s(20000);
    for (u64 m = 1; m <= 20000; ++m) {
        const auto f = s.factorize(m);
        ASSERT_EQ(phi(f), oracle::phi(m));
        ASSERT_EQ(sigma(f), oracle::sigma(m));
        if (m == 1) {
            ASSERT_EQ(phi(f), 1u);
            ASSERT_EQ(sigma(f), 1u);
        } else {
            ASSERT_LT(phi(f), m);
            ASSERT_GT(sigma(f), m);
        }
    }
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<u64> pick(1, 140);
    int checked = 0;
    while (checked < 2000) {
        const u64 a = pick(rng), b = pick(rng);
        if (std::gcd(a, b) != 1)
            continue;
        ++checked;
        ASSERT_EQ(phi(s.factorize(a * b)), phi(s.factorize(a)) * phi(s.factorize(b)));
        ASSERT_EQ(sigma(s.factorize(a * b)), sigma(s.factorize(a)) * sigma(s.factorize(b)));
    }
}

TEST(ArithProperties, OmegaAboveAndSplit) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<u64> pick(1, 1'000'000);
    std::uniform_real_distribution<double> zpick(1.0, 200.0);
    for (int i = 0; i < 3000; ++i) {
        const u64 m = pick(rng);
        const auto f = fac(m);
        ASSERT_EQ(big_omega(f), big_omega_above(f, 1.0));
        const double z1 = zpick(rng), z2 = z1 + zpick(rng);
        ASSERT_GE(big_omega_above(f, z1), big_omega_above(f, z2));
        const auto rs = rough_smooth_split(f, z1);
        ASSERT_EQ(rs.rough * rs.smooth, m);
        for (auto [p, e] : fac(rs.rough))
            ASSERT_GT(static_cast<double>(p), z1);
        for (auto [p, e] : fac(rs.smooth))
            ASSERT_LE(static_cast<double>(p), z1);
    }
}

TEST(Primality, MillerRabinAgreesWithTrialDivision) {
    for (u64 m = 0; m < 50000; ++m)
        ASSERT_EQ(is_prime(m), oracle::is_prime(m)) << m;
    EXPECT_FALSE(is_prime(3215031751ull)); // strong pseudoprime to 2,3,5,7
    EXPECT_TRUE(is_prime(1'000'000'007ull));
}

TEST(IntegerRoot, Floors) {
    EXPECT_EQ(integer_root(26, 3), 2u);
    EXPECT_EQ(integer_root(27, 3), 3u);
    EXPECT_EQ(integer_root(u64_max, 2), 4294967295u);
    EXPECT_EQ(integer_root(1, 5), 1u);
}

TEST(ArithWord, ParseAndCompose) {
    EXPECT_EQ(ArithWord::parse("ps").to_string(), "ps");
    EXPECT_EQ(ArithWord::parse("phi^3").to_string(), "ppp");
    EXPECT_EQ(ArithWord::parse("sigma").to_string(), "s");
    EXPECT_EQ(ArithWord::parse("p").with_inner(ArithFn::sigma).to_string(), "ps");
    EXPECT_THROW(ArithWord::parse(""), Error);
    EXPECT_THROW(ArithWord::parse("phi^0"), Error);
    EXPECT_THROW(ArithWord::parse("px"), Error);
    EXPECT_THROW(ArithWord(std::vector<ArithFn>{}), Error);
}

TEST(Iterate, Examples) {
    const FactorSieve s(1000);
    EXPECT_EQ(iterate(s, ArithWord::parse("pp"), 100), 16u);
    EXPECT_EQ(iterate(s, ArithWord::parse("p"), 1), 1u);
    EXPECT_EQ(iterate(s, ArithWord::parse("sp"), 10), 7u);
}

TEST(Iterate, NamesFailingStep) {
    const FactorSieve s(1000);
    // sigma(720) = 2418 leaves the sieve before the outer phi runs
    try {
        iterate(s, ArithWord::parse("ps"), 720);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::out_of_range);
        EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos) << e.what();
    }
}
