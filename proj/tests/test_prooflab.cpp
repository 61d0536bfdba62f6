#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <phisig/prooflab.hpp>

#include "oracle.hpp"

using namespace phisig;
using V = std::vector<u64>;

namespace {

const FactorSieve& sieve() {
    static const FactorSieve s(100000);
    return s;
}

} // namespace

TEST(Gauges, Values) {
    EXPECT_NEAR(big_l(1e6), 160.66569554260056, 1e-10);
    for (double n : {16.0, 100.0, 1e6, 1e12})
        EXPECT_NEAR(l_k_beta(n, 1, 1.0) / big_l(n), 1.0, 1e-12) << n;
    const double lx = std::log(1e6), llx = std::log(lx);
    EXPECT_NEAR(l_k_beta(1e6, 2, 1.0), std::exp(lx * std::log(llx) / (llx * llx)), 1e-12);
    EXPECT_NEAR(l_k_beta(1e6, 2, 1.0), 6.92, 0.01);
    EXPECT_THROW(big_l(15.0), Error);
    EXPECT_THROW(l_k_beta(15.9, 1, 0.5), Error);
    EXPECT_THROW(l_k_beta(100, 0, 0.5), Error);
}

TEST(Gauges, SearchLimit) {
    EXPECT_NEAR(search_limit(16), 55.451774444795625, 1e-12);
    EXPECT_NEAR(search_limit(1), std::log(2.0), 1e-15);
    EXPECT_THROW(search_limit(0), Error);
}

TEST(Lemma3, SingletonAndWitnesses) {
    const auto one = lemma3_ratios(sieve(), 1, 1);
    const double ll3 = std::log(std::log(3.0));
    EXPECT_NEAR(one.c1_hat, 1.0 / ll3, 1e-12);
    EXPECT_NEAR(one.c1_hat, 10.633, 1e-3);
    EXPECT_NEAR(one.c2_hat, ll3, 1e-15);
    EXPECT_EQ(one.argmax, 1u);

    const auto r = lemma3_ratios(sieve(), 1, 100000);
    double best = 0;
    u64 arg = 0;
    for (u64 n = 1; n <= 100000; ++n) {
        const double v = static_cast<double>(oracle::sigma(n)) /
                         (static_cast<double>(n) * std::log(std::log(3.0 * static_cast<double>(n))));
        if (v > best) {
            best = v;
            arg = n;
        }
    }
    EXPECT_EQ(r.argmax, arg);
    EXPECT_DOUBLE_EQ(r.c1_hat, best);
    EXPECT_LE(r.c1_hat, 1.0 / ll3 + 1e-12);
    EXPECT_GT(r.c2_hat, 0.0);

    EXPECT_EQ(lemma3_ratios(sieve(), 10, 5000, {4, 100}).argmin,
              lemma3_ratios(sieve(), 10, 5000, {1, 100}).argmin);
    EXPECT_THROW(lemma3_ratios(sieve(), 0, 5), Error);
    EXPECT_THROW(lemma3_ratios(sieve(), 1, 100001), Error);
}

TEST(Lemma4, CountsAndBound) {
    EXPECT_EQ(count_multiples(sieve(), ArithFn::phi, 2, 10), 8u);
    EXPECT_EQ(count_multiples(sieve(), ArithFn::sigma, 3, 10), 5u);
    EXPECT_EQ(count_multiples(sieve(), ArithFn::sigma, 1, 77.7), 77u);
    EXPECT_NEAR(lemma4_bound(2, 10), 436.28273185865953, 1e-9);
    EXPECT_NEAR(lemma4_bound(4, 10), 76137.048847222, 1e-6);
    EXPECT_THROW(lemma4_bound(1, 10), Error);
    EXPECT_THROW(count_multiples(sieve(), ArithFn::phi, 0, 10), Error);

    std::mt19937_64 rng(17);
    std::uniform_int_distribution<u64> pick_d(2, 5000);
    for (int i = 0; i < 40; ++i) {
        const u64 d = pick_d(rng);
        for (ArithFn fn : {ArithFn::phi, ArithFn::sigma}) {
            u64 brute = 0;
            for (u64 n = 1; n <= 20000; ++n)
                brute += oracle::apply(fn == ArithFn::phi, n) % d == 0;
            const u64 c = count_multiples(sieve(), fn, d, 20000);
            ASSERT_EQ(c, brute) << d;
            ASSERT_LE(static_cast<double>(c), lemma4_bound(d, 20000)) << d;
        }
    }
}

TEST(BoundParams, Chain) {
    EXPECT_TRUE((BoundParams{3, 0.5, 1.0, 0.5}).chain_ok());
    EXPECT_FALSE((BoundParams{2, 0.5, 1.0, 0.5}).chain_ok());
    EXPECT_FALSE((BoundParams{3, 2.5, 1.0, 0.5}).chain_ok());
}

TEST(Partition, FrozenSixteen) {
    const auto r = partition_pqr(ArithFn::phi, ArithWord::parse("p"), 16, 0.5, 0.5);
    EXPECT_NEAR(r.x, 55.451774444795625, 1e-12);
    EXPECT_NEAR(r.z, 3.2512928195261477, 1e-12);
    EXPECT_NEAR(r.threshold_P, 1.192572973637523, 1e-12);
    EXPECT_NEAR(r.threshold_Q, 2.4498610521754762, 1e-12);
    EXPECT_EQ(r.S, (V{17, 32, 34, 40, 48, 60}));
    EXPECT_EQ(r.P, V{});
    EXPECT_EQ(r.Q, (V{32, 40, 48, 60}));
    EXPECT_EQ(r.R, (V{17, 34}));
    EXPECT_EQ(r.total_P, 0u);
    EXPECT_EQ(r.total_Q, 7u + 9u + 11u + 9u);
    EXPECT_EQ(r.total_R, 0u);
    EXPECT_EQ(r.total(), 36u);
    EXPECT_EQ(r.total(), count_preimages(ArithWord::parse("pp"), 16));
}

TEST(Partition, EmptyPreimageSet) {
    const auto r = partition_pqr(ArithFn::sigma, ArithWord::parse("p"), 17, 0.5, 0.5);
    EXPECT_TRUE(r.S.empty());
    EXPECT_EQ(r.total(), 0u);
}

TEST(Partition, DomainChecks) {
    EXPECT_THROW(partition_pqr(ArithFn::phi, ArithWord::parse("p"), 15, 0.5, 0.5), Error);
    EXPECT_THROW(partition_pqr(ArithFn::phi, ArithWord::parse("p"), 16, 1.0, 0.5), Error);
    EXPECT_THROW(partition_pqr(ArithFn::phi, ArithWord::parse("p"), 16, 0.5, 1.0), Error);
    EXPECT_THROW(partition_pqr(ArithFn::phi, ArithWord::parse("pp"), 1 << 16, 0.5, 0.5, {3, nullptr}),
                 TruncationError);
}

TEST(Partition, RandomInvariants) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<u64> pick_n(16, 5000);
    std::uniform_int_distribution<int> pick_len(1, 2), pick_bit(0, 1);
    std::uniform_real_distribution<double> pick_eta(0.05, 0.95);
    for (int t = 0; t < 60; ++t) {
        std::vector<ArithFn> s;
        const int len = pick_len(rng);
        for (int i = 0; i < len; ++i)
            s.push_back(pick_bit(rng) ? ArithFn::sigma : ArithFn::phi);
        const ArithWord inner(s);
        const ArithFn a = pick_bit(rng) ? ArithFn::sigma : ArithFn::phi;
        const u64 n = pick_n(rng);
        std::uniform_real_distribution<double> pick_alpha(0.0, static_cast<double>(len));
        const auto r = partition_pqr(a, inner, n, pick_alpha(rng), pick_eta(rng), {default_preimage_cap, &sieve()});

        V all;
        for (const V* part : {&r.P, &r.Q, &r.R})
            all.insert(all.end(), part->begin(), part->end());
        std::sort(all.begin(), all.end());
        ASSERT_EQ(all, r.S);
        ASSERT_EQ(r.total(), count_preimages(inner.with_inner(a), n)) << inner.to_string() << " " << n;
        for (const auto& e : r.entries) {
            ASSERT_EQ(e.omega, oracle::omega(e.ell));
            ASSERT_EQ(e.omega_above_z, oracle::omega_above(e.ell, r.z));
            const bool inP = e.omega_above_z >= r.threshold_P;
            ASSERT_EQ(e.part == Part::P, inP);
            if (!inP)
                ASSERT_EQ(e.part == Part::Q, e.omega >= r.threshold_Q);
        }
    }
}

TEST(Theorem1, FrozenScan) {
    const auto s = theorem1_scan(ArithWord::parse("pp"), 0.5, 16, 10000);
    ASSERT_EQ(s.rows.size(), 10000u - 15u);
    EXPECT_EQ(s.argmax, 192u);
    EXPECT_NEAR(s.max_ratio, 2.332327249130843, 1e-12);
    EXPECT_EQ(s.rows[192 - 16].count, std::optional<u64>(225));
    for (const auto& row : s.rows)
        ASSERT_TRUE(row.error.empty());
}

TEST(Theorem1, WorkersAndTruncation) {
    const auto w = ArithWord::parse("ps");
    const auto a = theorem1_scan(w, 0.0, 16, 600, {}, {1, 1 << 15});
    const auto b = theorem1_scan(w, 0.0, 16, 600, {}, {4, 1 << 15});
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        ASSERT_EQ(a.rows[i].ratio, b.rows[i].ratio);
    EXPECT_EQ(a.max_ratio, b.max_ratio);

    const auto t = theorem1_scan(ArithWord::parse("pp"), 0.5, 16, 64, {10, nullptr});
    EXPECT_FALSE(t.rows[0].count.has_value());
    EXPECT_EQ(t.rows[0].error, "truncated");
    EXPECT_THROW(theorem1_scan(w, 0.5, 15, 100), Error);
}
