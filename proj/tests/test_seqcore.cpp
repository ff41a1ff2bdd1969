#include <gtest/gtest.h>

#include <random>

#include "lds4/seqcore.hpp"
#include "oracles.hpp"

using namespace lds4;

namespace {

std::vector<mpz_class> Z(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(LucasU, Examples)
{
    EXPECT_EQ(lucas_u({1, -1}, 5), 5);
    EXPECT_EQ(lucas_u({7, 3}, 0), 0);
    EXPECT_EQ(lucas_u({2, 1}, 9), 9);
    EXPECT_EQ(lucas_u({1, -1}, 100), mpz_class("354224848179261915075"));
    EXPECT_THROW(lucas_u({1, 0}, 3), PreconditionError);
}

TEST(LucasU, MatchesMatrixPowerOracle)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-12, 12);
    for (int i = 0; i < 50; ++i) {
        const long h = d(rng);
        long k = d(rng);
        if (k == 0) k = 5;
        const SequenceWindow w = lucas_terms({h, k}, 61);
        for (unsigned n = 0; n <= 60; ++n) ASSERT_EQ(w.terms[n], oracle::lucas(h, k, n)) << h << "," << k << " n=" << n;
    }
}

TEST(RecurrenceTerms, Examples)
{
    const auto t6 = LinearRecurrence::from_characteristic(Z({1, -6, 6, -6, 1}), Z({0, 1, 6, 29}));
    EXPECT_EQ(recurrence_terms(t6, 8).terms, Z({0, 1, 6, 29, 144, 725, 3654, 18409}));
    EXPECT_EQ(recurrence_terms(LinearRecurrence(Z({2}), Z({1})), 4).terms, Z({1, 2, 4, 8}));
    const auto t7 = LinearRecurrence::from_characteristic(Z({1, -7, 7, -7, 1}), Z({0, 1, 7, 41}));
    EXPECT_EQ(recurrence_terms(t7, 8).terms, Z({0, 1, 7, 41, 245, 1476, 8897, 53621}));
    EXPECT_EQ(recurrence_terms(t7, 2).terms, Z({0, 1}));
}

TEST(RecurrenceTerms, Validation)
{
    EXPECT_THROW(LinearRecurrence({}, {}), PreconditionError);
    EXPECT_THROW(LinearRecurrence(Z({1, 1}), Z({0})), PreconditionError);
    EXPECT_THROW(LinearRecurrence(Z({1, 0}), Z({0, 1})), PreconditionError);
}

TEST(RecurrenceTerms, CharacteristicBijection)
{
    const LinearRecurrence rec(Z({6, -6, 6, -1}), Z({0, 1, 6, 29}));
    EXPECT_EQ(rec.characteristic(), Z({1, -6, 6, -6, 1}));
    const auto back = LinearRecurrence::from_characteristic(rec.characteristic(), rec.initial_terms());
    EXPECT_EQ(back.coefficients(), rec.coefficients());
}

TEST(RecurrenceTerms, RestartFromAnySuffix)
{
    const LinearRecurrence rec(Z({3, -1, 4, -2}), Z({0, 1, -2, 5}));
    const auto full = recurrence_terms(rec, 40).terms;
    for (std::size_t s = 0; s + 4 <= 40; ++s) {
        const LinearRecurrence again(rec.coefficients(), {full.begin() + s, full.begin() + s + 4});
        const auto part = recurrence_terms(again, 40 - s).terms;
        ASSERT_TRUE(std::equal(part.begin(), part.end(), full.begin() + s)) << "suffix " << s;
    }
}

TEST(DivisibilityCheck, Examples)
{
    EXPECT_TRUE(divisibility_check(lucas_terms({1, -1}, 30)).empty());
    EXPECT_TRUE(divisibility_check({0, Z({0, 1, 2, 3, 4, 5})}).empty());
    EXPECT_EQ(divisibility_check({0, Z({0, 1, 2, 3, 5})}), (std::vector<IndexPair>{{2, 4}}));
}

TEST(DivisibilityCheck, ZeroConvention)
{
    // 0 | 0 holds, 0 does not divide 3
    EXPECT_TRUE(divisibility_check({0, Z({0, 1, 0, 1, 0})}).empty());
    EXPECT_EQ(divisibility_check({0, Z({0, 1, 0, 1, 3})}), (std::vector<IndexPair>{{2, 4}}));
    EXPECT_THROW(divisibility_check({1, Z({1, 1})}), PreconditionError);
}

TEST(DivisibilityCheck, LucasSequencesAreDivisibilitySequences)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int i = 0; i < 40; ++i) {
        const long h = d(rng);
        long k = d(rng);
        if (k == 0) k = -1;
        EXPECT_TRUE(divisibility_check(lucas_terms({h, k}, 61)).empty()) << h << "," << k;
    }
}

TEST(ProductSequence, Examples)
{
    const SequenceWindow fib{0, Z({0, 1, 1, 2, 3, 5})};
    EXPECT_EQ(product_sequence(fib, fib).terms, Z({0, 1, 1, 4, 9, 25}));
    EXPECT_EQ(product_sequence(fib, {0, Z({1, 1, 1, 1, 1, 1})}), fib);
    EXPECT_EQ(product_sequence(lucas_terms({1, -1}, 5), lucas_terms({2, 1}, 5)).terms, Z({0, 1, 2, 6, 12}));
    EXPECT_THROW(product_sequence(fib, {0, Z({1})}), PreconditionError);
    EXPECT_THROW(product_sequence(fib, {1, fib.terms}), PreconditionError);
}

TEST(ProductSequence, LucasProductsAreDivisibilitySequences)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-6, 6);
    for (int i = 0; i < 30; ++i) {
        long h1 = d(rng), k1 = d(rng), h2 = d(rng), k2 = d(rng);
        if (k1 == 0) k1 = 1;
        if (k2 == 0) k2 = -2;
        EXPECT_TRUE(divisibility_check(product_sequence(lucas_terms({h1, k1}, 41), lucas_terms({h2, k2}, 41))).empty());
    }
}
