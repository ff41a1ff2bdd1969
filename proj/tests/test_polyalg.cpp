#include <gtest/gtest.h>

#include <random>

#include "lds4/polyalg.hpp"
#include "oracles.hpp"

using namespace lds4;

namespace {

IntMatrix rows(std::initializer_list<std::initializer_list<long>> r)
{
    IntMatrix m(r.size());
    std::size_t i = 0;
    for (const auto& row : r) {
        std::size_t j = 0;
        for (long v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

IntPoly random_monic(std::mt19937_64& rng, std::size_t degree, long bound)
{
    std::uniform_int_distribution<long> d(-bound, bound);
    std::vector<mpz_class> c;
    for (std::size_t i = 0; i < degree; ++i) c.emplace_back(d(rng));
    c.emplace_back(1);
    return IntPoly(c);
}

}  // namespace

TEST(Companion, Examples)
{
    EXPECT_EQ(companion(IntPoly{-1, -1, 1}), rows({{0, 1}, {1, 1}}));
    EXPECT_EQ(companion(IntPoly{-3, 1}), rows({{3}}));
    const IntPoly t6{1, -6, 6, -6, 1};
    EXPECT_EQ(char_poly_exact(companion(t6)), t6);
    EXPECT_THROW(companion(IntPoly{1, 2}), PreconditionError);
    EXPECT_THROW(companion(IntPoly{5}), PreconditionError);
}

TEST(CharPoly, Examples)
{
    EXPECT_EQ(char_poly_exact(IntMatrix::identity(2)), (IntPoly{1, -2, 1}));
    EXPECT_EQ(char_poly_exact(rows({{2, 1}, {0, 3}})), (IntPoly{6, -5, 1}));
    const IntMatrix f = companion(IntPoly{-1, -1, 1});
    EXPECT_EQ(char_poly_exact(kron_matrix(f, f)), (IntPoly{1, -1, -4, -1, 1}));
}

TEST(CharPoly, CompanionRoundTrip)
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 60; ++i) {
        const IntPoly f = random_monic(rng, 1 + i % 8, 30);
        EXPECT_EQ(char_poly_exact(companion(f)), f) << f.to_string();
    }
}

TEST(KronMatrix, Examples)
{
    EXPECT_EQ(kron_matrix(rows({{2}}), rows({{3}})), rows({{6}}));
    EXPECT_EQ(kron_matrix(IntMatrix::identity(2), IntMatrix::identity(2)), IntMatrix::identity(4));
    EXPECT_EQ(kron_matrix(rows({{1, 2}, {3, 4}}), rows({{0, 1}, {1, 0}})),
              rows({{0, 1, 0, 2}, {1, 0, 2, 0}, {0, 3, 0, 4}, {3, 0, 4, 0}}));
}

TEST(KronPoly, Examples)
{
    EXPECT_EQ(kron_poly(IntPoly{-3, 1}, IntPoly{-5, 1}), (IntPoly{-15, 1}));
    EXPECT_EQ(kron_poly(IntPoly{-1, -1, 1}, IntPoly{-1, -1, 1}), (IntPoly{1, -1, -4, -1, 1}));
    std::vector<mpz_class> big(34, 0);
    big.back() = 1;
    EXPECT_THROW(kron_poly(IntPoly(big), IntPoly{1, 0, 1}), PreconditionError);
    EXPECT_THROW(kron_poly(IntPoly{1, 2}, IntPoly{1, 1}), PreconditionError);
}

TEST(KronPoly, QuadraticFormula)
{
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int i = 0; i < 20; ++i) {
        const mpz_class h1 = d(rng), k1 = d(rng), h2 = d(rng), k2 = d(rng);
        const IntPoly expect({k1 * k1 * k2 * k2, -h1 * h2 * k1 * k2, k2 * h1 * h1 + k1 * h2 * h2 - 2 * k1 * k2,
                              -h1 * h2, mpz_class(1)});
        EXPECT_EQ(kron_poly(IntPoly({k1, -h1, 1}), IntPoly({k2, -h2, 1})), expect);
    }
}

TEST(KronPoly, RootsArePairwiseProducts)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> d(-7, 7);
    for (int i = 0; i < 25; ++i) {
        const long f0 = d(rng), f1 = d(rng), g0 = d(rng), g1 = d(rng), g2 = d(rng);
        const auto rf = oracle::roots({double(f0), double(f1), 1.0});
        const auto rg = oracle::roots({double(g0), double(g1), double(g2), 1.0});
        std::vector<oracle::cld> prod;
        for (auto a : rf)
            for (auto b : rg) prod.push_back(a * b);
        const auto expect = oracle::from_roots(prod);
        const IntPoly k = kron_poly(IntPoly{f0, f1, 1}, IntPoly{g0, g1, g2, 1});
        ASSERT_EQ(k.degree(), 6U);
        for (std::size_t j = 0; j <= 6; ++j) EXPECT_EQ(k[j], expect[j]) << "coefficient " << j;
    }
}

TEST(KronPoly, Symmetric)
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const IntPoly f = random_monic(rng, 1 + i % 3, 8), g = random_monic(rng, 1 + (i / 3) % 3, 8);
        EXPECT_EQ(kron_poly(f, g), kron_poly(g, f));
    }
}

TEST(StandardPoly, Examples)
{
    EXPECT_EQ(standard_poly({6, 4, 1}), (IntPoly{1, -6, 6, -6, 1}));
    EXPECT_EQ(standard_poly({1, -6, 1}), (IntPoly{1, -1, -4, -1, 1}));
    EXPECT_EQ(standard_poly({0, 1, 1}), (IntPoly{1, 0, 3, 0, 1}));
    EXPECT_THROW(standard_poly({1, 1, 0}), PreconditionError);
    EXPECT_EQ(standard_poly({1, -6, 1}).to_string(), "x^4 - x^3 - 4x^2 - x + 1");
}

TEST(StandardInitialConditions, Examples)
{
    EXPECT_EQ(standard_initial_conditions({6, 4, 1}).terms, (std::vector<mpz_class>{0, 1, 6, 29}));
    EXPECT_EQ(standard_initial_conditions({0, 0, -1}).terms, (std::vector<mpz_class>{0, 1, 0, 3}));
    EXPECT_EQ(standard_initial_conditions({1, -6, 1}).terms, (std::vector<mpz_class>{0, 1, 1, 4}));
}

TEST(StandardTerms, MatchHandRolledRecurrence)
{
    for (auto [p, q, r] : std::vector<std::tuple<long, long, long>>{{6, 4, 1}, {1, -6, 1}, {3, -4, -1}, {0, 5, 2}, {-5, 7, 3}})
        EXPECT_EQ(standard_terms({p, q, r}, 50).terms, oracle::standard(p, q, r, 50));
}

TEST(Recognize, Examples)
{
    const auto t6 = recognize_standard(IntPoly{1, -6, 6, -6, 1});
    ASSERT_TRUE(t6);
    EXPECT_EQ(t6->params, (StandardParams{6, 4, 1}));
    EXPECT_FALSE(t6->alternate);
    EXPECT_FALSE(recognize_standard(IntPoly{1, 1, 0, 0, 1}));
    EXPECT_FALSE(recognize_standard(IntPoly{4, -2, 3, -2, 1}));
    EXPECT_THROW(recognize_standard(IntPoly{1, 1, 1}), PreconditionError);
    EXPECT_THROW(recognize_standard(IntPoly({1, 1, 1, 1, 2})), PreconditionError);
}

TEST(Recognize, BothSignsWhenPIsZero)
{
    // x^4 + 3x^2 + 1: r = 1, q = 1 or r = -1, q = 5
    const auto hit = recognize_standard(IntPoly{1, 0, 3, 0, 1});
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->params, (StandardParams{0, 1, 1}));
    ASSERT_TRUE(hit->alternate);
    EXPECT_EQ(*hit->alternate, (StandardParams{0, 5, -1}));
    EXPECT_EQ(standard_poly(*hit->alternate), (IntPoly{1, 0, 3, 0, 1}));
}

TEST(Recognize, NegativeRIsRecovered)
{
    const auto hit = recognize_standard(standard_poly({3, -4, -1}));
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->params, (StandardParams{3, -4, -1}));
    EXPECT_FALSE(hit->alternate);
}

TEST(Recognize, RoundTrip)
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> d(-40, 40);
    for (int i = 0; i < 300; ++i) {
        long r = d(rng);
        if (r == 0) r = 3;
        const StandardParams sp{d(rng), d(rng), r};
        const auto hit = recognize_standard(standard_poly(sp));
        ASSERT_TRUE(hit);
        if (sp.p == 0 && r < 0) {
            ASSERT_TRUE(hit->alternate);
            EXPECT_EQ(*hit->alternate, sp);
        } else {
            EXPECT_EQ(hit->params, sp);
        }
    }
}

TEST(Recognize, AgreesWithTableOracle)
{
    const auto table = oracle::standard_table(6, 40, 5);
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<long> c(-6, 6), sq(1, 5), pick(0, 3);
    int accepted = 0;
    for (int i = 0; i < 1000; ++i) {
        // bias towards square constant terms so both outcomes occur often
        long c0 = pick(rng) ? sq(rng) * sq(rng) : c(rng);
        if (pick(rng) == 0) c0 = sq(rng) * sq(rng);
        long c3 = c(rng), c2 = c(rng);
        long c1 = pick(rng) < 2 ? c3 * static_cast<long>(std::lround(std::sqrt(std::abs(double(c0))))) * (pick(rng) < 2 ? 1 : -1)
                                : c(rng);
        const bool expect = table.count({c0, c1, c2, c3}) > 0;
        const bool got = recognize_standard(IntPoly{c0, c1, c2, c3, 1}).has_value();
        EXPECT_EQ(got, expect) << c0 << " " << c1 << " " << c2 << " " << c3;
        accepted += got;
    }
    EXPECT_GT(accepted, 100);
    EXPECT_LT(accepted, 900);
}

TEST(RepeatedRoots, ExactTest)
{
    EXPECT_TRUE(has_repeated_roots({4, 4, 1}));   // (x - 1)^4
    EXPECT_TRUE(has_repeated_roots({1, -6, 1}));  // -1 twice
    EXPECT_FALSE(has_repeated_roots({6, 4, 1}));
    EXPECT_TRUE(is_square_of_quadratic({4, 4, 1}));
    EXPECT_FALSE(is_square_of_quadratic({1, -6, 1}));
}

TEST(StandardRoots, EncloseLongDoubleRoots)
{
    for (auto [p, q, r] : std::vector<std::tuple<long, long, long>>{{6, 4, 1}, {3, -4, -1}, {0, 5, 2}, {2, 9, 3}}) {
        const auto balls = standard_roots({p, q, r}, 200);
        const IntPoly f = standard_poly({p, q, r});
        for (const auto& z : balls) {
            ComplexBall v(200);
            for (std::size_t i = 5; i-- > 0;) v = v * z + ComplexBall(f[i], 200);
            EXPECT_TRUE(v.contains_zero());
        }
        const auto ref = oracle::roots({double(r * r), double(-p * r), double(q + 2 * r), double(-p), 1.0});
        for (const auto& w : ref) {
            bool found = false;
            for (const auto& z : balls)
                found = found || std::abs(std::complex<long double>(z.re().to_double(), z.im().to_double()) - w) < 1e-9;
            EXPECT_TRUE(found);
        }
    }
}

TEST(PairProductBound, Examples)
{
    EXPECT_EQ(pair_product_bound({6, 4, 1}, 1), 1);
    EXPECT_EQ(pair_product_bound({3, -4, -1}, 1), 1);
    // roots phi^2, psi^2, -1, -1: (phi^2 + psi^2)(phi^2 - 1)^2 (psi^2 - 1)^2 (-2) = 3 * 1 * 1 * (-2)
    EXPECT_EQ(pair_product_bound({1, -6, 1}, 2), -6);
    EXPECT_THROW(pair_product_bound({1, 1, 0}, 2), PreconditionError);
    EXPECT_THROW(pair_product_bound({1, 1, 1}, 0), PreconditionError);
}

TEST(PairProductBound, MatchesLongDoubleOracle)
{
    for (auto [p, q, r] : std::vector<std::tuple<long, long, long>>{{6, 4, 1}, {1, -6, 1}, {3, -4, -1}, {2, 9, 3}, {-1, 3, 2}})
        for (unsigned n = 1; n <= 5; ++n)
            EXPECT_EQ(pair_product_bound({p, q, r}, n), oracle::pair_product(p, q, r, n)) << p << q << r << " n=" << n;
}

TEST(PairProductBound, TermsDivideBound)
{
    for (auto [p, q, r] : std::vector<std::tuple<long, long, long>>{{6, 4, 1}, {7, 5, 1}, {1, -6, 1}, {3, -4, -1}, {2, 9, 3}}) {
        const auto a = oracle::standard(p, q, r, 21);
        for (unsigned n = 1; n <= 20; ++n) {
            const mpz_class b = pair_product_bound({p, q, r}, n);
            if (a[n] == 0) EXPECT_EQ(b, 0);
            else EXPECT_TRUE(mpz_divisible_p(b.get_mpz_t(), a[n].get_mpz_t())) << p << q << r << " n=" << n;
        }
    }
}
