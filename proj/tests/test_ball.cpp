#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "lds4/ball.hpp"

using namespace lds4;

TEST(RealBall, IntegersStayExact)
{
    const RealBall a(mpz_class("123456789012345678901234567890"), 128);
    const RealBall b(-987654321L, 128);
    const RealBall s = a * b + a - b;
    EXPECT_TRUE(s.is_exact());
    EXPECT_TRUE(s.contains(mpz_class("123456789012345678901234567890") * -987654321 + mpz_class("123456789012345678901234567890") + 987654321));
}

TEST(RealBall, SqrtEnclosesRoot)
{
    for (long v : {2L, 3L, 5L, 1000003L}) {
        const RealBall r = sqrt(RealBall(v, 200));
        EXPECT_FALSE(r.is_exact());
        EXPECT_TRUE((r * r).contains(v));
        EXPECT_TRUE(radius_below(r.rad(), -180));
    }
    EXPECT_TRUE(sqrt(RealBall(49L, 64)).contains(7));
}

TEST(RealBall, RationalAndDivision)
{
    const RealBall third = RealBall::from_rational(mpq_class(1, 3), 256);
    EXPECT_TRUE((third * RealBall(3L, 256)).contains(1));
    EXPECT_THROW(RealBall(1L, 64) / RealBall::from_string("0", 1e-5, 64), InsufficientPrecision);
    EXPECT_TRUE(certainly_less(third, half(256)));
}

TEST(RealBall, NearestInteger)
{
    EXPECT_EQ(nearest_integer(RealBall::from_string("5.037", 0, 128)), 5);
    EXPECT_EQ(nearest_integer(RealBall::from_string("-0.4999", 1e-10, 128)), 0);
    EXPECT_EQ(nearest_integer(RealBall::from_string("-2.6", 1e-3, 128)), -3);
    EXPECT_THROW(nearest_integer(RealBall::from_string("2.5", 0, 64)), InsufficientPrecision);
    EXPECT_THROW(nearest_integer(RealBall::from_string("2.4999", 1e-3, 64)), InsufficientPrecision);

    // phi^5 / sqrt 5 is F_5
    const mpfr_prec_t prec = 256;
    const RealBall s5 = sqrt(RealBall(5L, prec));
    const RealBall phi = (RealBall(1L, prec) + s5) / RealBall(2L, prec);
    EXPECT_EQ(nearest_integer(pow(phi, 5) / s5), 5);
    EXPECT_EQ(nearest_integer(pow(phi, 80) / s5), mpz_class("23416728348467685"));
}

TEST(RealBall, UniqueInteger)
{
    EXPECT_EQ(unique_integer(RealBall::from_string("-6", 1e-20, 128)), -6);
    EXPECT_THROW(unique_integer(RealBall::from_string("3.4", 1e-20, 128)), Error);
    EXPECT_THROW(unique_integer(RealBall::from_string("3", 2.0, 128)), InsufficientPrecision);
}

TEST(ComplexBall, SqrtOfNegativeRealIsPositiveImaginary)
{
    const ComplexBall r = sqrt(ComplexBall(-4L, 128));
    EXPECT_TRUE(r.re().is_exact());
    EXPECT_TRUE(r.re().contains(0));
    EXPECT_TRUE(r.im().contains(2));
    EXPECT_TRUE(r.im().certainly_positive());
}

TEST(ComplexBall, PrincipalSqrtProperty)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-50, 50);
    for (int i = 0; i < 200; ++i) {
        const long a = d(rng), b = d(rng);
        const ComplexBall z(a, b, 192);
        const ComplexBall w = sqrt(z);
        const ComplexBall back = w * w - z;
        EXPECT_TRUE(back.contains_zero()) << a << "+" << b << "i";
        EXPECT_FALSE(w.re().certainly_negative());
        const std::complex<double> ref = std::sqrt(std::complex<double>(a, b));
        EXPECT_NEAR(w.re().to_double(), ref.real(), 1e-9);
        if (b != 0 || a >= 0) EXPECT_NEAR(w.im().to_double(), ref.imag(), 1e-9);
        else EXPECT_NEAR(w.im().to_double(), std::sqrt(-double(a)), 1e-9);
    }
}

TEST(ComplexBall, DivisionAndAbs)
{
    const ComplexBall z(3L, 4L, 128);
    EXPECT_TRUE(abs(z).contains(5));
    const ComplexBall q = z / ComplexBall(0L, 1L, 128);
    EXPECT_TRUE(q.re().contains(4));
    EXPECT_TRUE(q.im().contains(-3));
    EXPECT_THROW(z / ComplexBall(128), InsufficientPrecision);
}

TEST(Adaptive, DoublesUntilDecided)
{
    std::vector<mpfr_prec_t> seen;
    const int v = with_adaptive_precision(64, [&](mpfr_prec_t p) {
        seen.push_back(p);
        if (p < 512) throw InsufficientPrecision("more");
        return 1;
    });
    EXPECT_EQ(v, 1);
    EXPECT_EQ(seen, (std::vector<mpfr_prec_t>{64, 128, 256, 512}));
    EXPECT_THROW(with_adaptive_precision(64, [](mpfr_prec_t) -> int { throw InsufficientPrecision("never"); }, 256),
                 PrecisionExhausted);
}

TEST(Decimal, Formatting)
{
    EXPECT_EQ(to_decimal(RealBall(-6L, 64).mid(), 10), "-6");
    EXPECT_EQ(to_decimal(RealBall::from_rational(mpq_class(1, 4), 64).mid(), 10), "0.25");
}
