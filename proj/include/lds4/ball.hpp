#ifndef LDS4_BALL_HPP
#define LDS4_BALL_HPP

// Midpoint-radius ("ball") arithmetic over MPFR.
//
// A RealBall [m +/- r] encloses one exact real number. Midpoints carry the
// working precision and are rounded to nearest; radii are kept at a small
// fixed precision and every radius computation rounds upward, so the
// enclosure survives every operation. A ComplexBall is a rectangle made of
// two RealBalls.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "lds4/error.hpp"

namespace lds4 {

inline constexpr mpfr_prec_t kDefaultPrecision = 256;
inline constexpr mpfr_prec_t kPrecisionCap = 16384;
inline constexpr mpfr_prec_t kRadiusPrecision = 64;

/// Owning wrapper around mpfr_t.
class Float {
public:
    explicit Float(mpfr_prec_t prec = kRadiusPrecision)
    {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Float(const Float& other)
    {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    Float(Float&& other) noexcept
    {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, other.v_);
    }
    Float& operator=(Float other) noexcept
    {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~Float() { mpfr_clear(v_); }

    mpfr_ptr get() noexcept { return v_; }
    mpfr_srcptr get() const noexcept { return v_; }
    mpfr_prec_t precision() const noexcept { return mpfr_get_prec(v_); }
    bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }

private:
    mpfr_t v_;
};

namespace detail {

// |x| rounded up to radius precision.
inline Float abs_up(mpfr_srcptr x)
{
    Float r;
    mpfr_abs(r.get(), x, MPFR_RNDU);
    return r;
}

// |x| rounded down to radius precision.
inline Float abs_down(mpfr_srcptr x)
{
    Float r;
    mpfr_abs(r.get(), x, MPFR_RNDD);
    return r;
}

// rad += ulp(mid) when the operation that produced mid was inexact.
inline void add_rounding_error(Float& rad, mpfr_srcptr mid, int ternary)
{
    if (ternary == 0 || mpfr_zero_p(mid)) return;
    Float ulp;
    mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid) - mpfr_get_prec(mid), MPFR_RNDU);
    mpfr_add(rad.get(), rad.get(), ulp.get(), MPFR_RNDU);
}

inline void add_up(Float& acc, const Float& x) { mpfr_add(acc.get(), acc.get(), x.get(), MPFR_RNDU); }

inline Float mul_up(const Float& a, const Float& b)
{
    Float r;
    mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDU);
    return r;
}

}  // namespace detail

class RealBall {
public:
    explicit RealBall(mpfr_prec_t prec = kDefaultPrecision) : mid_(prec) {}

    RealBall(const mpz_class& value, mpfr_prec_t prec) : mid_(prec)
    {
        int t = mpfr_set_z(mid_.get(), value.get_mpz_t(), MPFR_RNDN);
        detail::add_rounding_error(rad_, mid_.get(), t);
    }

    RealBall(long value, mpfr_prec_t prec) : mid_(prec)
    {
        int t = mpfr_set_si(mid_.get(), value, MPFR_RNDN);
        detail::add_rounding_error(rad_, mid_.get(), t);
    }

    static RealBall from_rational(const mpq_class& value, mpfr_prec_t prec)
    {
        RealBall b(prec);
        int t = mpfr_set_q(b.mid_.get(), value.get_mpq_t(), MPFR_RNDN);
        detail::add_rounding_error(b.rad_, b.mid_.get(), t);
        return b;
    }

    /// Ball from a decimal/scientific string and an explicit radius.
    static RealBall from_string(const std::string& decimal, double radius, mpfr_prec_t prec)
    {
        RealBall b(prec);
        int t = mpfr_set_str(b.mid_.get(), decimal.c_str(), 10, MPFR_RNDN);
        detail::add_rounding_error(b.rad_, b.mid_.get(), t);
        Float r;
        mpfr_set_d(r.get(), radius, MPFR_RNDU);
        detail::add_up(b.rad_, r);
        return b;
    }

    static RealBall from_parts(Float mid, Float rad)
    {
        RealBall b(mid.precision());
        b.mid_ = std::move(mid);
        b.rad_ = std::move(rad);
        return b;
    }

    const Float& mid() const noexcept { return mid_; }
    const Float& rad() const noexcept { return rad_; }
    mpfr_prec_t precision() const noexcept { return mid_.precision(); }
    bool is_exact() const noexcept { return rad_.is_zero(); }

    /// Rigorous lower/upper endpoint.
    Float lower() const
    {
        Float r(precision());
        mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
        return r;
    }
    Float upper() const
    {
        Float r(precision());
        mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
        return r;
    }

    bool certainly_positive() const { return mpfr_sgn(lower().get()) > 0; }
    bool certainly_negative() const { return mpfr_sgn(upper().get()) < 0; }
    bool certainly_nonzero() const { return certainly_positive() || certainly_negative(); }
    bool contains_zero() const { return !certainly_nonzero(); }

    bool contains(const mpz_class& v) const
    {
        return mpfr_cmp_z(lower().get(), v.get_mpz_t()) <= 0 && mpfr_cmp_z(upper().get(), v.get_mpz_t()) >= 0;
    }

    /// Upper bound of |x| over the ball, at radius precision.
    Float abs_upper() const
    {
        Float r = detail::abs_up(mid_.get());
        detail::add_up(r, rad_);
        return r;
    }

    /// Lower bound of |x| over the ball (zero if the ball contains zero).
    Float abs_lower() const
    {
        Float r = detail::abs_down(mid_.get());
        mpfr_sub(r.get(), r.get(), rad_.get(), MPFR_RNDD);
        if (mpfr_sgn(r.get()) < 0) mpfr_set_zero(r.get(), 1);
        return r;
    }

    /// Radius bound, widened in place.
    void widen(const Float& extra) { detail::add_up(rad_, extra); }

    double to_double() const { return mpfr_get_d(mid_.get(), MPFR_RNDN); }

    friend RealBall operator-(const RealBall& a)
    {
        RealBall r(a);
        mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
        return r;
    }

    friend RealBall operator+(const RealBall& a, const RealBall& b) { return add_sub(a, b, false); }
    friend RealBall operator-(const RealBall& a, const RealBall& b) { return add_sub(a, b, true); }

    friend RealBall operator*(const RealBall& a, const RealBall& b)
    {
        RealBall r(std::max(a.precision(), b.precision()));
        int t = mpfr_mul(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
        Float am = detail::abs_up(a.mid_.get());
        Float bm = detail::abs_up(b.mid_.get());
        r.rad_ = detail::mul_up(am, b.rad_);
        detail::add_up(r.rad_, detail::mul_up(bm, a.rad_));
        detail::add_up(r.rad_, detail::mul_up(a.rad_, b.rad_));
        detail::add_rounding_error(r.rad_, r.mid_.get(), t);
        return r;
    }

    friend RealBall operator/(const RealBall& a, const RealBall& b)
    {
        // |a/b - am/bm| <= (ar|bm| + |am|br) / (|bm|(|bm| - br))
        Float bm_lo = detail::abs_down(b.mid_.get());
        Float gap;
        mpfr_sub(gap.get(), bm_lo.get(), b.rad_.get(), MPFR_RNDD);
        if (mpfr_sgn(gap.get()) <= 0) throw InsufficientPrecision("division by a ball that contains zero");
        RealBall r(std::max(a.precision(), b.precision()));
        int t = mpfr_div(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
        Float num = detail::mul_up(a.rad_, detail::abs_up(b.mid_.get()));
        detail::add_up(num, detail::mul_up(detail::abs_up(a.mid_.get()), b.rad_));
        Float den;
        mpfr_mul(den.get(), bm_lo.get(), gap.get(), MPFR_RNDD);
        mpfr_div(r.rad_.get(), num.get(), den.get(), MPFR_RNDU);
        detail::add_rounding_error(r.rad_, r.mid_.get(), t);
        return r;
    }

    RealBall& operator+=(const RealBall& o) { return *this = *this + o; }
    RealBall& operator-=(const RealBall& o) { return *this = *this - o; }
    RealBall& operator*=(const RealBall& o) { return *this = *this * o; }

    /// Square root of the non-negative part of the ball.
    friend RealBall sqrt(const RealBall& x)
    {
        if (x.certainly_negative()) throw PreconditionError("square root of a negative real ball");
        RealBall r(x.precision());
        if (mpfr_sgn(x.mid_.get()) <= 0) {
            // values lie in [0, m + r] with m <= 0
            Float hi = x.upper();
            if (mpfr_sgn(hi.get()) > 0) mpfr_sqrt(r.rad_.get(), hi.get(), MPFR_RNDU);
            return r;
        }
        int t = mpfr_sqrt(r.mid_.get(), x.mid_.get(), MPFR_RNDN);
        if (!x.rad_.is_zero()) {
            // |sqrt(y) - sqrt(m)| <= min(r / sqrt(m), sqrt(r))
            Float sm;
            mpfr_sqrt(sm.get(), x.mid_.get(), MPFR_RNDD);
            Float a;
            mpfr_div(a.get(), x.rad_.get(), sm.get(), MPFR_RNDU);
            Float b;
            mpfr_sqrt(b.get(), x.rad_.get(), MPFR_RNDU);
            r.rad_ = mpfr_cmp(a.get(), b.get()) < 0 ? a : b;
        }
        detail::add_rounding_error(r.rad_, r.mid_.get(), t);
        return r;
    }

private:
    static RealBall add_sub(const RealBall& a, const RealBall& b, bool subtract)
    {
        RealBall r(std::max(a.precision(), b.precision()));
        int t = subtract ? mpfr_sub(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN)
                         : mpfr_add(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
        mpfr_add(r.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
        detail::add_rounding_error(r.rad_, r.mid_.get(), t);
        return r;
    }

    Float mid_;
    Float rad_{kRadiusPrecision};
};

/// True when a < b holds for every pair of points in the two balls.
inline bool certainly_less(const RealBall& a, const RealBall& b)
{
    return mpfr_cmp(a.upper().get(), b.lower().get()) < 0;
}

inline RealBall half(mpfr_prec_t prec) { return RealBall::from_rational(mpq_class(1, 2), prec); }

/// Nearest integer E(x). Throws InsufficientPrecision when the ball
/// contains a half-integer, so the answer is not determined.
inline mpz_class nearest_integer(const RealBall& x)
{
    mpz_class k;
    mpfr_get_z(k.get_mpz_t(), x.mid().get(), MPFR_RNDN);
    Float d_lo(x.precision() + 8), d_hi(x.precision() + 8);
    mpfr_sub_z(d_lo.get(), x.mid().get(), k.get_mpz_t(), MPFR_RNDD);
    mpfr_sub_z(d_hi.get(), x.mid().get(), k.get_mpz_t(), MPFR_RNDU);
    mpfr_sub(d_lo.get(), d_lo.get(), x.rad().get(), MPFR_RNDD);
    mpfr_add(d_hi.get(), d_hi.get(), x.rad().get(), MPFR_RNDU);
    bool inside = mpfr_cmp_si_2exp(d_lo.get(), -1, -1) > 0 && mpfr_cmp_si_2exp(d_hi.get(), 1, -1) < 0;
    if (!inside) throw InsufficientPrecision("ball contains a half-integer; nearest integer undetermined");
    return k;
}

/// The single integer enclosed by the ball. Throws InsufficientPrecision when
/// the ball is too wide to isolate one integer.
inline mpz_class unique_integer(const RealBall& x)
{
    mpz_class k;
    mpfr_get_z(k.get_mpz_t(), x.mid().get(), MPFR_RNDN);
    Float d_lo(x.precision() + 8), d_hi(x.precision() + 8);
    mpfr_sub_z(d_lo.get(), x.mid().get(), k.get_mpz_t(), MPFR_RNDD);
    mpfr_sub_z(d_hi.get(), x.mid().get(), k.get_mpz_t(), MPFR_RNDU);
    mpfr_sub(d_lo.get(), d_lo.get(), x.rad().get(), MPFR_RNDD);
    mpfr_add(d_hi.get(), d_hi.get(), x.rad().get(), MPFR_RNDU);
    if (mpfr_cmp_si(d_lo.get(), -1) <= 0 || mpfr_cmp_si(d_hi.get(), 1) >= 0)
        throw InsufficientPrecision("ball too wide to isolate an integer");
    if (mpfr_sgn(d_lo.get()) > 0 || mpfr_sgn(d_hi.get()) < 0)
        throw Error("enclosed value is not an integer");
    return k;
}

class ComplexBall {
public:
    explicit ComplexBall(mpfr_prec_t prec = kDefaultPrecision) : re_(prec), im_(prec) {}
    ComplexBall(RealBall re, RealBall im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit ComplexBall(RealBall re) : re_(std::move(re)), im_(re_.precision()) {}
    ComplexBall(const mpz_class& re, mpfr_prec_t prec) : re_(re, prec), im_(prec) {}
    ComplexBall(long re, mpfr_prec_t prec) : re_(re, prec), im_(prec) {}
    ComplexBall(long re, long im, mpfr_prec_t prec) : re_(re, prec), im_(im, prec) {}

    static ComplexBall i(mpfr_prec_t prec) { return {RealBall(prec), RealBall(1L, prec)}; }

    const RealBall& re() const noexcept { return re_; }
    const RealBall& im() const noexcept { return im_; }
    mpfr_prec_t precision() const noexcept { return std::max(re_.precision(), im_.precision()); }

    bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
    bool certainly_nonzero() const { return !contains_zero(); }
    bool is_real_exact() const { return im_.is_exact() && im_.mid().is_zero(); }

    /// Upper bound on the distance from the midpoint to any enclosed value.
    Float radius() const
    {
        Float r(re_.rad());
        detail::add_up(r, im_.rad());
        return r;
    }

    friend ComplexBall operator-(const ComplexBall& a) { return {-a.re_, -a.im_}; }
    friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
    friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
    friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b)
    {
        if (a.is_real_exact() && b.is_real_exact()) return ComplexBall(a.re_ * b.re_);
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend ComplexBall operator/(const ComplexBall& a, const ComplexBall& b)
    {
        if (b.is_real_exact()) return {a.re_ / b.re_, a.im_ / b.re_};
        RealBall n = b.re_ * b.re_ + b.im_ * b.im_;
        ComplexBall num = a * conj(b);
        return {num.re_ / n, num.im_ / n};
    }
    ComplexBall& operator+=(const ComplexBall& o) { return *this = *this + o; }
    ComplexBall& operator-=(const ComplexBall& o) { return *this = *this - o; }
    ComplexBall& operator*=(const ComplexBall& o) { return *this = *this * o; }

    friend ComplexBall conj(const ComplexBall& a) { return {a.re_, -a.im_}; }

    friend RealBall abs(const ComplexBall& a)
    {
        if (a.is_real_exact()) {
            RealBall r = a.re_;
            return mpfr_sgn(r.mid().get()) < 0 ? -r : r;
        }
        return sqrt(a.re_ * a.re_ + a.im_ * a.im_);
    }

    friend ComplexBall sqrt(const ComplexBall& z) { return principal_sqrt(z); }

private:
    static ComplexBall principal_sqrt(const ComplexBall& z);

    RealBall re_;
    RealBall im_;
};

inline ComplexBall ComplexBall::principal_sqrt(const ComplexBall& z)
{
    const mpfr_prec_t prec = z.precision();
    if (z.is_real_exact()) {
        // exactly on the real axis; negative reals map to the positive imaginary axis
        if (!z.re_.certainly_negative() && !z.re_.certainly_positive()) {
            RealBall re(prec), im(prec);
            Float hi = z.re_.upper();
            Float lo = z.re_.lower();
            Float a, b;
            if (mpfr_sgn(hi.get()) > 0) mpfr_sqrt(a.get(), hi.get(), MPFR_RNDU);
            if (mpfr_sgn(lo.get()) < 0) {
                mpfr_neg(lo.get(), lo.get(), MPFR_RNDU);
                mpfr_sqrt(b.get(), lo.get(), MPFR_RNDU);
            }
            re.widen(a);
            im.widen(b);
            return {re, im};
        }
        if (z.re_.certainly_positive()) return ComplexBall(sqrt(z.re_));
        return {RealBall(prec), sqrt(-z.re_)};
    }

    const bool analytic = z.re_.certainly_positive() || z.im_.certainly_nonzero();
    if (!analytic) {
        // ball touches the branch cut or the origin: enclose every branch
        Float m;
        mpfr_hypot(m.get(), z.re_.mid().get(), z.im_.mid().get(), MPFR_RNDU);
        detail::add_up(m, z.radius());
        Float s;
        mpfr_sqrt(s.get(), m.get(), MPFR_RNDU);
        RealBall re(prec), im(prec);
        re.widen(s);
        im.widen(s);
        return {re, im};
    }

    // Midpoint root with guard bits, then the analytic error bound
    // |sqrt(z) - sqrt(z0)| <= |z - z0| / |sqrt(z0)| (both roots lie in the
    // same half plane, so they subtend less than a right angle).
    const mpfr_prec_t work = prec + 32;
    Float x(work), y(work), m(work), a(work), b(work);
    mpfr_set(x.get(), z.re_.mid().get(), MPFR_RNDN);
    mpfr_set(y.get(), z.im_.mid().get(), MPFR_RNDN);
    mpfr_hypot(m.get(), x.get(), y.get(), MPFR_RNDN);
    if (mpfr_sgn(x.get()) >= 0) {
        mpfr_add(a.get(), m.get(), x.get(), MPFR_RNDN);
        mpfr_div_2ui(a.get(), a.get(), 1, MPFR_RNDN);
        mpfr_sqrt(a.get(), a.get(), MPFR_RNDN);
        mpfr_div(b.get(), y.get(), a.get(), MPFR_RNDN);
        mpfr_div_2ui(b.get(), b.get(), 1, MPFR_RNDN);
    } else {
        mpfr_sub(b.get(), m.get(), x.get(), MPFR_RNDN);
        mpfr_div_2ui(b.get(), b.get(), 1, MPFR_RNDN);
        mpfr_sqrt(b.get(), b.get(), MPFR_RNDN);
        mpfr_abs(a.get(), y.get(), MPFR_RNDN);
        mpfr_div(a.get(), a.get(), b.get(), MPFR_RNDN);
        mpfr_div_2ui(a.get(), a.get(), 1, MPFR_RNDN);
        if (mpfr_sgn(y.get()) < 0) mpfr_neg(b.get(), b.get(), MPFR_RNDN);
    }
    Float re_mid(prec), im_mid(prec);
    mpfr_set(re_mid.get(), a.get(), MPFR_RNDN);
    mpfr_set(im_mid.get(), b.get(), MPFR_RNDN);

    // formula rounding: a few ulps at the guarded precision plus the final rounding
    Float round_err = detail::abs_up(a.get());
    detail::add_up(round_err, detail::abs_up(b.get()));
    mpfr_mul_2si(round_err.get(), round_err.get(), 1 - static_cast<long>(prec), MPFR_RNDU);

    Float prop;
    if (!z.radius().is_zero()) {
        Float m_lo;
        mpfr_hypot(m_lo.get(), z.re_.mid().get(), z.im_.mid().get(), MPFR_RNDD);
        mpfr_sqrt(m_lo.get(), m_lo.get(), MPFR_RNDD);
        mpfr_div(prop.get(), z.radius().get(), m_lo.get(), MPFR_RNDU);
    }
    detail::add_up(prop, round_err);
    return {RealBall::from_parts(re_mid, prop), RealBall::from_parts(im_mid, prop)};
}

template <class Ball>
Ball pow(const Ball& base, std::size_t n)
{
    Ball result(1L, base.precision());
    Ball b = base;
    while (n > 0) {
        if (n & 1U) result = result * b;
        n >>= 1U;
        if (n > 0) b = b * b;
    }
    return result;
}

/// Binary exponent e with radius < 2^e; nullopt-like sentinel when exact.
inline long radius_exponent(const Float& rad)
{
    if (rad.is_zero()) return 0;
    return mpfr_get_exp(rad.get());
}

/// True if the ball radius is certified below 2^e.
inline bool radius_below(const Float& rad, long e)
{
    if (rad.is_zero()) return true;
    return mpfr_cmp_ui_2exp(rad.get(), 1, e) < 0;
}

/// Midpoint as a decimal string with the requested significant digits.
inline std::string to_decimal(const Float& x, int digits = 40)
{
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, x.get());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

/// Runs fn(prec) for prec = start, 2*start, ... until it stops throwing
/// InsufficientPrecision. Throws PrecisionExhausted past the cap.
template <class Fn>
auto with_adaptive_precision(mpfr_prec_t start, Fn&& fn, mpfr_prec_t cap = kPrecisionCap)
{
    if (start < MPFR_PREC_MIN) throw PreconditionError("precision must be at least 2 bits");
    for (mpfr_prec_t prec = start;; prec *= 2) {
        try {
            return fn(prec);
        } catch (const InsufficientPrecision& e) {
            if (prec >= cap)
                throw PrecisionExhausted(std::string("precision cap of ") + std::to_string(cap) +
                                         " bits reached: " + e.what());
        }
    }
}

}  // namespace lds4

#endif  // LDS4_BALL_HPP
