#ifndef LDS4_SALEM_HPP
#define LDS4_SALEM_HPP

// Salem standard quartics x^4 - p x^3 + (q + 2) x^2 - p x + 1 with
// -2p - 4 < q < 2p - 4: roots, Binet coefficients, the smallness test that
// makes u_n = E(lambda alpha^n), certified nearest-integer sequences, the
// t-family, and the (p, q) region scan.

#include <algorithm>
#include <array>
#include <cstddef>
#include <future>
#include <optional>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lds4/ball.hpp"
#include "lds4/error.hpp"
#include "lds4/polyalg.hpp"
#include "lds4/seqcore.hpp"

namespace lds4 {

/// -2p - 4 < q < 2p - 4, exact.
inline bool in_salem_strip(long p, long q) { return -2 * p - 4 < q && q < 2 * p - 4; }

inline StandardParams salem_params(long p, long q) { return {p, q, 1}; }

struct SalemRoots {
    RealBall y_plus;   // alpha + 1/alpha
    RealBall y_minus;  // gamma + 1/gamma = 2 Re(gamma)
    RealBall alpha;    // real root > 1
    ComplexBall gamma;  // unit-circle root in the upper half plane
};

namespace detail {

inline SalemRoots salem_roots_at(long p, long q, mpfr_prec_t prec)
{
    const RealBall pb(p, prec), two(2L, prec), four(4L, prec);
    const RealBall disc = sqrt(RealBall(mpz_class(p) * p - 4 * mpz_class(q), prec));
    RealBall yp = (pb + disc) / two;
    RealBall ym = (pb - disc) / two;
    if (!certainly_less(two, yp) || !certainly_less(-two, ym) || !certainly_less(ym, two))
        throw InsufficientPrecision("could not separate y+ > 2 > |y-|");
    RealBall alpha = (yp + sqrt(yp * yp - four)) / two;
    ComplexBall gamma(ym / two, sqrt(four - ym * ym) / two);
    return {std::move(yp), std::move(ym), std::move(alpha), std::move(gamma)};
}

template <class Ball>
Ball salem_eval(long p, long q, const Ball& x)
{
    const mpfr_prec_t prec = x.precision();
    const Ball x2 = x * x;
    const Ball x3 = x2 * x;
    return x2 * x2 - Ball(p, prec) * x3 + Ball(q + 2, prec) * x2 - Ball(p, prec) * x + Ball(1L, prec);
}

}  // namespace detail

/// alpha > 1 and gamma (|gamma| = 1, Im gamma > 0) via y = x + 1/x:
/// y^2 - p y + q = 0, alpha = (y+ + sqrt(y+^2 - 4))/2,
/// gamma = (y- + i sqrt(4 - y-^2))/2.
inline SalemRoots salem_root(long p, long q, mpfr_prec_t precision = kDefaultPrecision,
                             mpfr_prec_t cap = kPrecisionCap)
{
    if (!in_salem_strip(p, q)) throw PreconditionError("(p, q) is not a Salem standard pair");
    return with_adaptive_precision(precision, [&](mpfr_prec_t prec) { return detail::salem_roots_at(p, q, prec); }, cap);
}

struct SalemResiduals {
    Float alpha;         // upper bound of |g(alpha)|
    Float gamma;         // upper bound of |g(gamma)|
    Float gamma_modulus;  // upper bound of ||gamma| - 1|
};

inline SalemResiduals salem_residuals(long p, long q, const SalemRoots& roots)
{
    SalemResiduals out;
    out.alpha = detail::salem_eval(p, q, roots.alpha).abs_upper();
    out.gamma = abs(detail::salem_eval(p, q, roots.gamma)).abs_upper();
    out.gamma_modulus = (abs(roots.gamma) - RealBall(1L, roots.alpha.precision())).abs_upper();
    return out;
}

/// Exact strip test plus a certified check of the root layout: one real
/// root above 1, its reciprocal in (0, 1), and a conjugate pair on the unit
/// circle.
inline bool is_salem_standard(long p, long q)
{
    if (!in_salem_strip(p, q)) return false;
    const SalemRoots roots = salem_root(p, q, 128);
    const mpfr_prec_t prec = roots.alpha.precision();
    const RealBall one(1L, prec);
    const RealBall inv = one / roots.alpha;
    const bool real_pair = certainly_less(one, roots.alpha) && inv.certainly_positive() && certainly_less(inv, one);
    const bool on_circle = (abs(roots.gamma) - one).contains_zero() && roots.gamma.im().certainly_positive();
    return real_pair && on_circle;
}

/// Validated quartic with Binet coefficients:
/// u_n = lambda alpha^n + lambda1 alpha^-n + lambda2 gamma^n + lambda3 gamma^-n.
struct SalemQuartic {
    long p = 0;
    long q = 0;
    RealBall alpha;
    ComplexBall gamma;
    std::array<ComplexBall, 4> binet;  // lambda, lambda1, lambda2, lambda3
    mpfr_prec_t precision = kDefaultPrecision;

    const ComplexBall& lambda() const { return binet[0]; }
};

namespace detail {

// Gaussian elimination with partial pivoting on ball midpoints.
template <std::size_t N>
std::array<ComplexBall, N> solve_linear(std::array<std::array<ComplexBall, N>, N> a, std::array<ComplexBall, N> b)
{
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        double best = -1;
        for (std::size_t row = col; row < N; ++row) {
            const double mag = std::abs(a[row][col].re().to_double()) + std::abs(a[row][col].im().to_double());
            if (mag > best) {
                best = mag;
                piv = row;
            }
        }
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (!a[col][col].certainly_nonzero()) throw InsufficientPrecision("singular pivot in Binet system");
        for (std::size_t row = col + 1; row < N; ++row) {
            const ComplexBall f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < N; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::array<ComplexBall, N> x;
    for (std::size_t i = N; i-- > 0;) {
        ComplexBall acc = b[i];
        for (std::size_t k = i + 1; k < N; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

inline SalemQuartic binet_at(long p, long q, mpfr_prec_t prec)
{
    SalemRoots roots = salem_roots_at(p, q, prec);
    const ComplexBall one(1L, prec);
    const ComplexBall a(roots.alpha);
    const std::array<ComplexBall, 4> nodes{a, one / a, roots.gamma, one / roots.gamma};
    const SequenceWindow ic = standard_initial_conditions(salem_params(p, q));

    std::array<std::array<ComplexBall, 4>, 4> v;
    std::array<ComplexBall, 4> rhs;
    for (std::size_t j = 0; j < 4; ++j) {
        ComplexBall pw(1L, prec);
        for (std::size_t n = 0; n < 4; ++n) {
            v[n][j] = pw;
            pw *= nodes[j];
        }
    }
    for (std::size_t n = 0; n < 4; ++n) rhs[n] = ComplexBall(ic.terms[n], prec);
    std::array<ComplexBall, 4> coeffs = solve_linear<4>(v, rhs);

    // construction check: reproduce u_0..u_4
    const SequenceWindow exact = standard_terms(salem_params(p, q), 5);
    for (std::size_t n = 0; n <= 4; ++n) {
        ComplexBall sum(prec);
        for (std::size_t j = 0; j < 4; ++j) sum += coeffs[j] * pow(nodes[j], n);
        if (!(sum - ComplexBall(exact.terms[n], prec)).contains_zero())
            throw std::logic_error("Binet coefficients do not reproduce the initial terms");
    }
    return {p, q, std::move(roots.alpha), std::move(roots.gamma), std::move(coeffs), prec};
}

}  // namespace detail

/// Solves the 4x4 Vandermonde system against the initial conditions
/// 0, 1, p, p^2 - q - 3, raising precision if a pivot cannot be certified.
inline SalemQuartic binet_coefficients(long p, long q, mpfr_prec_t precision = kDefaultPrecision,
                                       mpfr_prec_t cap = kPrecisionCap)
{
    if (!in_salem_strip(p, q)) throw PreconditionError("(p, q) is not a Salem standard pair");
    return with_adaptive_precision(precision, [&](mpfr_prec_t prec) { return detail::binet_at(p, q, prec); }, cap);
}

enum class Certainty { yes, no, undecided };

inline std::string_view to_string(Certainty c)
{
    switch (c) {
    case Certainty::yes: return "yes";
    case Certainty::no: return "no";
    case Certainty::undecided: return "undecided";
    }
    return "?";
}

struct SmallnessVerdict {
    /// |lambda1 / alpha| + |lambda2| + |lambda3| < 1/2
    Certainty holds_for_all_n_ge_1 = Certainty::undecided;
    /// |lambda2| + |lambda3| < 1/2
    Certainty holds_eventually = Certainty::undecided;
    RealBall margin;           // 1/2 - (|lambda1 / alpha| + |lambda2| + |lambda3|)
    RealBall eventual_margin;  // 1/2 - (|lambda2| + |lambda3|)
    mpfr_prec_t precision = kDefaultPrecision;
};

namespace detail {

inline Certainty sign_certainty(const RealBall& x)
{
    if (x.certainly_positive()) return Certainty::yes;
    if (x.certainly_negative()) return Certainty::no;
    return Certainty::undecided;
}

inline SmallnessVerdict smallness_at(const SalemQuartic& sq)
{
    const mpfr_prec_t prec = sq.precision;
    const RealBall tail = abs(sq.binet[2]) + abs(sq.binet[3]);
    const RealBall first = abs(sq.binet[1] / ComplexBall(sq.alpha));
    SmallnessVerdict v;
    v.precision = prec;
    v.margin = half(prec) - (first + tail);
    v.eventual_margin = half(prec) - tail;
    v.holds_for_all_n_ge_1 = sign_certainty(v.margin);
    v.holds_eventually = sign_certainty(v.eventual_margin);
    if (v.holds_for_all_n_ge_1 == Certainty::yes) v.holds_eventually = Certainty::yes;
    return v;
}

}  // namespace detail

/// Certified smallness verdicts. Undecided comparisons trigger recomputation
/// at doubled precision; whatever is still undecided at the cap is reported
/// as undecided.
inline SmallnessVerdict smallness_condition(const SalemQuartic& sq, mpfr_prec_t cap = kPrecisionCap)
{
    SmallnessVerdict v = detail::smallness_at(sq);
    mpfr_prec_t prec = sq.precision;
    while ((v.holds_for_all_n_ge_1 == Certainty::undecided || v.holds_eventually == Certainty::undecided) &&
           prec < cap) {
        prec = std::min(prec * 2, cap);
        v = detail::smallness_at(binet_coefficients(sq.p, sq.q, prec, cap));
    }
    return v;
}

inline SmallnessVerdict smallness_condition(long p, long q, mpfr_prec_t precision = kDefaultPrecision,
                                            mpfr_prec_t cap = kPrecisionCap)
{
    return smallness_condition(binet_coefficients(p, q, precision, cap), cap);
}

struct RoundedPowers {
    std::vector<mpz_class> values;  // E(lambda alpha^n) for n = first..last
    mpfr_prec_t max_precision = 0;
};

/// E(lambda alpha^n) for n in [first, last], each certified; precision is
/// doubled for the terms that are still undecided.
inline RoundedPowers rounded_powers(long p, long q, std::size_t first, std::size_t last,
                                    mpfr_prec_t precision = kDefaultPrecision, mpfr_prec_t cap = kPrecisionCap)
{
    if (first > last) throw PreconditionError("empty index range");
    RoundedPowers out;
    const std::size_t count = last - first + 1;
    out.values.resize(count);
    std::vector<bool> done(count, false);
    std::size_t remaining = count;
    for (mpfr_prec_t prec = precision;; prec *= 2) {
        const SalemQuartic sq = binet_coefficients(p, q, prec, cap);
        out.max_precision = std::max(out.max_precision, sq.precision);
        const RealBall lambda = sq.lambda().re();
        RealBall power = pow(sq.alpha, first);
        for (std::size_t i = 0; i < count; ++i) {
            if (i > 0) power *= sq.alpha;
            if (done[i]) continue;
            try {
                out.values[i] = nearest_integer(lambda * power);
                done[i] = true;
                --remaining;
            } catch (const InsufficientPrecision&) {
            }
        }
        if (remaining == 0) return out;
        if (prec >= cap)
            throw PrecisionExhausted("nearest integer undecidable at the precision cap of " + std::to_string(cap) +
                                     " bits");
    }
}

struct NearestIntegerSequence {
    /// E(lambda alpha^n) for n = threshold + 1 .. n_max.
    SequenceWindow window;
    /// n0: 0 when the identity with the LDS holds for every n >= 1; otherwise
    /// the last index (found empirically) where E(lambda alpha^n) != u_n.
    std::size_t threshold = 0;
    SmallnessVerdict verdict;
    mpfr_prec_t max_precision = 0;
};

/// The sequence theta_n = E(lambda alpha^n), n = 1..n_max, with certified
/// rounding.
inline NearestIntegerSequence nearest_integer_sequence(long p, long q, std::size_t n_max,
                                                       mpfr_prec_t precision = kDefaultPrecision,
                                                       mpfr_prec_t cap = kPrecisionCap)
{
    if (n_max < 1) throw PreconditionError("n_max must be at least 1");
    if (!is_salem_standard(p, q)) throw PreconditionError("(p, q) is not a Salem standard pair");
    NearestIntegerSequence out;
    out.verdict = smallness_condition(p, q, precision, cap);
    if (out.verdict.holds_eventually != Certainty::yes)
        throw PreconditionError("smallness condition not certified: |lambda2| + |lambda3| < 1/2 fails or is undecided");

    RoundedPowers rp = rounded_powers(p, q, 1, n_max, precision, cap);
    out.max_precision = rp.max_precision;
    if (out.verdict.holds_for_all_n_ge_1 != Certainty::yes) {
        const SequenceWindow exact = standard_terms(salem_params(p, q), n_max + 1);
        for (std::size_t n = 1; n <= n_max; ++n)
            if (rp.values[n - 1] != exact.terms[n]) out.threshold = n;
        if (out.threshold >= n_max)
            throw PreconditionError("no index up to n_max where E(lambda alpha^n) agrees with the LDS");
    }
    out.window.start_index = out.threshold + 1;
    out.window.terms.assign(rp.values.begin() + static_cast<std::ptrdiff_t>(out.threshold), rp.values.end());
    return out;
}

struct TFamily {
    long p;
    long q;
};

/// x^4 - t x^3 + t x^2 - t x + 1, i.e. (p, q) = (t, t - 2), for t >= 6.
inline TFamily t_family_params(long t)
{
    if (t < 6) throw PreconditionError("the t-family is defined for t >= 6");
    return {t, t - 2};
}

/// 1 / sqrt((t - 4) t + 8)
inline RealBall t_family_lambda(long t, mpfr_prec_t prec)
{
    t_family_params(t);
    return RealBall(1L, prec) / sqrt(RealBall((t - 4) * t + 8, prec));
}

/// (t + sqrt((t-4)t + 8) + sqrt(2) sqrt(t (t + sqrt((t-4)t + 8) - 2) - 4)) / 4
inline RealBall t_family_alpha(long t, mpfr_prec_t prec)
{
    t_family_params(t);
    const RealBall tb(t, prec);
    const RealBall w = sqrt(RealBall((t - 4) * t + 8, prec));
    const RealBall inner = tb * (tb + w - RealBall(2L, prec)) - RealBall(4L, prec);
    return (tb + w + sqrt(RealBall(2L, prec)) * sqrt(inner)) / RealBall(4L, prec);
}

struct RegionBounds {
    mpq_class low;
    mpq_class high;

    bool contains(long q) const { return low < q && q < high; }
};

/// Strict bounds on q for which the smallness condition is claimed:
/// 2 <= p <= 8: -4 - 2p < q < (p^4 + 8p^3 - 160p - 400) / (4p^2 + 32p + 64);
/// p > 8: -4 - 2p < q < -4 + 2p.
inline RegionBounds region_bounds(long p)
{
    if (p < 2) throw PreconditionError("region bounds are defined for p >= 2");
    const mpz_class pz(p);
    RegionBounds b{mpq_class(-4 - 2 * pz), mpq_class()};
    if (p <= 8) {
        const mpz_class num = pz * pz * pz * pz + 8 * pz * pz * pz - 160 * pz - 400;
        const mpz_class den = 4 * pz * pz + 32 * pz + 64;
        b.high = mpq_class(num, den);
        b.high.canonicalize();
    } else {
        b.high = mpq_class(-4 + 2 * pz);
    }
    return b;
}

enum class RegionAgreement { agree, disagree, undecided };

inline std::string_view to_string(RegionAgreement a)
{
    switch (a) {
    case RegionAgreement::agree: return "agree";
    case RegionAgreement::disagree: return "disagree";
    case RegionAgreement::undecided: return "undecided";
    }
    return "?";
}

struct RegionCell {
    long p = 0;
    long q = 0;
    bool in_region = false;
    SmallnessVerdict verdict;
    RegionAgreement agreement = RegionAgreement::undecided;
    /// E(lambda alpha^n) == u_n for n = 1..empirical_terms (checked exactly).
    std::optional<bool> empirical_identity;
};

struct ScanOptions {
    mpfr_prec_t precision = kDefaultPrecision;
    mpfr_prec_t cap = kPrecisionCap;
    /// Scan the whole Salem strip instead of only the closed-form region.
    bool whole_strip = false;
    /// Terms compared against the exact recurrence; 0 disables the check.
    std::size_t empirical_terms = 40;
    unsigned threads = 0;  // 0: hardware concurrency
};

inline RegionCell evaluate_cell(long p, long q, const ScanOptions& opt)
{
    RegionCell cell;
    cell.p = p;
    cell.q = q;
    cell.in_region = region_bounds(p).contains(q);
    cell.verdict = smallness_condition(p, q, opt.precision, opt.cap);
    switch (cell.verdict.holds_for_all_n_ge_1) {
    case Certainty::yes: cell.agreement = cell.in_region ? RegionAgreement::agree : RegionAgreement::disagree; break;
    case Certainty::no: cell.agreement = cell.in_region ? RegionAgreement::disagree : RegionAgreement::agree; break;
    case Certainty::undecided: cell.agreement = RegionAgreement::undecided; break;
    }
    if (opt.empirical_terms > 0) {
        const auto rp = rounded_powers(p, q, 1, opt.empirical_terms, opt.precision, opt.cap);
        const SequenceWindow exact = standard_terms(salem_params(p, q), opt.empirical_terms + 1);
        cell.empirical_identity = std::equal(rp.values.begin(), rp.values.end(), exact.terms.begin() + 1);
    }
    return cell;
}

/// Cells (p, q) for p in [p_min, p_max], sorted by (p, q). By default only q
/// strictly inside region_bounds(p) and the Salem strip; with whole_strip
/// every q of the strip. Cells are evaluated concurrently.
inline std::vector<RegionCell> scan_region(long p_min, long p_max, const ScanOptions& opt = {})
{
    if (p_min < 2 || p_max < p_min) throw PreconditionError("scan needs 2 <= p_min <= p_max");
    std::vector<std::pair<long, long>> cells;
    for (long p = p_min; p <= p_max; ++p) {
        const RegionBounds rb = region_bounds(p);
        for (long q = -2 * p - 3; q < 2 * p - 4; ++q) {
            if (!opt.whole_strip && !rb.contains(q)) continue;
            if (is_salem_standard(p, q)) cells.emplace_back(p, q);
        }
    }

    unsigned threads = opt.threads ? opt.threads : std::max(1U, std::thread::hardware_concurrency());
    std::vector<RegionCell> out(cells.size());
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < cells.size(); i += threads)
                out[i] = evaluate_cell(cells[i].first, cells[i].second, opt);
        }));
    }
    for (auto& f : workers) f.get();
    return out;
}

/// Every Salem standard pair with 2 <= p <= p_max inside the closed-form
/// region, with its certified smallness verdict.
inline std::vector<RegionCell> enumerate_ldsalem(long p_max, mpfr_prec_t precision = kDefaultPrecision)
{
    ScanOptions opt;
    opt.precision = precision;
    return scan_region(2, p_max, opt);
}

}  // namespace lds4

#endif  // LDS4_SALEM_HPP
