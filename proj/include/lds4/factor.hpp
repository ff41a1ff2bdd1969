#ifndef LDS4_FACTOR_HPP
#define LDS4_FACTOR_HPP

// Products of two Lucas sequences, and the reverse direction: splitting a
// standard LDS into two order-2 LDSs over C (canonical representative per
// equivalence family, with k1 normalized to 1).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lds4/ball.hpp"
#include "lds4/error.hpp"
#include "lds4/polyalg.hpp"
#include "lds4/seqcore.hpp"

namespace lds4 {

/// x^2 - h x + k over certified complex numbers.
struct ComplexQuadratic {
    ComplexBall h;
    ComplexBall k;

    static ComplexQuadratic from_lucas(const LucasParams& lp, mpfr_prec_t prec)
    {
        return {ComplexBall(lp.h, prec), ComplexBall(lp.k, prec)};
    }
};

/// Which branch of the factorization a pair came from.
enum class FactorFamily {
    plus,       // p != 0, upper signs
    minus,      // p != 0, lower signs
    p0_first,   // p == 0: {x^2 + 1, x^2 - sqrt(q + 4r) x + r}
    p0_second,  // p == 0: {x^2 + 1, x^2 - sqrt(q) x - r}
};

inline std::string_view to_string(FactorFamily f)
{
    switch (f) {
    case FactorFamily::plus: return "plus";
    case FactorFamily::minus: return "minus";
    case FactorFamily::p0_first: return "p0_first";
    case FactorFamily::p0_second: return "p0_second";
    }
    return "?";
}

struct QuadraticFactorPair {
    ComplexQuadratic first;
    ComplexQuadratic second;
    FactorFamily family = FactorFamily::plus;
};

struct Composition {
    StandardParams params;
    SequenceWindow initial_conditions;
};

/// The product of the Lucas sequences of (h1, k1) and (h2, k2) is the
/// standard LDS with p = h1 h2, q = h1^2 k2 + k1 (h2^2 - 4 k2), r = k1 k2 and
/// initial conditions 0, 1, h1 h2, (h1^2 - k1)(h2^2 - k2).
inline Composition compose_lucas(const LucasParams& a, const LucasParams& b)
{
    a.validate();
    b.validate();
    StandardParams sp{a.h * b.h, a.h * a.h * b.k + a.k * (b.h * b.h - 4 * b.k), a.k * b.k};
    SequenceWindow ic{0, {0, 1, a.h * b.h, (a.h * a.h - a.k) * (b.h * b.h - b.k)}};
    return {std::move(sp), std::move(ic)};
}

/// Ratio of the two roots of x^2 - h x + k is a root of unity (or the roots
/// coincide): h = 0 or h^2 in {k, 2k, 3k, 4k}.
inline bool is_degenerate_lucas(const LucasParams& lp)
{
    if (lp.h == 0) return true;
    const mpz_class h2 = lp.h * lp.h;
    for (int m = 1; m <= 4; ++m)
        if (h2 == m * lp.k) return true;
    return false;
}

struct Factorization {
    std::vector<QuadraticFactorPair> pairs;
    /// Exact observations about the input, e.g. "branch_collapse" when
    /// q + 4r = +/- 2p sqrt(r) and the two branches describe the same family.
    std::vector<std::string> diagnostics;
};

/// All inequivalent factorizations of the standard LDS into two order-2
/// LDSs over C.
inline Factorization factor_standard(const StandardParams& sp, mpfr_prec_t precision = kDefaultPrecision)
{
    sp.validate();
    if (precision < MPFR_PREC_MIN) throw PreconditionError("precision too small");
    const mpz_class s4 = sp.q + 4 * sp.r;
    if (is_square_of_quadratic(sp) && s4 * s4 == 4 * sp.p * sp.p * sp.r)
        throw DegenerateInput("degenerate input: all four roots coincide");
    if (sp.p == 0 && sp.q == 0) throw DegenerateInput("degenerate input: p = 0 requires q != 0");
    if (sp.p == 0 && sp.q + 4 * sp.r == 0) throw DegenerateInput("degenerate input: p = 0 requires q + 4r != 0");

    const mpfr_prec_t prec = precision;
    Factorization out;
    const ComplexBall one(1L, prec), two(2L, prec);
    const ComplexBall p(sp.p, prec), q(sp.q, prec), r(sp.r, prec);

    if (sp.p == 0) {
        const ComplexBall zero(prec);
        out.pairs.push_back({{zero, one}, {sqrt(q + ComplexBall(4L, prec) * r), r}, FactorFamily::p0_first});
        out.pairs.push_back({{zero, one}, {sqrt(q), -r}, FactorFamily::p0_second});
        return out;
    }

    if (s4 * s4 == 4 * sp.p * sp.p * sp.r) out.diagnostics.emplace_back("branch_collapse");

    const ComplexBall root_r = sqrt(r);
    const ComplexBall base = q + ComplexBall(4L, prec) * r;
    const ComplexBall cross = two * p * root_r;
    const ComplexBall a = sqrt(base + cross);
    const ComplexBall b = sqrt(base - cross);
    const ComplexBall denom = two * root_r;

    // plus: s = (a + b) / (2 sqrt r), s_bar = (a - b) / 2; minus swaps the sign of b
    out.pairs.push_back({{(a + b) / denom, one}, {(a - b) / two, r}, FactorFamily::plus});
    out.pairs.push_back({{(a - b) / denom, one}, {(a + b) / two, r}, FactorFamily::minus});
    return out;
}

/// U_0 .. U_{n_max} for a quadratic with ball coefficients.
inline std::vector<ComplexBall> lucas_ball_terms(const ComplexQuadratic& f, std::size_t n_max, mpfr_prec_t prec)
{
    std::vector<ComplexBall> u{ComplexBall(prec), ComplexBall(1L, prec)};
    for (std::size_t n = 2; n <= n_max; ++n) u.push_back(f.h * u[n - 1] - f.k * u[n - 2]);
    u.resize(n_max + 1, ComplexBall(prec));
    return u;
}

/// Coefficients (constant first) of (x^2 - h1 x + k1) (x) (x^2 - h2 x + k2).
inline std::array<ComplexBall, 5> kron_quadratics(const ComplexQuadratic& f, const ComplexQuadratic& g)
{
    const mpfr_prec_t prec = std::max(f.h.precision(), g.h.precision());
    const ComplexBall hh = f.h * g.h, kk = f.k * g.k;
    return {kk * kk, -(hh * kk), g.k * f.h * f.h + f.k * g.h * g.h - ComplexBall(2L, prec) * kk, -hh,
            ComplexBall(1L, prec)};
}

struct FactorCheck {
    bool coefficients_match = false;
    bool sequence_match = false;
    /// Upper bound on max |reconstructed coefficient - exact coefficient|.
    Float max_coefficient_error;
    /// First index where the product sequence certifiably differs.
    std::optional<std::size_t> first_sequence_mismatch;

    bool ok() const { return coefficients_match && sequence_match; }
};

/// Checks a pair against sp two ways: the Kronecker reconstruction of the
/// quartic, and the product of the two order-2 sequences against the exact
/// standard LDS for n <= n_max.
inline FactorCheck check_factorization(const StandardParams& sp, const QuadraticFactorPair& pair, std::size_t n_max,
                                       mpfr_prec_t precision = kDefaultPrecision)
{
    const mpfr_prec_t prec = std::max(precision, pair.first.h.precision());
    FactorCheck out;
    const IntPoly target = standard_poly(sp);
    const auto rec = kron_quadratics(pair.first, pair.second);
    out.coefficients_match = true;
    for (std::size_t i = 0; i < 5; ++i) {
        const ComplexBall diff = rec[i] - ComplexBall(target.coeff(i), prec);
        const Float err = abs(diff).abs_upper();
        if (mpfr_cmp(err.get(), out.max_coefficient_error.get()) > 0) out.max_coefficient_error = err;
        if (!diff.contains_zero()) out.coefficients_match = false;
    }

    const auto u = lucas_ball_terms(pair.first, n_max, prec);
    const auto v = lucas_ball_terms(pair.second, n_max, prec);
    const SequenceWindow exact = standard_terms(sp, n_max + 1);
    out.sequence_match = true;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (!(u[n] * v[n] - ComplexBall(exact.terms[n], prec)).contains_zero()) {
            out.sequence_match = false;
            out.first_sequence_mismatch = n;
            break;
        }
    }
    return out;
}

inline bool verify_factorization(const StandardParams& sp, const QuadraticFactorPair& pair, std::size_t n_max,
                                 mpfr_prec_t precision = kDefaultPrecision)
{
    return check_factorization(sp, pair, n_max, precision).ok();
}

struct Equivalence {
    ComplexBall lambda;
    /// The factors of the first pair were matched in reverse order.
    bool swapped = false;
};

namespace detail {

inline std::optional<ComplexBall> match_scaling(const ComplexQuadratic& uf, const ComplexQuadratic& vf,
                                                const ComplexQuadratic& sf, const ComplexQuadratic& tf,
                                                std::size_t n_max, mpfr_prec_t prec)
{
    const auto u = lucas_ball_terms(uf, n_max, prec), v = lucas_ball_terms(vf, n_max, prec);
    const auto s = lucas_ball_terms(sf, n_max, prec), t = lucas_ball_terms(tf, n_max, prec);

    // u_n = lambda^(n-1) s_n: both vanish or neither does
    std::optional<std::size_t> m;
    for (std::size_t n = 2; n <= n_max; ++n) {
        const bool un = u[n].certainly_nonzero(), sn = s[n].certainly_nonzero();
        if (un != sn) return std::nullopt;
        if (un) {
            m = n;
            break;
        }
    }
    if (!m) throw PreconditionError("cannot estimate the scaling unit: no usable nonzero term");

    std::vector<ComplexBall> candidates;
    const ComplexBall ratio = u[*m] / s[*m];
    if (*m == 2) {
        candidates.push_back(ratio);
    } else if (*m == 3) {
        const ComplexBall root = sqrt(ratio);
        candidates.push_back(root);
        candidates.push_back(-root);
    } else {
        throw PreconditionError("cannot estimate the scaling unit: terms 2 and 3 vanish");
    }

    for (const ComplexBall& lambda : candidates) {
        if (!lambda.certainly_nonzero()) continue;
        const ComplexBall inv = ComplexBall(1L, prec) / lambda;
        ComplexBall up(1L, prec), down(1L, prec);  // lambda^(n-1), lambda^(1-n)
        bool ok = true;
        for (std::size_t n = 1; n <= n_max && ok; ++n) {
            if (n > 1) {
                up *= lambda;
                down *= inv;
            }
            ok = (u[n] - up * s[n]).contains_zero() && (v[n] - down * t[n]).contains_zero();
        }
        if (ok) return lambda;
    }
    return std::nullopt;
}

}  // namespace detail

/// The unit lambda with u_n = lambda^(n-1) s_n and v_n = lambda^(1-n) t_n for
/// n <= n_max, where (u, v) are the sequences of pair_a and (s, t) those of
/// pair_b. With allow_swap the factors of pair_a are also tried in reverse
/// order; note that this makes the two p != 0 branches equivalent
/// (lambda = sqrt r), so the default follows the ordered definition.
inline std::optional<Equivalence> equivalent_factorizations(const QuadraticFactorPair& pair_a,
                                                            const QuadraticFactorPair& pair_b, std::size_t n_max,
                                                            mpfr_prec_t precision = kDefaultPrecision,
                                                            bool allow_swap = false)
{
    if (n_max < 2) throw PreconditionError("equivalence check needs n_max >= 2");
    const mpfr_prec_t prec = std::max(precision, pair_a.first.h.precision());
    if (auto l = detail::match_scaling(pair_a.first, pair_a.second, pair_b.first, pair_b.second, n_max, prec))
        return Equivalence{*l, false};
    if (!allow_swap) return std::nullopt;
    if (auto l = detail::match_scaling(pair_a.second, pair_a.first, pair_b.first, pair_b.second, n_max, prec))
        return Equivalence{*l, true};
    return std::nullopt;
}

enum class RingClass { integers, gaussian_integers, other };

inline std::string_view to_string(RingClass c)
{
    switch (c) {
    case RingClass::integers: return "integers";
    case RingClass::gaussian_integers: return "gaussian_integers";
    case RingClass::other: return "other";
    }
    return "?";
}

namespace detail {

struct Gaussian {
    mpz_class re;
    mpz_class im;

    friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
    friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

inline std::optional<Gaussian> enclosed_gaussian(const ComplexBall& z)
{
    Gaussian g;
    mpfr_get_z(g.re.get_mpz_t(), z.re().mid().get(), MPFR_RNDN);
    mpfr_get_z(g.im.get_mpz_t(), z.im().mid().get(), MPFR_RNDN);
    if (!z.re().contains(g.re) || !z.im().contains(g.im)) return std::nullopt;
    return g;
}

}  // namespace detail

/// Whether the pair has coefficients in Z or Z[i]. Candidate Gaussian
/// integers are read off the balls, then accepted only if exact
/// back-substitution reproduces standard_poly(sp).
inline RingClass classify_ring(const StandardParams& sp, const QuadraticFactorPair& pair)
{
    using detail::Gaussian;
    const auto h1 = detail::enclosed_gaussian(pair.first.h), k1 = detail::enclosed_gaussian(pair.first.k);
    const auto h2 = detail::enclosed_gaussian(pair.second.h), k2 = detail::enclosed_gaussian(pair.second.k);
    if (!h1 || !k1 || !h2 || !k2) return RingClass::other;

    const Gaussian hh = *h1 * *h2, kk = *k1 * *k2;
    const Gaussian two{2, 0};
    const std::array<Gaussian, 5> rec{kk * kk, Gaussian{0, 0} - hh * kk, *k2 * *h1 * *h1 + *k1 * *h2 * *h2 - two * kk,
                                      Gaussian{0, 0} - hh, Gaussian{1, 0}};
    const IntPoly target = standard_poly(sp);
    for (std::size_t i = 0; i < 5; ++i)
        if (!(rec[i] == Gaussian{target.coeff(i), 0})) return RingClass::other;

    const bool real = h1->im == 0 && k1->im == 0 && h2->im == 0 && k2->im == 0;
    return real ? RingClass::integers : RingClass::gaussian_integers;
}

}  // namespace lds4

#endif  // LDS4_FACTOR_HPP
