#ifndef LDS4_POLYALG_HPP
#define LDS4_POLYALG_HPP

// Exact integer polynomials and matrices: companion matrices, characteristic
// polynomials, Kronecker composition of recurrences, and the standard quartic
// x^4 - p x^3 + (q + 2r) x^2 - p r x + r^2 with its initial conditions.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lds4/ball.hpp"
#include "lds4/error.hpp"
#include "lds4/seqcore.hpp"

namespace lds4 {

inline constexpr std::size_t kMaxPolyDegree = 64;

/// Integer polynomial, constant term first. Trailing zero coefficients are
/// stripped, so degree() is exact.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<mpz_class> low_first) : c_(std::move(low_first)) { trim(); }
    IntPoly(std::initializer_list<long> low_first)
    {
        for (long v : low_first) c_.emplace_back(v);
        trim();
    }

    /// x - root
    static IntPoly linear(const mpz_class& root) { return IntPoly({-root, mpz_class(1)}); }

    bool is_zero() const noexcept { return c_.empty(); }
    std::size_t degree() const
    {
        if (c_.empty()) throw PreconditionError("degree of the zero polynomial");
        return c_.size() - 1;
    }
    const mpz_class& operator[](std::size_t i) const { return c_.at(i); }
    mpz_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }
    const std::vector<mpz_class>& coefficients() const noexcept { return c_; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    friend bool operator==(const IntPoly&, const IntPoly&) = default;

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(r));
    }

    /// Human form, highest degree first: "x^4 - 6x^3 + 6x^2 - 6x + 1".
    std::string to_string() const
    {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const mpz_class& v = c_[i];
            if (v == 0) continue;
            mpz_class mag = abs(v);
            if (s.empty())
                s += v < 0 ? "-" : "";
            else
                s += v < 0 ? " - " : " + ";
            if (mag != 1 || i == 0) s += mag.get_str();
            if (i >= 1) s += "x";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<mpz_class> c_;
};

class IntMatrix {
public:
    explicit IntMatrix(std::size_t dim) : dim_(dim), a_(dim * dim)
    {
        if (dim == 0) throw PreconditionError("matrix dimension must be at least 1");
    }
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows) : IntMatrix(rows.size())
    {
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != dim_) throw PreconditionError("matrix must be square");
            std::size_t j = 0;
            for (long v : row) (*this)(i, j++) = v;
            ++i;
        }
    }

    static IntMatrix identity(std::size_t dim)
    {
        IntMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }
    mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
    {
        if (a.dim_ != b.dim_) throw PreconditionError("matrix dimension mismatch");
        IntMatrix r(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i)
            for (std::size_t k = 0; k < a.dim_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < a.dim_; ++j) r(i, j) += a(i, k) * b(k, j);
            }
        return r;
    }

private:
    std::size_t dim_;
    std::vector<mpz_class> a_;
};

/// Companion matrix of a monic f: ones on the superdiagonal, last row holds
/// -f_0, -f_1, ..., -f_{d-1}.
inline IntMatrix companion(const IntPoly& f)
{
    if (f.is_zero() || f.degree() < 1) throw PreconditionError("companion matrix needs degree >= 1");
    if (!f.is_monic()) throw PreconditionError("companion matrix needs a monic polynomial");
    const std::size_t d = f.degree();
    IntMatrix m(d);
    for (std::size_t i = 0; i + 1 < d; ++i) m(i, i + 1) = 1;
    for (std::size_t j = 0; j < d; ++j) m(d - 1, j) = -f[j];
    return m;
}

/// det(xI - M) by Faddeev-LeVerrier. For an integer matrix every
/// intermediate adjugate term is integral and each trace division is exact,
/// which is asserted.
inline IntPoly char_poly_exact(const IntMatrix& m)
{
    const std::size_t n = m.dim();
    std::vector<mpz_class> c(n + 1);
    c[n] = 1;
    IntMatrix mk(n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        IntMatrix next = m * mk;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        mk = std::move(next);
        IntMatrix am = m * mk;
        mpz_class tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        mpz_class kk(static_cast<unsigned long>(k));
        if (!mpz_divisible_p(tr.get_mpz_t(), kk.get_mpz_t()))
            throw std::logic_error("Faddeev-LeVerrier trace not divisible by k");
        mpz_divexact(c[n - k].get_mpz_t(), tr.get_mpz_t(), kk.get_mpz_t());
        c[n - k] = -c[n - k];
    }
    return IntPoly(std::move(c));
}

inline IntMatrix kron_matrix(const IntMatrix& a, const IntMatrix& b)
{
    const std::size_t s = a.dim(), t = b.dim();
    IntMatrix r(s * t);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t k = 0; k < t; ++k)
                for (std::size_t l = 0; l < t; ++l) r(i * t + k, j * t + l) = a(i, j) * b(k, l);
    return r;
}

/// f (x) g: the characteristic polynomial of companion(f) (x) companion(g),
/// whose roots are all products of a root of f with a root of g.
inline IntPoly kron_poly(const IntPoly& f, const IntPoly& g)
{
    if (!f.is_monic() || !g.is_monic()) throw PreconditionError("kron_poly needs monic polynomials");
    if (f.degree() * g.degree() > kMaxPolyDegree)
        throw PreconditionError("Kronecker product degree exceeds " + std::to_string(kMaxPolyDegree));
    return char_poly_exact(kron_matrix(companion(f), companion(g)));
}

/// Parameters (p, q, r) of the standard quartic.
struct StandardParams {
    mpz_class p;
    mpz_class q;
    mpz_class r;

    void validate() const
    {
        if (r == 0) throw PreconditionError("standard parameter r must be nonzero");
    }
    friend bool operator==(const StandardParams&, const StandardParams&) = default;
};

/// x^4 - p x^3 + (q + 2r) x^2 - p r x + r^2
inline IntPoly standard_poly(const StandardParams& sp)
{
    sp.validate();
    return IntPoly({sp.r * sp.r, -sp.p * sp.r, sp.q + 2 * sp.r, -sp.p, mpz_class(1)});
}

/// 0, 1, p, p^2 - q - 3r
inline SequenceWindow standard_initial_conditions(const StandardParams& sp)
{
    return {0, {0, 1, sp.p, sp.p * sp.p - sp.q - 3 * sp.r}};
}

inline LinearRecurrence standard_recurrence(const StandardParams& sp)
{
    return LinearRecurrence::from_characteristic(standard_poly(sp).coefficients(),
                                                 standard_initial_conditions(sp).terms);
}

/// a_0 .. a_{count-1} of the standard LDS.
inline SequenceWindow standard_terms(const StandardParams& sp, std::size_t count)
{
    return recurrence_terms(standard_recurrence(sp), count);
}

struct StandardRecognition {
    StandardParams params;                  // r > 0 when both signs fit
    std::optional<StandardParams> alternate;  // the r < 0 triple, when it also fits
};

/// Recovers (p, q, r) from a monic quartic, if it has the standard shape.
/// Both signs of r are tried; when p = 0 both fit and the second is reported
/// as the alternate.
inline std::optional<StandardRecognition> recognize_standard(const IntPoly& f)
{
    if (f.is_zero() || f.degree() != 4) throw PreconditionError("recognize_standard needs a quartic");
    if (!f.is_monic()) throw PreconditionError("recognize_standard needs a monic quartic");
    const mpz_class& c0 = f[0];
    if (c0 <= 0 || !mpz_perfect_square_p(c0.get_mpz_t())) return std::nullopt;
    const mpz_class root = sqrt(c0);
    const mpz_class p = -f[3];

    std::vector<StandardParams> hits;
    for (const mpz_class& r : {root, mpz_class(-root)}) {
        if (f[1] == -p * r) hits.push_back({p, f[2] - 2 * r, r});
    }
    if (hits.empty()) return std::nullopt;
    StandardRecognition out{hits.front(), std::nullopt};
    if (hits.size() > 1) out.alternate = hits[1];
    return out;
}

/// The quartic is the square of a quadratic: p^2 - 4q = 0.
inline bool is_square_of_quadratic(const StandardParams& sp) { return sp.p * sp.p - 4 * sp.q == 0; }

/// Exact repeated-root test. Substituting y = x + r/x turns the quartic into
/// y^2 - p y + q, so roots repeat iff that quadratic has a double root or one
/// of x^2 - y x + r does: (p^2 - 4q) ((q + 4r)^2 - 4 p^2 r) = 0.
inline bool has_repeated_roots(const StandardParams& sp)
{
    mpz_class s = sp.q + 4 * sp.r;
    return (sp.p * sp.p - 4 * sp.q) * (s * s - 4 * sp.p * sp.p * sp.r) == 0;
}

/// Certified enclosures of the four roots, from the reciprocal substitution
/// y^2 - p y + q = 0 and x^2 - y x + r = 0. Order: (y+, +), (y+, -),
/// (y-, +), (y-, -).
inline std::array<ComplexBall, 4> standard_roots(const StandardParams& sp, mpfr_prec_t prec)
{
    sp.validate();
    const ComplexBall p(sp.p, prec), q(sp.q, prec), r(sp.r, prec);
    const ComplexBall two(2L, prec), four(4L, prec);
    const ComplexBall disc = sqrt(p * p - four * q);
    std::array<ComplexBall, 2> ys{(p + disc) / two, (p - disc) / two};
    std::array<ComplexBall, 4> roots{ComplexBall(prec), ComplexBall(prec), ComplexBall(prec), ComplexBall(prec)};
    for (std::size_t i = 0; i < 2; ++i) {
        const ComplexBall d = sqrt(ys[i] * ys[i] - four * r);
        roots[2 * i] = (ys[i] + d) / two;
        roots[2 * i + 1] = (ys[i] - d) / two;
    }
    return roots;
}

namespace detail {

// (x^n - y^n) / (x - y) written as sum x^k y^(n-1-k): continuous at x = y.
inline ComplexBall lucas_quotient(const ComplexBall& x, const ComplexBall& y, std::size_t n)
{
    const mpfr_prec_t prec = x.precision();
    std::vector<ComplexBall> xp{ComplexBall(1L, prec)}, yp{ComplexBall(1L, prec)};
    for (std::size_t k = 1; k < n; ++k) {
        xp.push_back(xp.back() * x);
        yp.push_back(yp.back() * y);
    }
    ComplexBall sum(prec);
    for (std::size_t k = 0; k < n; ++k) sum += xp[k] * yp[n - 1 - k];
    return sum;
}

}  // namespace detail

/// b_n = prod over the six root pairs {x, y} of (x^n - y^n)/(x - y), an
/// integer multiple of the standard LDS term a_n. Evaluated in ball
/// arithmetic and rounded to the unique enclosed integer, doubling the
/// precision until that integer is isolated.
inline mpz_class pair_product_bound(const StandardParams& sp, std::size_t n, mpfr_prec_t precision = kDefaultPrecision,
                                    mpfr_prec_t cap = kPrecisionCap)
{
    sp.validate();
    if (n == 0) throw PreconditionError("pair_product_bound needs n >= 1");
    return with_adaptive_precision(
        precision,
        [&](mpfr_prec_t prec) {
            const auto roots = standard_roots(sp, prec);
            ComplexBall prod(1L, prec);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = i + 1; j < 4; ++j) prod *= detail::lucas_quotient(roots[i], roots[j], n);
            if (!prod.im().contains_zero()) throw std::logic_error("pair product has a nonzero imaginary part");
            return unique_integer(prod.re());
        },
        cap);
}

}  // namespace lds4

#endif  // LDS4_POLYALG_HPP
