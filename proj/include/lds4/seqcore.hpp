#ifndef LDS4_SEQCORE_HPP
#define LDS4_SEQCORE_HPP

// Exact linear recurrences, Lucas sequences and the divisibility-sequence
// check. Everything here is integer arithmetic; this is the ground truth the
// numeric modules are compared against.

#include <cstddef>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lds4/error.hpp"

namespace lds4 {

/// Consecutive sequence terms a_s, a_{s+1}, ... starting at start_index.
struct SequenceWindow {
    std::size_t start_index = 0;
    std::vector<mpz_class> terms;

    std::size_t size() const noexcept { return terms.size(); }
    const mpz_class& at_index(std::size_t n) const { return terms.at(n - start_index); }
    friend bool operator==(const SequenceWindow&, const SequenceWindow&) = default;
};

/// Order-2 Lucas parameters: x^2 - h x + k with U_0 = 0, U_1 = 1.
struct LucasParams {
    mpz_class h;
    mpz_class k;

    void validate() const
    {
        if (k == 0) throw PreconditionError("Lucas parameter k must be nonzero");
    }
};

/// a_n = c_1 a_{n-1} + ... + c_d a_{n-d}.
///
/// The coefficients are stored in recurrence form. The matching monic
/// characteristic polynomial is x^d - c_1 x^{d-1} - ... - c_d, i.e. the
/// polynomial coefficient of x^{d-i} is -c_i.
class LinearRecurrence {
public:
    LinearRecurrence(std::vector<mpz_class> coefficients, std::vector<mpz_class> initial_terms)
        : coefficients_(std::move(coefficients)), initial_terms_(std::move(initial_terms))
    {
        if (coefficients_.empty()) throw PreconditionError("recurrence order must be at least 1");
        if (coefficients_.size() != initial_terms_.size())
            throw PreconditionError("recurrence needs exactly one initial term per coefficient");
        if (coefficients_.back() == 0) throw PreconditionError("last recurrence coefficient must be nonzero");
    }

    /// From a monic characteristic polynomial given constant term first.
    static LinearRecurrence from_characteristic(const std::vector<mpz_class>& monic_low_first,
                                                std::vector<mpz_class> initial_terms)
    {
        if (monic_low_first.size() < 2 || monic_low_first.back() != 1)
            throw PreconditionError("characteristic polynomial must be monic of degree >= 1");
        const std::size_t d = monic_low_first.size() - 1;
        std::vector<mpz_class> c(d);
        for (std::size_t i = 1; i <= d; ++i) c[i - 1] = -monic_low_first[d - i];
        return {std::move(c), std::move(initial_terms)};
    }

    std::size_t order() const noexcept { return coefficients_.size(); }
    const std::vector<mpz_class>& coefficients() const noexcept { return coefficients_; }
    const std::vector<mpz_class>& initial_terms() const noexcept { return initial_terms_; }

    /// Characteristic polynomial, constant term first.
    std::vector<mpz_class> characteristic() const
    {
        const std::size_t d = order();
        std::vector<mpz_class> f(d + 1);
        f[d] = 1;
        for (std::size_t i = 1; i <= d; ++i) f[d - i] = -coefficients_[i - 1];
        return f;
    }

private:
    std::vector<mpz_class> coefficients_;
    std::vector<mpz_class> initial_terms_;
};

/// a_0 .. a_{count-1}.
inline SequenceWindow recurrence_terms(const LinearRecurrence& rec, std::size_t count)
{
    if (count == 0) throw PreconditionError("count must be positive");
    const std::size_t d = rec.order();
    SequenceWindow w;
    w.terms.reserve(count);
    for (std::size_t n = 0; n < count && n < d; ++n) w.terms.push_back(rec.initial_terms()[n]);
    const auto& c = rec.coefficients();
    mpz_class acc;
    for (std::size_t n = d; n < count; ++n) {
        acc = 0;
        for (std::size_t i = 1; i <= d; ++i) acc += c[i - 1] * w.terms[n - i];
        w.terms.push_back(acc);
    }
    return w;
}

/// U_n for x^2 - h x + k.
inline mpz_class lucas_u(const LucasParams& params, std::size_t n)
{
    params.validate();
    mpz_class prev = 0, cur = 1;
    if (n == 0) return prev;
    for (std::size_t i = 1; i < n; ++i) {
        mpz_class next = params.h * cur - params.k * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

inline LinearRecurrence lucas_recurrence(const LucasParams& params)
{
    params.validate();
    return {{params.h, -params.k}, {0, 1}};
}

/// U_0 .. U_{count-1}.
inline SequenceWindow lucas_terms(const LucasParams& params, std::size_t count)
{
    return recurrence_terms(lucas_recurrence(params), count);
}

struct IndexPair {
    std::size_t m;
    std::size_t n;
    friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Every (m, n) with 1 <= m < n, m | n and a_m not dividing a_n. The window
/// must start at index 0; a_0 never participates. Zero divides only zero.
inline std::vector<IndexPair> divisibility_check(const SequenceWindow& window)
{
    if (window.start_index != 0) throw PreconditionError("divisibility check needs a window starting at index 0");
    std::vector<IndexPair> violations;
    const std::size_t count = window.size();
    for (std::size_t m = 1; m < count; ++m) {
        const mpz_class& am = window.terms[m];
        for (std::size_t n = 2 * m; n < count; n += m) {
            const mpz_class& an = window.terms[n];
            bool ok = am == 0 ? an == 0 : mpz_divisible_p(an.get_mpz_t(), am.get_mpz_t()) != 0;
            if (!ok) violations.push_back({m, n});
        }
    }
    return violations;
}

/// Elementwise product (a_n b_n).
inline SequenceWindow product_sequence(const SequenceWindow& a, const SequenceWindow& b)
{
    if (a.start_index != b.start_index || a.size() != b.size())
        throw PreconditionError("product_sequence needs windows with equal start and length");
    SequenceWindow out;
    out.start_index = a.start_index;
    out.terms.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.terms.push_back(a.terms[i] * b.terms[i]);
    return out;
}

}  // namespace lds4

#endif  // LDS4_SEQCORE_HPP
