#ifndef LDS4_ERRATA_HPP
#define LDS4_ERRATA_HPP

// Discrepancies between the published formulas and what this library
// implements. Each entry records the printed form, the implemented form and
// how the implementation was checked.

#include <string_view>
#include <vector>

namespace lds4 {

struct Erratum {
    std::string_view id;
    std::string_view location;
    std::string_view printed;
    std::string_view implemented;
    std::string_view evidence;
};

inline const std::vector<Erratum>& errata_ledger()
{
    static const std::vector<Erratum> ledger{
        {"product_quartic_coefficients", "product of two Lucas LDSs, displayed characteristic polynomial",
         "x^4 - h1h2 x^3 + (k1h1^2 - k2h1^2 + 2k1k2) x^2 + h1k1h2k2 x + k1^2k2^2",
         "x^4 - h1h2 x^3 + (k2h1^2 + k1h2^2 - 2k1k2) x^2 - h1h2k1k2 x + k1^2k2^2",
         "exact Kronecker characteristic polynomial; matches the stated p = h1h2, q = h1^2k2 + k1(h2^2 - 4k2), r = k1k2"},
        {"factorization_target_linear_coefficient", "factorization over C, target polynomial in the proof",
         "x^4 - p x^3 + (q + 2r) x^2 - p x + r^2", "x^4 - p x^3 + (q + 2r) x^2 - p r x + r^2",
         "the standard polynomial definition"},
        {"factorization_p0_systems", "factorization over C, p = 0 systems",
         "h2^2 k1 = p + 4r ; h2^2 k1 = p", "h2^2 k1 = q + 4r ; h2^2 k1 = q",
         "with p = 0 the printed right-hand sides contradict the stated families; Kronecker reconstruction"},
        {"factorization_p0_second_family_sequence", "factorization over C, second p = 0 family",
         "{x^2 + 1, x^2 - sqrt(q) x - r} factors the standard LDS",
         "the family reproduces the standard polynomial but its product sequence has a_3 = -(q + r), not -(q + 3r); "
         "verify_factorization reports the sequence mismatch",
         "exact: U_3(0, 1) U_3(sqrt(q), -r) = -(q + r); e.g. (p, q, r) = (0, 1, 1) gives 0, 1, 0, -2 vs 0, 1, 0, -4"},
        {"binet_inequality_direction", "Binet tail estimate",
         "|u_n - lambda alpha^n| >= |lambda1 alpha^-n| + |lambda2| + |lambda3|",
         "|u_n - lambda alpha^n| <= |lambda1 alpha^-n| + |lambda2| + |lambda3|", "triangle inequality"},
        {"t7_missing_term", "nearest-integer sequence for t = 7", "1, 7, 41, 245, 8897, 53621",
         "1, 7, 41, 245, 1476, 8897, 53621", "exact recurrence and certified E(lambda alpha^n): term n = 5 is 1476"},
        {"binet_closed_forms", "Binet coefficients in the region proof",
         "lambda = lambda1 = alpha gamma / ((alpha - gamma)(alpha gamma - 1)), lambda2 = lambda3 = -lambda",
         "solve the 4x4 Vandermonde system against 0, 1, p, p^2 - q - 3",
         "the printed forms give u_0 = 0 but not u_1 = 1 in general; t-family lambda = 1/sqrt((t-4)t + 8) is confirmed"},
        {"region_alpha_reciprocal", "closed form of alpha in the region proof",
         "alpha = 1 / (4 (p + sqrt(p^2 - 4q) + sqrt((p + sqrt(p^2 - 4q))^2 - 16)))",
         "alpha = (p + sqrt(p^2 - 4q) + sqrt((p + sqrt(p^2 - 4q))^2 - 16)) / 4",
         "the printed value is below 1; the corrected form agrees with the t-family closed form"},
        {"divisor_sequence_symbol", "divisor sequence b_n in the characterization proof",
         "the sequence p can be written as the product of six Lucas sequences",
         "the sequence b is the product of six Lucas sequences", "p already names a polynomial coefficient"},
    };
    return ledger;
}

inline const Erratum* find_erratum(std::string_view id)
{
    for (const auto& e : errata_ledger())
        if (e.id == id) return &e;
    return nullptr;
}

}  // namespace lds4

#endif  // LDS4_ERRATA_HPP
