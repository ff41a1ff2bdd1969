#ifndef LDS4_CLI_HPP
#define LDS4_CLI_HPP

// The lds4 command line: every library operation with json, csv or plain
// output. run() is the whole program; tools/lds4.cpp only forwards argv.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lds4/ball.hpp"
#include "lds4/errata.hpp"
#include "lds4/error.hpp"
#include "lds4/factor.hpp"
#include "lds4/oeis.hpp"
#include "lds4/polyalg.hpp"
#include "lds4/salem.hpp"
#include "lds4/seqcore.hpp"

namespace lds4::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, failure = 1, precondition = 2, precision_exhausted = 3, service_unavailable = 4 };

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// One result of one command.
struct OutputRecord {
    std::string command;
    Json parameters = Json::object();
    Json result = Json::object();
    std::optional<mpfr_prec_t> precision;
    std::string certification = "exact";
    std::vector<std::string> errata;
    Table table;
    std::vector<std::string> plain;
    int exit_code = ExitCode::ok;
};

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& row)
{
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\r\n";
}

inline Json to_json(const OutputRecord& rec)
{
    Json j;
    j["command"] = rec.command;
    j["parameters"] = rec.parameters;
    j["result"] = rec.result;
    j["precision"] = rec.precision ? Json(*rec.precision) : Json(nullptr);
    j["certification"] = rec.certification;
    j["errata"] = rec.errata;
    return j;
}

inline void emit(const OutputRecord& rec, const std::string& format, std::ostream& out)
{
    if (format == "json") {
        out << to_json(rec).dump() << '\n';
    } else if (format == "csv") {
        write_csv_row(out, rec.table.header);
        for (const auto& row : rec.table.rows) write_csv_row(out, row);
    } else {
        for (const auto& line : rec.plain) out << line << '\n';
    }
}

// ---- value formatting ----------------------------------------------------

inline Json big(const mpz_class& v) { return v.get_str(); }

inline Json big_list(const std::vector<mpz_class>& v)
{
    Json a = Json::array();
    for (const auto& x : v) a.push_back(x.get_str());
    return a;
}

inline std::string join(const std::vector<mpz_class>& v, const char* sep = ",")
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i].get_str();
    return s;
}

/// Midpoint as a decimal string; rad_exp e means radius < 2^e (null: exact).
inline Json ball_json(const RealBall& b)
{
    return Json{{"mid", to_decimal(b.mid(), 30)},
                {"rad_exp", b.is_exact() ? Json(nullptr) : Json(radius_exponent(b.rad()))}};
}

inline Json ball_json(const ComplexBall& z) { return Json{{"re", ball_json(z.re())}, {"im", ball_json(z.im())}}; }

inline Json error_exp(const Float& bound) { return bound.is_zero() ? Json(nullptr) : Json(radius_exponent(bound)); }

inline std::string short_ball(const RealBall& b) { return to_decimal(b.mid(), 15); }

inline std::string short_ball(const ComplexBall& z)
{
    if (z.im().is_exact() && z.im().mid().is_zero()) return short_ball(z.re());
    std::string im = to_decimal(z.im().mid(), 15);
    if (im.front() != '-') im = "+" + im;
    return short_ball(z.re()) + im + "i";
}

// ---- parsing -------------------------------------------------------------

inline mpz_class parse_integer(const std::string& s, const std::string& what)
{
    mpz_class v;
    std::string t = s;
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    if (t.empty() || v.set_str(t, 10) != 0) throw PreconditionError(what + ": not an integer: '" + s + "'");
    return v;
}

inline std::vector<mpz_class> parse_integer_list(const std::string& s, const std::string& what)
{
    std::vector<mpz_class> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        cur.erase(0, cur.find_first_not_of(' '));
        cur.erase(cur.find_last_not_of(' ') + 1);
        out.push_back(parse_integer(cur, what));
    }
    if (out.empty()) throw PreconditionError(what + ": empty list");
    return out;
}

inline long to_small(const mpz_class& v, const std::string& what)
{
    if (!v.fits_slong_p() || abs(v) > 1000000000L) throw PreconditionError(what + " is out of range");
    return v.get_si();
}

inline mpfr_prec_t default_precision()
{
    if (const char* env = std::getenv("LDS4_PRECISION"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 16) return v;
    }
    return kDefaultPrecision;
}

// ---- commands ------------------------------------------------------------

inline OutputRecord sequence_record(std::string command, Json params, const SequenceWindow& w)
{
    OutputRecord rec;
    rec.command = std::move(command);
    rec.parameters = std::move(params);
    rec.result["start_index"] = w.start_index;
    rec.result["terms"] = big_list(w.terms);
    rec.table.header = {"n", "term"};
    for (std::size_t i = 0; i < w.size(); ++i) rec.table.rows.push_back({std::to_string(w.start_index + i), w.terms[i].get_str()});
    rec.plain.push_back(join(w.terms));
    return rec;
}

inline OutputRecord cmd_lucas(const std::string& h, const std::string& k, std::size_t count)
{
    const LucasParams lp{parse_integer(h, "h"), parse_integer(k, "k")};
    if (count == 0) throw PreconditionError("count must be positive");
    return sequence_record("lucas", Json{{"h", big(lp.h)}, {"k", big(lp.k)}, {"count", count}}, lucas_terms(lp, count));
}

inline OutputRecord cmd_compose(const std::string& h1, const std::string& k1, const std::string& h2,
                                const std::string& k2, std::size_t count)
{
    const LucasParams a{parse_integer(h1, "h1"), parse_integer(k1, "k1")};
    const LucasParams b{parse_integer(h2, "h2"), parse_integer(k2, "k2")};
    if (count == 0) throw PreconditionError("count must be positive");
    const Composition c = compose_lucas(a, b);
    const SequenceWindow terms = product_sequence(lucas_terms(a, count), lucas_terms(b, count));
    const IntPoly quartic = standard_poly(c.params);
    const bool consistent = kron_poly(IntPoly({a.k, -a.h, mpz_class(1)}), IntPoly({b.k, -b.h, mpz_class(1)})) == quartic &&
                            standard_terms(c.params, count) == terms;

    OutputRecord rec = sequence_record(
        "compose", Json{{"h1", big(a.h)}, {"k1", big(a.k)}, {"h2", big(b.h)}, {"k2", big(b.k)}, {"count", count}}, terms);
    Json r;
    r["p"] = big(c.params.p);
    r["q"] = big(c.params.q);
    r["r"] = big(c.params.r);
    r["quartic"] = quartic.to_string();
    r["initial_conditions"] = big_list(c.initial_conditions.terms);
    r["terms"] = rec.result["terms"];
    r["kron_consistent"] = consistent;
    rec.result = r;
    rec.errata.emplace_back("product_quartic_coefficients");
    rec.plain.insert(rec.plain.begin(), "p=" + c.params.p.get_str() + " q=" + c.params.q.get_str() +
                                            " r=" + c.params.r.get_str() + "  " + quartic.to_string());
    return rec;
}

inline StandardParams parse_standard(const std::string& p, const std::string& q, const std::string& r)
{
    StandardParams sp{parse_integer(p, "p"), parse_integer(q, "q"), parse_integer(r, "r")};
    sp.validate();
    return sp;
}

inline Json standard_json(const StandardParams& sp)
{
    return Json{{"p", big(sp.p)}, {"q", big(sp.q)}, {"r", big(sp.r)}};
}

inline OutputRecord cmd_factor(const StandardParams& sp, std::size_t n_max, mpfr_prec_t prec)
{
    OutputRecord rec;
    rec.command = "factor";
    rec.parameters = standard_json(sp);
    rec.parameters["n_max"] = n_max;
    rec.precision = prec;
    rec.certification = "certified";
    const Factorization f = factor_standard(sp, prec);
    rec.result["quartic"] = standard_poly(sp).to_string();
    rec.result["pairs"] = Json::array();
    rec.table.header = {"family", "h1", "k1", "h2", "k2", "verified", "ring"};
    rec.plain.push_back(standard_poly(sp).to_string());
    bool sequence_failure = false;
    for (const auto& pair : f.pairs) {
        const FactorCheck chk = check_factorization(sp, pair, n_max, prec);
        const RingClass ring = classify_ring(sp, pair);
        sequence_failure = sequence_failure || !chk.sequence_match;
        Json pj;
        pj["family"] = std::string(to_string(pair.family));
        pj["first"] = Json{{"h", ball_json(pair.first.h)}, {"k", ball_json(pair.first.k)}};
        pj["second"] = Json{{"h", ball_json(pair.second.h)}, {"k", ball_json(pair.second.k)}};
        pj["coefficients_match"] = chk.coefficients_match;
        pj["coefficient_error_exp"] = error_exp(chk.max_coefficient_error);
        pj["sequence_match"] = chk.sequence_match;
        pj["first_sequence_mismatch"] =
            chk.first_sequence_mismatch ? Json(*chk.first_sequence_mismatch) : Json(nullptr);
        pj["verified"] = chk.ok();
        pj["ring"] = std::string(to_string(ring));
        rec.result["pairs"].push_back(pj);
        rec.table.rows.push_back({std::string(to_string(pair.family)), short_ball(pair.first.h), short_ball(pair.first.k),
                                  short_ball(pair.second.h), short_ball(pair.second.k), chk.ok() ? "true" : "false",
                                  std::string(to_string(ring))});
        rec.plain.push_back(std::string(to_string(pair.family)) + ": {x^2 - (" + short_ball(pair.first.h) + ")x + (" +
                            short_ball(pair.first.k) + "), x^2 - (" + short_ball(pair.second.h) + ")x + (" +
                            short_ball(pair.second.k) + ")}  verified=" + (chk.ok() ? "true" : "false") +
                            " ring=" + std::string(to_string(ring)));
    }
    rec.result["diagnostics"] = f.diagnostics;
    rec.errata.emplace_back("factorization_target_linear_coefficient");
    if (sp.p == 0) rec.errata.emplace_back("factorization_p0_systems");
    if (sequence_failure && sp.p == 0) rec.errata.emplace_back("factorization_p0_second_family_sequence");
    return rec;
}

inline OutputRecord cmd_recognize(const std::string& coeffs)
{
    const IntPoly f(parse_integer_list(coeffs, "coeffs"));
    OutputRecord rec;
    rec.command = "recognize";
    rec.parameters["coeffs"] = big_list(f.coefficients());
    const auto found = recognize_standard(f);
    rec.result["polynomial"] = f.to_string();
    rec.result["standard"] = found.has_value();
    rec.table.header = {"standard", "p", "q", "r", "alternate_p", "alternate_q", "alternate_r"};
    if (!found) {
        rec.result["params"] = nullptr;
        rec.result["alternate"] = nullptr;
        rec.table.rows.push_back({"false", "", "", "", "", "", ""});
        rec.plain.push_back("not standard");
        return rec;
    }
    rec.result["params"] = standard_json(found->params);
    rec.result["alternate"] = found->alternate ? standard_json(*found->alternate) : Json(nullptr);
    std::vector<std::string> row{"true", found->params.p.get_str(), found->params.q.get_str(), found->params.r.get_str()};
    std::string line = "p=" + row[1] + " q=" + row[2] + " r=" + row[3];
    if (found->alternate) {
        row.insert(row.end(), {found->alternate->p.get_str(), found->alternate->q.get_str(), found->alternate->r.get_str()});
        line += "  (also p=" + row[4] + " q=" + row[5] + " r=" + row[6] + ")";
    } else {
        row.insert(row.end(), {"", "", ""});
    }
    rec.table.rows.push_back(row);
    rec.plain.push_back(line);
    return rec;
}

inline OutputRecord cmd_kron(const std::string& f_text, const std::string& g_text)
{
    const IntPoly f(parse_integer_list(f_text, "f")), g(parse_integer_list(g_text, "g"));
    const IntPoly h = kron_poly(f, g);
    OutputRecord rec;
    rec.command = "kron";
    rec.parameters = Json{{"f", big_list(f.coefficients())}, {"g", big_list(g.coefficients())}};
    rec.result["coefficients"] = big_list(h.coefficients());
    rec.result["polynomial"] = h.to_string();
    rec.table.header = {"degree", "coefficient"};
    for (std::size_t i = 0; i < h.coefficients().size(); ++i) rec.table.rows.push_back({std::to_string(i), h[i].get_str()});
    rec.plain.push_back(h.to_string());
    return rec;
}

inline OutputRecord cmd_terms(const StandardParams& sp, std::size_t count)
{
    if (count == 0) throw PreconditionError("count must be positive");
    Json params = standard_json(sp);
    params["count"] = count;
    OutputRecord rec = sequence_record("terms", params, standard_terms(sp, count));
    rec.result["quartic"] = standard_poly(sp).to_string();
    return rec;
}

inline OutputRecord cmd_bound(const StandardParams& sp, std::size_t n, mpfr_prec_t prec)
{
    OutputRecord rec;
    rec.command = "bound";
    rec.parameters = standard_json(sp);
    rec.parameters["n"] = n;
    rec.precision = prec;
    rec.certification = "certified";
    const mpz_class b = pair_product_bound(sp, n, prec);
    const mpz_class a = standard_terms(sp, n + 1).terms[n];
    const bool divides = a == 0 ? b == 0 : mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()) != 0;
    rec.result = Json{{"n", n}, {"a_n", big(a)}, {"b_n", big(b)}, {"divides", divides}};
    rec.table.header = {"n", "a_n", "b_n", "divides"};
    rec.table.rows.push_back({std::to_string(n), a.get_str(), b.get_str(), divides ? "true" : "false"});
    rec.plain.push_back("a_" + std::to_string(n) + " = " + a.get_str() + ", b_" + std::to_string(n) + " = " +
                        b.get_str() + (divides ? "  (a_n | b_n)" : "  (a_n does not divide b_n)"));
    return rec;
}

struct SalemArgs {
    std::optional<std::string> p, q;
    std::optional<long> t;

    std::pair<long, long> resolve() const
    {
        if (t) {
            const TFamily tf = t_family_params(*t);
            return {tf.p, tf.q};
        }
        if (!p || !q) throw PreconditionError("give either --t or both --p and --q");
        return {to_small(parse_integer(*p, "p"), "p"), to_small(parse_integer(*q, "q"), "q")};
    }

    Json json(long pv, long qv) const
    {
        Json j{{"p", pv}, {"q", qv}};
        if (t) j["t"] = *t;
        return j;
    }
};

inline Json verdict_json(const SmallnessVerdict& v)
{
    return Json{{"holds_for_all_n_ge_1", std::string(to_string(v.holds_for_all_n_ge_1))},
                {"holds_eventually", std::string(to_string(v.holds_eventually))},
                {"margin", ball_json(v.margin)},
                {"eventual_margin", ball_json(v.eventual_margin)},
                {"precision", v.precision}};
}

inline OutputRecord cmd_salem_check(const SalemArgs& args)
{
    const auto [p, q] = args.resolve();
    OutputRecord rec;
    rec.command = "salem check";
    rec.parameters = args.json(p, q);
    rec.certification = "certified";
    const bool strip = in_salem_strip(p, q);
    const bool salem = is_salem_standard(p, q);
    rec.result = Json{{"in_strip", strip}, {"salem_standard", salem}};
    rec.table.header = {"p", "q", "in_strip", "salem_standard"};
    rec.table.rows.push_back({std::to_string(p), std::to_string(q), strip ? "true" : "false", salem ? "true" : "false"});
    rec.plain.push_back(salem ? "true" : "false");
    return rec;
}

inline OutputRecord cmd_salem_roots(const SalemArgs& args, mpfr_prec_t prec)
{
    const auto [p, q] = args.resolve();
    OutputRecord rec;
    rec.command = "salem roots";
    rec.parameters = args.json(p, q);
    rec.precision = prec;
    rec.certification = "certified";
    const SalemRoots roots = salem_root(p, q, prec);
    const SalemResiduals res = salem_residuals(p, q, roots);
    rec.result = Json{{"alpha", ball_json(roots.alpha)},
                      {"gamma", ball_json(roots.gamma)},
                      {"residual_alpha_exp", error_exp(res.alpha)},
                      {"residual_gamma_exp", error_exp(res.gamma)},
                      {"gamma_modulus_error_exp", error_exp(res.gamma_modulus)}};
    rec.table.header = {"p", "q", "alpha", "gamma"};
    rec.table.rows.push_back({std::to_string(p), std::to_string(q), short_ball(roots.alpha), short_ball(roots.gamma)});
    rec.plain.push_back("alpha = " + to_decimal(roots.alpha.mid(), 30));
    rec.plain.push_back("gamma = " + short_ball(roots.gamma));
    if (args.t) {
        const RealBall closed = t_family_alpha(*args.t, prec);
        rec.result["closed_form_alpha"] = ball_json(closed);
        rec.result["closed_form_agrees"] = (closed - roots.alpha).contains_zero();
    }
    rec.errata.emplace_back("region_alpha_reciprocal");
    return rec;
}

inline OutputRecord cmd_salem_binet(const SalemArgs& args, mpfr_prec_t prec)
{
    const auto [p, q] = args.resolve();
    OutputRecord rec;
    rec.command = "salem binet";
    rec.parameters = args.json(p, q);
    rec.precision = prec;
    rec.certification = "certified";
    const SalemQuartic sq = binet_coefficients(p, q, prec);
    rec.result = Json{{"alpha", ball_json(sq.alpha)},
                      {"gamma", ball_json(sq.gamma)},
                      {"lambda", ball_json(sq.binet[0])},
                      {"lambda1", ball_json(sq.binet[1])},
                      {"lambda2", ball_json(sq.binet[2])},
                      {"lambda3", ball_json(sq.binet[3])}};
    rec.table.header = {"coefficient", "value"};
    const char* names[] = {"lambda", "lambda1", "lambda2", "lambda3"};
    for (std::size_t i = 0; i < 4; ++i) {
        rec.table.rows.push_back({names[i], short_ball(sq.binet[i])});
        rec.plain.push_back(std::string(names[i]) + " = " + short_ball(sq.binet[i]));
    }
    if (args.t) {
        const RealBall closed = t_family_lambda(*args.t, prec);
        rec.result["closed_form_lambda"] = ball_json(closed);
        rec.result["closed_form_agrees"] = (closed - sq.binet[0].re()).contains_zero();
    }
    rec.errata.emplace_back("binet_closed_forms");
    return rec;
}

inline OutputRecord cmd_salem_smallness(const SalemArgs& args, mpfr_prec_t prec)
{
    const auto [p, q] = args.resolve();
    OutputRecord rec;
    rec.command = "salem smallness";
    rec.parameters = args.json(p, q);
    rec.precision = prec;
    rec.certification = "certified";
    const SmallnessVerdict v = smallness_condition(p, q, prec);
    rec.result = verdict_json(v);
    if (v.holds_for_all_n_ge_1 == Certainty::undecided) rec.certification = "undecided";
    rec.table.header = {"p", "q", "holds_for_all_n_ge_1", "holds_eventually", "margin"};
    rec.table.rows.push_back({std::to_string(p), std::to_string(q), std::string(to_string(v.holds_for_all_n_ge_1)),
                              std::string(to_string(v.holds_eventually)), short_ball(v.margin)});
    rec.plain.push_back("holds for all n >= 1: " + std::string(to_string(v.holds_for_all_n_ge_1)) +
                        ", eventually: " + std::string(to_string(v.holds_eventually)) +
                        ", margin: " + short_ball(v.margin));
    rec.errata.emplace_back("binet_inequality_direction");
    return rec;
}

inline OutputRecord cmd_salem_generate(const SalemArgs& args, std::size_t count, mpfr_prec_t prec)
{
    const auto [p, q] = args.resolve();
    const NearestIntegerSequence seq = nearest_integer_sequence(p, q, count, prec);
    Json params = args.json(p, q);
    params["count"] = count;
    OutputRecord rec = sequence_record("salem generate", params, seq.window);
    rec.precision = prec;
    rec.certification = "certified";
    rec.result["threshold"] = seq.threshold;
    rec.result["max_precision"] = seq.max_precision;
    rec.result["verdict"] = verdict_json(seq.verdict);
    rec.errata.emplace_back("binet_inequality_direction");
    if (p == 7 && q == 5) rec.errata.emplace_back("t7_missing_term");
    return rec;
}

inline std::string rational_string(const mpq_class& v) { return v.get_str(); }

inline OutputRecord cmd_salem_region(long p)
{
    const RegionBounds rb = region_bounds(p);
    OutputRecord rec;
    rec.command = "salem region";
    rec.parameters = Json{{"p", p}};
    rec.result = Json{{"q_low", rational_string(rb.low)}, {"q_high", rational_string(rb.high)}, {"strict", true}};
    rec.table.header = {"p", "q_low", "q_high"};
    rec.table.rows.push_back({std::to_string(p), rational_string(rb.low), rational_string(rb.high)});
    rec.plain.push_back("(" + rational_string(rb.low) + ", " + rational_string(rb.high) + ")");
    return rec;
}

inline std::string optional_bool(const std::optional<bool>& b) { return b ? (*b ? "true" : "false") : ""; }

inline OutputRecord cmd_salem_scan(long p_min, long p_max, bool strip, std::size_t empirical, mpfr_prec_t prec)
{
    ScanOptions opt;
    opt.precision = prec;
    opt.whole_strip = strip;
    opt.empirical_terms = empirical;
    const auto cells = scan_region(p_min, p_max, opt);

    OutputRecord rec;
    rec.command = "salem scan";
    rec.parameters = Json{{"p_min", p_min}, {"p_max", p_max}, {"whole_strip", strip}, {"empirical_terms", empirical}};
    rec.precision = prec;
    rec.certification = "certified";
    rec.table.header = {"p", "q", "in_region", "verdict", "margin", "holds_eventually", "agreement", "empirical_identity"};
    Json list = Json::array(), findings = Json::array();
    std::size_t agree = 0, disagree = 0, undecided = 0;
    for (const auto& c : cells) {
        Json cj{{"p", c.p},
                {"q", c.q},
                {"in_region", c.in_region},
                {"verdict", std::string(to_string(c.verdict.holds_for_all_n_ge_1))},
                {"holds_eventually", std::string(to_string(c.verdict.holds_eventually))},
                {"margin", ball_json(c.verdict.margin)},
                {"agreement", std::string(to_string(c.agreement))},
                {"empirical_identity", c.empirical_identity ? Json(*c.empirical_identity) : Json(nullptr)}};
        if (c.agreement == RegionAgreement::agree) ++agree;
        if (c.agreement == RegionAgreement::disagree) ++disagree;
        if (c.agreement == RegionAgreement::undecided) ++undecided;
        if (c.agreement != RegionAgreement::agree) findings.push_back(Json{{"kind", "region_disagreement"}, {"cell", cj}});
        if (c.verdict.holds_for_all_n_ge_1 != Certainty::yes && c.empirical_identity.value_or(false))
            findings.push_back(Json{{"kind", "identity_without_smallness"}, {"cell", cj}});
        list.push_back(cj);
        rec.table.rows.push_back({std::to_string(c.p), std::to_string(c.q), c.in_region ? "true" : "false",
                                  std::string(to_string(c.verdict.holds_for_all_n_ge_1)), short_ball(c.verdict.margin),
                                  std::string(to_string(c.verdict.holds_eventually)),
                                  std::string(to_string(c.agreement)), optional_bool(c.empirical_identity)});
    }
    const double rate = cells.empty() ? 1.0 : static_cast<double>(agree) / static_cast<double>(cells.size());
    rec.result["cells"] = list;
    rec.result["summary"] =
        Json{{"cells", cells.size()}, {"agree", agree}, {"disagree", disagree}, {"undecided", undecided}, {"agreement_rate", rate}};
    rec.result["findings"] = findings;
    if (undecided) rec.certification = "partially_undecided";
    rec.plain.push_back(std::to_string(cells.size()) + " cells, " + std::to_string(agree) + " agree, " +
                        std::to_string(disagree) + " disagree, " + std::to_string(undecided) + " undecided");
    for (const auto& f : findings)
        rec.plain.push_back(f["kind"].get<std::string>() + ": p=" + std::to_string(f["cell"]["p"].get<long>()) +
                            " q=" + std::to_string(f["cell"]["q"].get<long>()));
    return rec;
}

struct DivcheckArgs {
    std::optional<std::string> lucas, terms, standard;
    std::optional<long> salem;
    std::size_t n = 30;
};

inline OutputRecord cmd_divcheck(const DivcheckArgs& a, mpfr_prec_t prec)
{
    const int sources = a.lucas.has_value() + a.terms.has_value() + a.standard.has_value() + a.salem.has_value();
    if (sources != 1) throw PreconditionError("give exactly one of --lucas, --terms, --standard, --salem");
    SequenceWindow w;
    Json params;
    if (a.lucas) {
        const auto hk = parse_integer_list(*a.lucas, "lucas");
        if (hk.size() != 2) throw PreconditionError("--lucas expects h,k");
        w = lucas_terms({hk[0], hk[1]}, a.n + 1);
        params = Json{{"lucas", big_list(hk)}, {"n", a.n}};
    } else if (a.standard) {
        const auto pqr = parse_integer_list(*a.standard, "standard");
        if (pqr.size() != 3) throw PreconditionError("--standard expects p,q,r");
        w = standard_terms({pqr[0], pqr[1], pqr[2]}, a.n + 1);
        params = Json{{"standard", big_list(pqr)}, {"n", a.n}};
    } else if (a.salem) {
        const TFamily tf = t_family_params(*a.salem);
        const auto seq = nearest_integer_sequence(tf.p, tf.q, a.n, prec);
        w.terms.push_back(0);  // a_0 = 0 by convention
        w.terms.insert(w.terms.end(), seq.window.terms.begin(), seq.window.terms.end());
        params = Json{{"salem_t", *a.salem}, {"n", a.n}};
    } else {
        w.terms = parse_integer_list(*a.terms, "terms");
        params = Json{{"terms", big_list(w.terms)}};
    }
    const auto violations = divisibility_check(w);
    OutputRecord rec;
    rec.command = "divcheck";
    rec.parameters = params;
    if (a.salem) {
        rec.precision = prec;
        rec.certification = "certified";
    }
    Json vj = Json::array();
    rec.table.header = {"m", "n"};
    for (const auto& v : violations) {
        vj.push_back(Json::array({v.m, v.n}));
        rec.table.rows.push_back({std::to_string(v.m), std::to_string(v.n)});
    }
    rec.result = Json{{"count", w.size()}, {"divisibility_sequence", violations.empty()}, {"violations", vj}};
    if (violations.empty()) {
        rec.plain.push_back("no violations in " + std::to_string(w.size()) + " terms");
    } else {
        for (const auto& v : violations)
            rec.plain.push_back("violation: a_" + std::to_string(v.m) + " does not divide a_" + std::to_string(v.n));
    }
    return rec;
}

struct OeisArgs {
    std::string terms;
    std::string source = "cache-first";
    std::optional<std::string> cache_dir, fixture_dir;
};

inline OutputRecord cmd_oeis(const OeisArgs& a, oeis::Transport transport = {})
{
    const auto terms = parse_integer_list(a.terms, "terms");
    oeis::ClientOptions opt;
    if (a.cache_dir) opt.cache_dir = *a.cache_dir;
    if (a.fixture_dir) opt.fixture_dir = *a.fixture_dir;
    if (transport) opt.transport = std::move(transport);
    oeis::SourcePolicy policy = oeis::SourcePolicy::cache_first;
    if (a.source == "cache-only") policy = oeis::SourcePolicy::cache_only;
    else if (a.source == "live") policy = oeis::SourcePolicy::live_only;
    else if (a.source == "fixture") policy = oeis::SourcePolicy::fixture_only;
    else if (a.source != "cache-first") throw PreconditionError("unknown source policy '" + a.source + "'");

    oeis::Client client(std::move(opt));
    const oeis::LookupResult res = client.lookup(terms, policy);

    OutputRecord rec;
    rec.command = "oeis";
    rec.parameters = Json{{"terms", big_list(terms)}, {"source", a.source}};
    rec.certification = "informational";
    Json matches = Json::array();
    rec.table.header = {"sequence_id", "name", "matched_prefix_length"};
    for (const auto& m : res.matches) {
        matches.push_back(Json{{"sequence_id", m.sequence_id}, {"name", m.name}, {"matched_prefix_length", m.matched_prefix_length}});
        rec.table.rows.push_back({m.sequence_id, m.name, std::to_string(m.matched_prefix_length)});
        rec.plain.push_back(m.sequence_id + "  " + m.name);
    }
    rec.result = Json{{"status", std::string(to_string(res.status))},
                      {"source", res.source ? Json(std::string(to_string(*res.source))) : Json(nullptr)},
                      {"query", res.query},
                      {"matches", matches},
                      {"detail", res.detail}};
    if (res.status == oeis::LookupStatus::malformed) rec.result["raw_payload"] = res.raw_payload;
    if (res.status == oeis::LookupStatus::ok && res.matches.empty()) rec.plain.push_back("no matches");
    if (res.status != oeis::LookupStatus::ok) {
        rec.plain.push_back(std::string(to_string(res.status)) + ": " + res.detail);
        rec.exit_code = ExitCode::service_unavailable;
    }
    return rec;
}

inline OutputRecord cmd_errata()
{
    OutputRecord rec;
    rec.command = "errata";
    rec.result["entries"] = Json::array();
    rec.table.header = {"id", "location", "printed", "implemented", "evidence"};
    for (const auto& e : errata_ledger()) {
        rec.result["entries"].push_back(Json{{"id", e.id},
                                             {"location", e.location},
                                             {"printed", e.printed},
                                             {"implemented", e.implemented},
                                             {"evidence", e.evidence}});
        rec.table.rows.push_back({std::string(e.id), std::string(e.location), std::string(e.printed),
                                  std::string(e.implemented), std::string(e.evidence)});
        rec.plain.push_back(std::string(e.id) + ": printed " + std::string(e.printed) + " | implemented " +
                            std::string(e.implemented));
    }
    return rec;
}

// ---- dispatch ------------------------------------------------------------

/// Hooks for tests.
struct RunOptions {
    oeis::Transport oeis_transport;
};

inline void emit_error(const std::string& command, const std::string& kind, const std::string& message, int code,
                       const std::string& format, std::ostream& out, std::ostream& err)
{
    if (format == "json") {
        out << Json{{"command", command}, {"error", Json{{"kind", kind}, {"message", message}}}, {"exit_code", code}}.dump()
            << '\n';
    } else if (format == "csv") {
        write_csv_row(out, {"error", "kind", "message", "exit_code"});
        write_csv_row(out, {command, kind, message, std::to_string(code)});
    } else {
        err << "error (" << kind << "): " << message << '\n';
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const RunOptions& hooks = {})
{
    CLI::App app{"lds4: order-4 linear divisibility sequences, Lucas products and Salem numbers", "lds4"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "plain";
    mpfr_prec_t precision = default_precision();
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "plain"}));
    app.add_option("--precision", precision, "Starting precision in bits (env LDS4_PRECISION, default 256)")
        ->check(CLI::Range(16L, static_cast<long>(kPrecisionCap)));

    std::string command;
    std::function<OutputRecord()> action;

    // lucas
    std::string h = "1", k = "-1";
    std::size_t count = 10;
    auto* lucas = app.add_subcommand("lucas", "Terms U_0.. of the Lucas sequence of x^2 - h x + k");
    lucas->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
    lucas->add_option("--h", h)->required();
    lucas->add_option("--k", k)->required();
    lucas->add_option("--count", count, "number of terms")->capture_default_str();
    lucas->callback([&] { action = [&] { return cmd_lucas(h, k, count); }; });

    // compose
    std::string h1, k1, h2, k2;
    auto* compose = app.add_subcommand("compose", "Product of two Lucas sequences as a standard LDS");
    compose->add_option("--h1", h1)->required();
    compose->add_option("--k1", k1)->required();
    compose->add_option("--h2", h2)->required();
    compose->add_option("--k2", k2)->required();
    compose->add_option("--count", count)->capture_default_str();
    compose->callback([&] { action = [&] { return cmd_compose(h1, k1, h2, k2, count); }; });

    // factor / terms / bound share p, q, r
    std::string sp_p, sp_q, sp_r = "1";
    std::size_t n_max = 20, n_index = 1;
    auto* factor = app.add_subcommand("factor", "Factor a standard LDS into two order-2 LDSs over C");
    factor->add_option("--p", sp_p)->required();
    factor->add_option("--q", sp_q)->required();
    factor->add_option("--r", sp_r)->required();
    factor->add_option("--n-max", n_max, "terms compared when verifying")->capture_default_str();
    factor->callback([&] { action = [&] { return cmd_factor(parse_standard(sp_p, sp_q, sp_r), n_max, precision); }; });

    auto* terms = app.add_subcommand("terms", "Terms a_0.. of the standard LDS (p, q, r)");
    terms->add_option("--p", sp_p)->required();
    terms->add_option("--q", sp_q)->required();
    terms->add_option("--r", sp_r)->required();
    terms->add_option("--count", count)->capture_default_str();
    terms->callback([&] { action = [&] { return cmd_terms(parse_standard(sp_p, sp_q, sp_r), count); }; });

    auto* bound = app.add_subcommand("bound", "Pair-product divisor sequence b_n of a standard LDS");
    bound->add_option("--p", sp_p)->required();
    bound->add_option("--q", sp_q)->required();
    bound->add_option("--r", sp_r)->required();
    bound->add_option("--n", n_index)->required();
    bound->callback([&] { action = [&] { return cmd_bound(parse_standard(sp_p, sp_q, sp_r), n_index, precision); }; });

    std::string coeffs, f_text, g_text;
    auto* recognize = app.add_subcommand("recognize", "Recognize a standard quartic (coefficients constant term first)");
    recognize->add_option("--coeffs", coeffs)->required();
    recognize->callback([&] { action = [&] { return cmd_recognize(coeffs); }; });

    auto* kron = app.add_subcommand("kron", "Kronecker product of two monic polynomials (constant term first)");
    kron->add_option("--f", f_text)->required();
    kron->add_option("--g", g_text)->required();
    kron->callback([&] { action = [&] { return cmd_kron(f_text, g_text); }; });

    // salem
    SalemArgs sa;
    long region_p = 2, p_min = 2, p_max = 12;
    bool whole_strip = false;
    std::size_t empirical = 40;
    std::size_t salem_count = 7;
    auto* salem = app.add_subcommand("salem", "Salem standard quartics and nearest-integer sequences");
    salem->require_subcommand(1);
    auto add_pq = [&](CLI::App* sub) {
        sub->add_option("--p", sa.p);
        sub->add_option("--q", sa.q);
        sub->add_option("--t", sa.t, "t-family x^4 - t x^3 + t x^2 - t x + 1");
    };
    auto* s_check = salem->add_subcommand("check", "Is (p, q) a Salem standard pair");
    add_pq(s_check);
    s_check->callback([&] { action = [&] { return cmd_salem_check(sa); }; });
    auto* s_roots = salem->add_subcommand("roots", "Certified alpha and gamma");
    add_pq(s_roots);
    s_roots->callback([&] { action = [&] { return cmd_salem_roots(sa, precision); }; });
    auto* s_binet = salem->add_subcommand("binet", "Binet coefficients lambda..lambda3");
    add_pq(s_binet);
    s_binet->callback([&] { action = [&] { return cmd_salem_binet(sa, precision); }; });
    auto* s_small = salem->add_subcommand("smallness", "Certified smallness verdict");
    add_pq(s_small);
    s_small->callback([&] { action = [&] { return cmd_salem_smallness(sa, precision); }; });
    auto* s_gen = salem->add_subcommand("generate", "E(lambda alpha^n) for n = 1..count");
    add_pq(s_gen);
    s_gen->add_option("--count", salem_count)->capture_default_str();
    s_gen->callback([&] { action = [&] { return cmd_salem_generate(sa, salem_count, precision); }; });
    auto* s_region = salem->add_subcommand("region", "Closed-form q bounds for a given p");
    s_region->add_option("--p", region_p)->required();
    s_region->callback([&] { action = [&] { return cmd_salem_region(region_p); }; });
    auto* s_scan = salem->add_subcommand("scan", "Scan (p, q) cells against the certified smallness oracle");
    s_scan->add_option("--p-min", p_min)->capture_default_str();
    s_scan->add_option("--p-max", p_max)->capture_default_str();
    s_scan->add_flag("--strip", whole_strip, "scan the whole Salem strip, not only the closed-form region");
    s_scan->add_option("--empirical", empirical, "terms compared with the exact recurrence (0: off)")->capture_default_str();
    s_scan->callback([&] { action = [&] { return cmd_salem_scan(p_min, p_max, whole_strip, empirical, precision); }; });

    DivcheckArgs da;
    auto* divcheck = app.add_subcommand("divcheck", "Check m | n => a_m | a_n on a window starting at a_0");
    divcheck->add_option("--lucas", da.lucas, "h,k");
    divcheck->add_option("--terms", da.terms, "explicit terms a_0,a_1,...");
    divcheck->add_option("--standard", da.standard, "p,q,r");
    divcheck->add_option("--salem", da.salem, "t-family parameter t");
    divcheck->add_option("--n", da.n, "largest index checked")->capture_default_str();
    divcheck->callback([&] { action = [&] { return cmd_divcheck(da, precision); }; });

    OeisArgs oa;
    auto* oeis_cmd = app.add_subcommand("oeis", "Look terms up in the OEIS (cached; optional)");
    oeis_cmd->add_option("--terms", oa.terms)->required();
    oeis_cmd->add_option("--source", oa.source)->check(CLI::IsMember({"cache-first", "cache-only", "live", "fixture"}))->capture_default_str();
    oeis_cmd->add_option("--cache-dir", oa.cache_dir, "default: LDS4_OEIS_CACHE or ~/.cache/lds4/oeis");
    oeis_cmd->add_option("--fixture-dir", oa.fixture_dir);
    oeis_cmd->callback([&] { action = [&] { return cmd_oeis(oa, hooks.oeis_transport); }; });

    auto* errata = app.add_subcommand("errata", "Ledger of corrected published formulas");
    errata->callback([&] { action = [&] { return cmd_errata(); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitCode::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitCode::ok;
    } catch (const CLI::ParseError& e) {
        emit_error(argc > 1 ? argv[1] : "", "usage", e.what(), ExitCode::precondition, format, out, err);
        return ExitCode::precondition;
    }

    for (const auto* sub : app.get_subcommands()) {
        command = sub->get_name();
        for (const auto* inner : sub->get_subcommands()) command += " " + inner->get_name();
    }

    try {
        OutputRecord rec = action();
        emit(rec, format, out);
        return rec.exit_code;
    } catch (const PreconditionError& e) {
        emit_error(command, "precondition", e.what(), ExitCode::precondition, format, out, err);
        return ExitCode::precondition;
    } catch (const PrecisionExhausted& e) {
        emit_error(command, "precision_exhausted", e.what(), ExitCode::precision_exhausted, format, out, err);
        return ExitCode::precision_exhausted;
    } catch (const ServiceUnavailable& e) {
        emit_error(command, "service_unavailable", e.what(), ExitCode::service_unavailable, format, out, err);
        return ExitCode::service_unavailable;
    } catch (const std::exception& e) {
        emit_error(command, "internal", e.what(), ExitCode::failure, format, out, err);
        return ExitCode::failure;
    }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const RunOptions& hooks = {})
{
    std::vector<const char*> argv{"lds4"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err, hooks);
}

}  // namespace lds4::cli

#endif  // LDS4_CLI_HPP
