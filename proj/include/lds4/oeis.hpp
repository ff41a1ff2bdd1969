#ifndef LDS4_OEIS_HPP
#define LDS4_OEIS_HPP

// Optional OEIS lookup with an on-disk cache and a fixture mode for offline
// tests. Network failures never propagate as exceptions; they come back as
// LookupStatus::unavailable.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#ifdef LDS4_OEIS_HTTPS
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#endif
#include <httplib.h>

#include "lds4/error.hpp"

namespace lds4::oeis {

enum class LookupSource { live, cache, fixture };
enum class LookupStatus { ok, unavailable, malformed };
enum class SourcePolicy { cache_first, cache_only, live_only, fixture_only };

inline std::string_view to_string(LookupSource s)
{
    switch (s) {
    case LookupSource::live: return "live";
    case LookupSource::cache: return "cache";
    case LookupSource::fixture: return "fixture";
    }
    return "?";
}

inline std::string_view to_string(LookupStatus s)
{
    switch (s) {
    case LookupStatus::ok: return "ok";
    case LookupStatus::unavailable: return "unavailable";
    case LookupStatus::malformed: return "malformed";
    }
    return "?";
}

/// "A" followed by 6 or 7 digits.
inline bool valid_sequence_id(std::string_view id)
{
    if (id.size() < 7 || id.size() > 8 || id[0] != 'A') return false;
    for (char c : id.substr(1))
        if (c < '0' || c > '9') return false;
    return true;
}

struct OeisMatch {
    std::string sequence_id;
    std::string name;
    std::size_t matched_prefix_length = 0;

    friend bool operator==(const OeisMatch&, const OeisMatch&) = default;
};

struct LookupResult {
    LookupStatus status = LookupStatus::unavailable;
    std::optional<LookupSource> source;
    std::vector<OeisMatch> matches;  // in the service's relevance order
    std::string query;
    std::string raw_payload;  // verbatim response body, kept for audits
    std::string detail;       // reason when status != ok
};

struct HttpResponse {
    bool reached = false;  // false: DNS/connect/transfer failure
    int status = 0;
    std::string body;
    std::string error;
};

/// GET `target` (path plus query string) on the OEIS host.
using Transport = std::function<HttpResponse(const std::string& target)>;

inline Transport http_transport(std::string host = "oeis.org")
{
    return [host = std::move(host)](const std::string& target) {
#ifdef LDS4_OEIS_HTTPS
        httplib::SSLClient cli(host, 443);
#else
        httplib::Client cli(host, 80);
#endif
        cli.set_follow_location(true);
        cli.set_connection_timeout(10);
        cli.set_read_timeout(30);
        auto res = cli.Get(target);
        HttpResponse out;
        if (!res) {
            out.error = httplib::to_string(res.error());
            return out;
        }
        out.reached = true;
        out.status = res->status;
        out.body = res->body;
        return out;
    };
}

inline std::string query_string(const std::vector<mpz_class>& terms)
{
    std::string q;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) q += ',';
        q += terms[i].get_str();
    }
    return q;
}

/// FNV-1a 64 of the query, hex: the cache/fixture file stem.
inline std::string cache_key(std::string_view query)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : query) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class MalformedResponse : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::vector<std::string> split_terms(std::string_view data)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : data) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// Longest prefix of the query found as a contiguous run of the entry's terms.
inline std::size_t matched_prefix(const std::vector<std::string>& data, const std::vector<std::string>& query)
{
    std::size_t best = 0;
    for (std::size_t s = 0; s < data.size(); ++s) {
        std::size_t k = 0;
        while (k < query.size() && s + k < data.size() && data[s + k] == query[k]) ++k;
        best = std::max(best, k);
    }
    return best;
}

}  // namespace detail

/// Parses the JSON search response. Accepts both the bare-array form and the
/// older {"results": [...]} envelope; null means no matches.
inline std::vector<OeisMatch> parse_response(const std::string& body, const std::vector<mpz_class>& terms)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedResponse(std::string("response is not JSON: ") + e.what());
    }
    const nlohmann::json* results = &doc;
    if (doc.is_object()) {
        if (!doc.contains("results")) throw MalformedResponse("response object has no \"results\" member");
        results = &doc["results"];
    }
    std::vector<OeisMatch> out;
    if (results->is_null()) return out;
    if (!results->is_array()) throw MalformedResponse("results is neither an array nor null");

    const auto query = detail::split_terms(query_string(terms));
    for (const auto& entry : *results) {
        if (!entry.is_object() || !entry.contains("number") || !entry["number"].is_number_integer())
            throw MalformedResponse("result entry without an integer \"number\"");
        char id[16];
        std::snprintf(id, sizeof id, "A%06lld", entry["number"].get<long long>());
        OeisMatch m{id, entry.value("name", std::string{}), 0};
        if (!valid_sequence_id(m.sequence_id)) throw MalformedResponse("sequence number out of range");
        if (entry.contains("data") && entry["data"].is_string())
            m.matched_prefix_length = detail::matched_prefix(detail::split_terms(entry["data"].get<std::string>()), query);
        out.push_back(std::move(m));
    }
    return out;
}

/// LDS4_OEIS_CACHE, else $XDG_CACHE_HOME/lds4/oeis, else ~/.cache/lds4/oeis.
inline std::filesystem::path default_cache_dir()
{
    if (const char* env = std::getenv("LDS4_OEIS_CACHE"); env && *env) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "lds4" / "oeis";
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::filesystem::path(home) / ".cache" / "lds4" / "oeis";
    return std::filesystem::path(".lds4-oeis-cache");
}

struct ClientOptions {
    std::filesystem::path cache_dir = default_cache_dir();
    std::filesystem::path fixture_dir;
    std::chrono::milliseconds min_interval{2000};  // between live requests
    Transport transport = http_transport();
};

/// Stored response: one JSON file per query with the verbatim body and the
/// fetch time.
struct StoredResponse {
    std::string query;
    std::string fetched_at;
    std::string response;
};

inline std::optional<StoredResponse> read_stored(const std::filesystem::path& dir, const std::string& query)
{
    if (dir.empty()) return std::nullopt;
    std::ifstream in(dir / (cache_key(query) + ".json"), std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        const auto doc = nlohmann::json::parse(ss.str());
        StoredResponse s{doc.at("query").get<std::string>(), doc.value("fetched_at", std::string{}),
                         doc.at("response").get<std::string>()};
        if (s.query != query) return std::nullopt;  // hash collision
        return s;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

inline void write_stored(const std::filesystem::path& dir, const StoredResponse& s)
{
    std::filesystem::create_directories(dir);
    const auto final_path = dir / (cache_key(s.query) + ".json");
    auto tmp = final_path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << nlohmann::ordered_json{{"query", s.query}, {"fetched_at", s.fetched_at}, {"response", s.response}}.dump(2)
            << '\n';
    }
    std::filesystem::rename(tmp, final_path);
}

inline std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Thread-safe client. Live requests are serialized and spaced by at least
/// min_interval.
class Client {
public:
    explicit Client(ClientOptions options = {}) : opt_(std::move(options)) {}

    const ClientOptions& options() const noexcept { return opt_; }

    LookupResult lookup(const std::vector<mpz_class>& terms, SourcePolicy policy = SourcePolicy::cache_first)
    {
        if (terms.size() < 4) throw PreconditionError("OEIS lookup needs at least 4 terms");
        LookupResult res;
        res.query = query_string(terms);

        if (policy == SourcePolicy::fixture_only) {
            if (auto s = read_stored(opt_.fixture_dir, res.query)) return finish(res, terms, LookupSource::fixture, s->response);
            res.detail = "no fixture recorded for this query";
            return res;
        }
        if (policy == SourcePolicy::cache_first || policy == SourcePolicy::cache_only) {
            if (auto s = read_stored(opt_.cache_dir, res.query)) return finish(res, terms, LookupSource::cache, s->response);
            if (policy == SourcePolicy::cache_only) {
                res.detail = "query not in cache";
                return res;
            }
        }

        const HttpResponse http = fetch_live("/search?fmt=json&q=" + res.query);
        if (!http.reached) {
            res.detail = "network unavailable: " + http.error;
            return res;
        }
        if (http.status != 200) {
            res.raw_payload = http.body;
            res.detail = "HTTP status " + std::to_string(http.status);
            return res;
        }
        finish(res, terms, LookupSource::live, http.body);
        if (res.status == LookupStatus::ok && !opt_.cache_dir.empty()) {
            try {
                write_stored(opt_.cache_dir, {res.query, utc_timestamp(), http.body});
            } catch (const std::filesystem::filesystem_error& e) {
                res.detail = std::string("result not cached: ") + e.what();
            }
        }
        return res;
    }

private:
    static LookupResult& finish(LookupResult& res, const std::vector<mpz_class>& terms, LookupSource src,
                                const std::string& body)
    {
        res.source = src;
        res.raw_payload = body;
        try {
            res.matches = parse_response(body, terms);
            res.status = LookupStatus::ok;
        } catch (const MalformedResponse& e) {
            res.status = LookupStatus::malformed;
            res.detail = e.what();
        }
        return res;
    }

    HttpResponse fetch_live(const std::string& target)
    {
        std::lock_guard lock(live_mutex_);
        if (last_request_) {
            const auto ready = *last_request_ + opt_.min_interval;
            std::this_thread::sleep_until(ready);
        }
        HttpResponse r;
        try {
            r = opt_.transport ? opt_.transport(target) : HttpResponse{false, 0, {}, "no transport configured"};
        } catch (const std::exception& e) {
            r = HttpResponse{false, 0, {}, e.what()};
        }
        last_request_ = std::chrono::steady_clock::now();
        return r;
    }

    ClientOptions opt_;
    std::mutex live_mutex_;
    std::optional<std::chrono::steady_clock::time_point> last_request_;
};

}  // namespace lds4::oeis

#endif  // LDS4_OEIS_HPP
