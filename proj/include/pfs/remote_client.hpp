#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <httplib.h>

#include "pfs/url.hpp"

namespace pfs {

struct FetchOptions {
    std::chrono::milliseconds timeout{10000};  // whole operation, redirects included
    std::uint64_t max_bytes = 64ull * 1024 * 1024;
    int max_redirects = 3;
};

struct FetchResult {
    int status = 0;
    std::string content_type;
    std::string body;
};

enum class FetchErrorKind {
    bad_scheme,  // not an absolute http/https URL (ftp etc. unsupported)
    connect_failure,
    timeout,
    too_large,
    redirect_loop,
    transport,
};

struct FetchError {
    FetchErrorKind kind = FetchErrorKind::transport;
    std::string detail;
};

// Any HTTP response, including 4xx/5xx, is a success at this layer;
// `error` only reports failures to obtain a response at all.
struct FetchOutcome {
    std::optional<FetchResult> response;
    FetchError error;

    bool ok() const { return response.has_value(); }
};

namespace detail {

inline bool redirect_status(int status) {
    return status == 301 || status == 302 || status == 303 || status == 307 ||
           status == 308;
}

inline std::string resolve_redirect(const UrlParts& base, std::string_view location) {
    if (location.substr(0, 7) == "http://" || location.substr(0, 8) == "https://")
        return std::string(location);
    std::string origin = base.scheme + "://" + base.host + ":" + std::to_string(base.port);
    if (!location.empty() && location.front() == '/')
        return origin + std::string(location);
    std::string_view dir = base.target;
    dir = dir.substr(0, dir.rfind('/') + 1);
    return origin + std::string(dir) + std::string(location);
}

inline FetchOutcome fetch_failure(FetchErrorKind kind, std::string detail) {
    FetchOutcome out;
    out.error = {kind, std::move(detail)};
    return out;
}

}  // namespace detail

// Single GET with bounded time, bounded size, and a short manual
// redirect chase. Following redirects by hand keeps every hop under
// the same deadline and byte cap.
inline FetchOutcome fetch_url(const std::string& url, const FetchOptions& options = {}) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + options.timeout;

    std::string current = url;
    for (int hop = 0; hop <= options.max_redirects; ++hop) {
        auto parts = parse_http_url(current);
        if (!parts)
            return detail::fetch_failure(FetchErrorKind::bad_scheme,
                                         "not an absolute http/https URL: " + current);

        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - clock::now());
        if (remaining.count() <= 0)
            return detail::fetch_failure(FetchErrorKind::timeout,
                                         "deadline exceeded before " + current);

        httplib::Client client(parts->scheme + "://" + parts->host + ":" +
                               std::to_string(parts->port));
        client.set_connection_timeout(remaining);
        client.set_read_timeout(remaining);
        client.set_write_timeout(remaining);
        client.set_follow_location(false);

        httplib::Headers headers = {{"User-Agent", "pfswrap/1.0"}, {"Accept", "*/*"}};

        std::string body;
        bool oversize = false;
        auto result = client.Get(parts->target, headers,
                                 [&](const char* data, size_t len) {
                                     if (body.size() + len > options.max_bytes) {
                                         oversize = true;
                                         return false;
                                     }
                                     body.append(data, len);
                                     return true;
                                 });

        if (!result) {
            switch (result.error()) {
                case httplib::Error::Canceled:
                    if (oversize)
                        return detail::fetch_failure(
                            FetchErrorKind::too_large,
                            "response exceeds " + std::to_string(options.max_bytes) +
                                " bytes");
                    return detail::fetch_failure(FetchErrorKind::transport,
                                                 "transfer canceled");
                case httplib::Error::ConnectionTimeout:
                    return detail::fetch_failure(FetchErrorKind::timeout,
                                                 "connect timed out: " + current);
                case httplib::Error::Read:
                case httplib::Error::Write:
                    return detail::fetch_failure(FetchErrorKind::timeout,
                                                 "transfer timed out: " + current);
                case httplib::Error::Connection:
                case httplib::Error::SSLConnection:
                    return detail::fetch_failure(FetchErrorKind::connect_failure,
                                                 "cannot connect: " + current);
                default:
                    return detail::fetch_failure(
                        FetchErrorKind::transport,
                        "transport error " + std::to_string(static_cast<int>(result.error())));
            }
        }

        if (detail::redirect_status(result->status)) {
            std::string location = result->get_header_value("Location");
            if (location.empty())
                return detail::fetch_failure(FetchErrorKind::transport,
                                             "redirect without Location");
            if (hop == options.max_redirects)
                return detail::fetch_failure(
                    FetchErrorKind::redirect_loop,
                    "more than " + std::to_string(options.max_redirects) + " redirects");
            current = detail::resolve_redirect(*parts, location);
            continue;
        }

        FetchOutcome out;
        out.response = FetchResult{result->status, result->get_header_value("Content-Type"),
                                   std::move(body)};
        return out;
    }

    return detail::fetch_failure(FetchErrorKind::redirect_loop, "redirect chase overran");
}

}  // namespace pfs
