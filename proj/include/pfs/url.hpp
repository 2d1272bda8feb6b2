#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace pfs {

// Just enough URL handling for remotereadhost values: absolute http or
// https, an authority, and everything after the authority kept verbatim
// as the request target.
struct UrlParts {
    std::string scheme;   // "http" or "https"
    std::string host;
    int port = 0;         // scheme default applied
    std::string target;   // path + query, at least "/"
};

inline std::optional<UrlParts> parse_http_url(std::string_view url) {
    UrlParts parts;
    if (url.substr(0, 7) == "http://") {
        parts.scheme = "http";
        parts.port = 80;
        url.remove_prefix(7);
    } else if (url.substr(0, 8) == "https://") {
        parts.scheme = "https";
        parts.port = 443;
        url.remove_prefix(8);
    } else {
        return std::nullopt;
    }

    auto authority_end = url.find_first_of("/?#");
    std::string_view authority = url.substr(0, authority_end);
    if (authority.empty() || authority.find('@') != std::string_view::npos)
        return std::nullopt;

    auto colon = authority.rfind(':');
    if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
        std::string_view port_text = authority.substr(colon + 1);
        int port = 0;
        auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
        if (port_text.empty() || ec != std::errc{} ||
            p != port_text.data() + port_text.size() || port < 1 || port > 65535)
            return std::nullopt;
        parts.port = port;
        authority = authority.substr(0, colon);
    }
    if (authority.empty()) return std::nullopt;
    for (char c : authority) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u <= 0x20 || u == 0x7F || c == '/' || c == '\\') return std::nullopt;
    }
    parts.host = std::string(authority);

    if (authority_end == std::string_view::npos) {
        parts.target = "/";
    } else {
        std::string_view rest = url.substr(authority_end);
        parts.target = rest.front() == '/' ? std::string(rest) : "/" + std::string(rest);
    }
    return parts;
}

inline bool looks_like_http_url(std::string_view url) {
    return parse_http_url(url).has_value();
}

}  // namespace pfs
