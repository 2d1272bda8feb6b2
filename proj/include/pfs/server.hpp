#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <thread>
#include <variant>

#include <httplib.h>

#include "pfs/archive_cache.hpp"
#include "pfs/format.hpp"
#include "pfs/io.hpp"
#include "pfs/path.hpp"
#include "pfs/remote_client.hpp"

namespace pfs {

struct ServerConfig {
    std::filesystem::path docroot;
    std::string bind_address = "127.0.0.1";
    int port = 8080;  // 0 picks an ephemeral port
    std::string index_name = "index.html";
    bool remote_relay = true;
    std::chrono::milliseconds remote_timeout{10000};
    std::uint64_t max_remote_bytes = 32ull * 1024 * 1024;
    std::size_t relay_concurrency = 8;
    std::size_t cache_capacity = 16;
    std::function<void(const std::string&)> log_sink;    // one access line per request
    std::function<void(const std::string&)> error_sink;  // diagnostics (parse failures)
};

// Routing outcome for a decoded request path.
struct PlainFile {
    std::filesystem::path file;
};
struct WholeWrapper {
    std::filesystem::path wrapper;
};
struct WrapperEntry {
    std::filesystem::path wrapper;
    std::string interior;  // normalized, index name already applied
};
struct NotFound {};
struct BadRequest {
    std::string reason;
};
using RouteDecision = std::variant<PlainFile, WholeWrapper, WrapperEntry, NotFound, BadRequest>;

// Decomposition of a decoded URL path around its first ".pfs" segment.
// `interior` is the raw remainder after that segment, leading slash
// included; empty means the path stopped dead at the wrapper name.
struct PathSplit {
    std::string rel;  // non-empty segments joined with "/"
    std::optional<std::string> wrapper_prefix;
    std::string wrapper_segment;
    std::string interior;
};

// Pure text-level split; no filesystem contact. Throws PathError only
// for NUL bytes. The ".pfs" suffix test is case-sensitive and the
// first matching segment wins, later ones belong to the interior.
inline PathSplit split_pfs_path(std::string_view decoded_path) {
    if (decoded_path.find('\0') != std::string_view::npos)
        throw PathError(PathError::Kind::illegal_byte, "path contains NUL");

    PathSplit split;
    std::size_t pos = 0;
    while (pos <= decoded_path.size()) {
        std::size_t slash = decoded_path.find('/', pos);
        std::size_t end = slash == std::string_view::npos ? decoded_path.size() : slash;
        std::string_view seg = decoded_path.substr(pos, end - pos);
        if (!seg.empty()) {
            if (!split.rel.empty()) split.rel.push_back('/');
            split.rel.append(seg);
            if (!split.wrapper_prefix && seg.size() > 4 &&
                seg.substr(seg.size() - 4) == ".pfs") {
                split.wrapper_prefix = split.rel;
                split.wrapper_segment = std::string(seg);
                split.interior = std::string(decoded_path.substr(end));
            }
        }
        if (slash == std::string_view::npos) break;
        pos = slash + 1;
    }
    return split;
}

namespace detail {

inline bool has_dot_segment(std::string_view path) {
    std::size_t pos = 0;
    while (pos <= path.size()) {
        std::size_t slash = path.find('/', pos);
        std::size_t end = slash == std::string_view::npos ? path.size() : slash;
        std::string_view seg = path.substr(pos, end - pos);
        if (seg == "." || seg == "..") return true;
        if (slash == std::string_view::npos) break;
        pos = slash + 1;
    }
    return false;
}

}  // namespace detail

enum class ProbeResult { missing, file, directory };
using ProbeFn = std::function<ProbeResult(const std::filesystem::path&)>;

inline ProbeResult probe_filesystem(const std::filesystem::path& p) {
    std::error_code ec;
    auto status = std::filesystem::status(p, ec);
    if (ec) return ProbeResult::missing;
    if (std::filesystem::is_regular_file(status)) return ProbeResult::file;
    if (std::filesystem::is_directory(status)) return ProbeResult::directory;
    return ProbeResult::missing;
}

// Precedence: a real file at the literal path always wins; otherwise
// the first ".pfs" segment is tried as a wrapper; everything else is
// 404. Directories are never listed and never fall back to an index
// file, only wrapper roots do. Traversal anywhere is rejected before
// the filesystem is consulted.
inline RouteDecision resolve_route(const std::filesystem::path& docroot,
                                   std::string_view decoded_path,
                                   const std::string& index_name,
                                   const ProbeFn& probe = probe_filesystem) {
    PathSplit split;
    try {
        split = split_pfs_path(decoded_path);
    } catch (const PathError& e) {
        return BadRequest{e.what()};
    }
    if (detail::has_dot_segment(decoded_path))
        return BadRequest{"path contains a dot segment"};

    // The literal probe keeps the path verbatim: a trailing slash makes
    // stat fail on a regular file, which is what routes "name.pfs/" to
    // the wrapper's index below. A second leading slash would re-root
    // the append, so such paths get no literal probe at all.
    std::string_view literal = decoded_path;
    if (!literal.empty() && literal.front() == '/') literal.remove_prefix(1);
    if (!literal.empty() && literal.front() != '/') {
        std::filesystem::path full = docroot / literal;
        if (probe(full) == ProbeResult::file) {
            if (split.wrapper_prefix && split.interior.empty()) return WholeWrapper{full};
            return PlainFile{full};
        }
    }

    if (split.wrapper_prefix) {
        std::filesystem::path wrapper = docroot / *split.wrapper_prefix;
        if (probe(wrapper) == ProbeResult::file) {
            if (split.interior.empty()) return WholeWrapper{wrapper};
            std::string interior;
            try {
                interior = normalize_interior_path(split.interior);
            } catch (const PathError& e) {
                return BadRequest{e.what()};
            }
            if (interior.empty()) interior = index_name;
            return WrapperEntry{wrapper, std::move(interior)};
        }
    }

    return NotFound{};
}

inline std::string_view mime_for_path(std::string_view path) {
    auto dot = path.rfind('.');
    auto slash = path.rfind('/');
    if (dot == std::string_view::npos ||
        (slash != std::string_view::npos && dot < slash))
        return "application/octet-stream";
    std::string ext(path.substr(dot + 1));
    for (char& c : ext)
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    if (ext == "html" || ext == "htm") return "text/html";
    if (ext == "txt") return "text/plain";
    if (ext == "css") return "text/css";
    if (ext == "js") return "text/javascript";
    if (ext == "gif") return "image/gif";
    if (ext == "jpg" || ext == "jpeg") return "image/jpeg";
    if (ext == "png") return "image/png";
    if (ext == "pfs") return "application/octet-stream";
    return "application/octet-stream";
}

inline constexpr std::string_view kNotFoundBody = "404 Error: not found";

class PfsServer {
public:
    explicit PfsServer(ServerConfig config)
        : config_(std::move(config)),
          cache_(config_.cache_capacity),
          relay_slots_(static_cast<std::ptrdiff_t>(
              config_.relay_concurrency ? config_.relay_concurrency : 1)) {
        server_.set_keep_alive_max_count(1);  // one response per connection
        server_.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
            handle_get(req, res);
        });
        auto reject = [this](const httplib::Request& req, httplib::Response& res) {
            res.status = 405;
            res.set_header("Accept-Ranges", "bytes");
            res.set_content("405 Error: method not allowed", "text/plain");
            log(req, res);
        };
        server_.Post(".*", reject);
        server_.Put(".*", reject);
        server_.Delete(".*", reject);
        server_.Options(".*", reject);
        server_.Patch(".*", reject);
    }

    ~PfsServer() { stop(); }

    PfsServer(const PfsServer&) = delete;
    PfsServer& operator=(const PfsServer&) = delete;

    // Binds and starts serving on a background thread. Returns false
    // when the address cannot be bound.
    bool start() {
        if (config_.port == 0) {
            port_ = server_.bind_to_any_port(config_.bind_address);
            if (port_ < 0) return false;
        } else {
            if (!server_.bind_to_port(config_.bind_address, config_.port)) return false;
            port_ = config_.port;
        }
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return true;
    }

    void stop() {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

    int port() const { return port_; }

    ArchiveCache& cache() { return cache_; }

    // Observes every filesystem path the server opens for content.
    using FileOpenHook = std::function<void(const std::filesystem::path&)>;
    void set_file_open_hook(FileOpenHook hook) { file_open_hook_ = std::move(hook); }

private:
    void note_open(const std::filesystem::path& p) {
        if (file_open_hook_) file_open_hook_(p);
    }

    void diag(const std::string& message) {
        if (config_.error_sink) config_.error_sink(message);
    }

    static void fill_error(httplib::Response& res, int status, std::string_view body) {
        res.status = status;
        res.set_content(std::string(body), "text/plain");
    }

    void handle_get(const httplib::Request& req, httplib::Response& res) {
        const auto started = std::chrono::steady_clock::now();
        res.set_header("Accept-Ranges", "bytes");

        RouteDecision decision =
            resolve_route(config_.docroot, req.path, config_.index_name);

        if (std::holds_alternative<BadRequest>(decision)) {
            fill_error(res, 400, "400 Error: bad request");
        } else if (std::holds_alternative<NotFound>(decision)) {
            fill_error(res, 404, kNotFoundBody);
        } else if (const auto* plain = std::get_if<PlainFile>(&decision)) {
            serve_plain(plain->file, res);
        } else if (const auto* whole = std::get_if<WholeWrapper>(&decision)) {
            serve_plain(whole->wrapper, res);
        } else if (const auto* entry = std::get_if<WrapperEntry>(&decision)) {
            serve_wrapper_entry(entry->wrapper, entry->interior, res);
        }

        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);
        log(req, res, elapsed.count());
    }

    void serve_plain(const std::filesystem::path& file, httplib::Response& res) {
        note_open(file);
        std::string bytes;
        try {
            bytes = read_file_bytes(file);
        } catch (const std::exception&) {
            fill_error(res, 404, kNotFoundBody);
            return;
        }
        res.status = 200;
        res.set_content(std::move(bytes), std::string(mime_for_path(file.string())));
    }

    void serve_wrapper_entry(const std::filesystem::path& wrapper,
                             const std::string& interior, httplib::Response& res) {
        std::shared_ptr<const ArchiveCache::Entry> entry;
        note_open(wrapper);
        try {
            entry = cache_.get(wrapper);
        } catch (const ParseError& e) {
            diag("parse failure in " + wrapper.string() + ": " + e.what());
            fill_error(res, 500, "500 Error: malformed wrapper");
            return;
        } catch (const std::exception&) {
            fill_error(res, 404, kNotFoundBody);
            return;
        }

        const EntityRecord* e = entry->index.find(entry->archive, interior);
        if (!e) {
            fill_error(res, 404, kNotFoundBody);
            return;
        }

        if (e->storage == Storage::embedded) {
            note_open(wrapper);
            std::string content;
            try {
                content = read_entity_content(wrapper, *e);
            } catch (const std::exception& ex) {
                diag("cannot read " + interior + " from " + wrapper.string() + ": " +
                     ex.what());
                fill_error(res, 500, "500 Error: cannot read entity");
                return;
            }
            res.status = 200;
            res.set_content(std::move(content),
                            std::string(mime_for_path(e->long_name)));
            return;
        }

        if (!config_.remote_relay) {
            fill_error(res, 502, "502 Error: remote relay disabled");
            return;
        }
        relay_slots_.acquire();
        FetchOptions options;
        options.timeout = config_.remote_timeout;
        options.max_bytes = config_.max_remote_bytes;
        FetchOutcome outcome = fetch_url(e->remote_read_host, options);
        relay_slots_.release();

        if (!outcome.ok()) {
            fill_error(res, 502, "502 Error: remote fetch failed (" +
                                     outcome.error.detail + ")");
            return;
        }
        if (outcome.response->status != 200) {
            fill_error(res, 502,
                       "502 Error: remote origin returned " +
                           std::to_string(outcome.response->status));
            return;
        }
        res.status = 200;
        std::string type = outcome.response->content_type.empty()
                               ? std::string(mime_for_path(e->long_name))
                               : outcome.response->content_type;
        res.set_content(std::move(outcome.response->body), type);
    }

    void log(const httplib::Request& req, const httplib::Response& res,
             long long millis = 0) {
        if (!config_.log_sink) return;
        config_.log_sink(req.method + " " + req.path + " " + std::to_string(res.status) +
                         " " + std::to_string(res.body.size()) + " " +
                         std::to_string(millis));
    }

    ServerConfig config_;
    ArchiveCache cache_;
    std::counting_semaphore<> relay_slots_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = -1;
    FileOpenHook file_open_hook_;
};

}  // namespace pfs
