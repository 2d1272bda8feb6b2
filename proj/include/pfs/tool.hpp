#pragma once

#include <fcntl.h>
#include <fnmatch.h>
#include <sys/stat.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "pfs/datetime.hpp"
#include "pfs/format.hpp"
#include "pfs/io.hpp"
#include "pfs/lookup.hpp"
#include "pfs/path.hpp"
#include "pfs/remote_client.hpp"
#include "pfs/url.hpp"

namespace pfs {

class ToolError : public std::runtime_error {
public:
    enum class Kind {
        output_exists,
        unreadable_file,
        duplicate_path,
        not_found,
        destination_collision,
        symlink_cycle,
        bad_argument,
    };

    ToolError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct RemoteRule {
    std::string glob;      // matched against the interior path
    std::string base_url;  // absolute http/https URL, relative path appended
};

struct BuildOptions {
    std::filesystem::path root;
    std::vector<std::string> include_globs;  // empty = include everything
    Encoding default_encoding = Encoding::raw;
    std::vector<RemoteRule> remote_rules;    // first matching rule wins
    std::string origin_tag;                  // stamped into each entity's origin
    bool overwrite = false;
};

struct CreateSummary {
    std::size_t entity_count = 0;
    std::size_t embedded_count = 0;
    std::size_t remote_count = 0;
    std::uint64_t bytes_written = 0;
    std::vector<std::string> warnings;
};

struct ExtractSummary {
    std::size_t written = 0;
    std::size_t fetched = 0;
    std::size_t skipped_remote = 0;
    std::vector<std::string> warnings;
};

inline constexpr std::string_view kRemoteManifestName = "PFS-REMOTE.txt";

namespace detail {

// fnmatch without FNM_PATHNAME: "*" crosses "/" freely, so patterns
// like "Images/*.gif" also catch files in nested subdirectories.
inline bool glob_match(const std::string& pattern, const std::string& text) {
    return ::fnmatch(pattern.c_str(), text.c_str(), 0) == 0;
}

inline std::optional<CivilDateTime> mtime_of(const std::filesystem::path& p) {
    struct ::stat st {};
    if (::stat(p.c_str(), &st) != 0) return std::nullopt;
    return civil_from_unix(static_cast<std::int64_t>(st.st_mtime));
}

inline void set_mtime(const std::filesystem::path& p, const CivilDateTime& when) {
    struct ::timespec times[2];
    times[0].tv_sec = 0;
    times[0].tv_nsec = UTIME_OMIT;
    times[1].tv_sec = static_cast<time_t>(civil_to_unix(when));
    times[1].tv_nsec = 0;
    ::utimensat(AT_FDCWD, p.c_str(), times, 0);  // best-effort
}

struct SourceFile {
    std::filesystem::path disk_path;
    std::string dir_name;
    std::string long_name;
    std::uint64_t size = 0;
};

// Depth-first walk following symlinks. Cycles are detected with a set
// of canonical directory paths along the current descent chain, so a
// directory reachable twice through distinct links is not an error,
// only a genuine loop is.
inline void walk_tree(const std::filesystem::path& dir, const std::string& rel_dir,
                      std::set<std::filesystem::path>& chain,
                      std::vector<SourceFile>& out) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::path canonical = fs::canonical(dir, ec);
    if (ec)
        throw ToolError(ToolError::Kind::unreadable_file,
                        "cannot resolve " + dir.string() + ": " + ec.message());
    if (!chain.insert(canonical).second)
        throw ToolError(ToolError::Kind::symlink_cycle,
                        "symlink cycle through " + dir.string());

    std::vector<fs::directory_entry> entries;
    for (fs::directory_iterator it(dir, ec); !ec && it != fs::directory_iterator();
         it.increment(ec))
        entries.push_back(*it);
    if (ec)
        throw ToolError(ToolError::Kind::unreadable_file,
                        "cannot read directory " + dir.string() + ": " + ec.message());
    std::sort(entries.begin(), entries.end(),
              [](const fs::directory_entry& a, const fs::directory_entry& b) {
                  return a.path().filename() < b.path().filename();
              });

    for (const fs::directory_entry& entry : entries) {
        const std::string name = entry.path().filename().string();
        std::error_code tec;
        fs::file_status st = fs::status(entry.path(), tec);  // follows symlinks
        if (tec) continue;                                   // dangling link etc.
        if (fs::is_directory(st)) {
            walk_tree(entry.path(), rel_dir.empty() ? name : rel_dir + "/" + name, chain,
                      out);
        } else if (fs::is_regular_file(st)) {
            SourceFile f;
            f.disk_path = entry.path();
            f.dir_name = rel_dir;
            f.long_name = name;
            f.size = fs::file_size(entry.path());
            out.push_back(std::move(f));
        }
    }

    chain.erase(canonical);
}

inline std::string remote_url_for(const RemoteRule& rule, const std::string& interior) {
    if (!rule.base_url.empty() && rule.base_url.back() == '/')
        return rule.base_url + interior;
    return rule.base_url + "/" + interior;
}

}  // namespace detail

inline CreateSummary cmd_create(const BuildOptions& options,
                                const std::filesystem::path& output) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(options.root))
        throw ToolError(ToolError::Kind::bad_argument,
                        options.root.string() + " is not a directory");
    if (fs::exists(output) && !options.overwrite)
        throw ToolError(ToolError::Kind::output_exists,
                        output.string() + " already exists (use overwrite)");
    for (const RemoteRule& rule : options.remote_rules)
        if (!looks_like_http_url(rule.base_url))
            throw ToolError(ToolError::Kind::bad_argument,
                            "remote rule URL is not absolute http/https: " + rule.base_url);

    std::vector<detail::SourceFile> files;
    std::set<fs::path> chain;
    detail::walk_tree(options.root, "", chain, files);
    std::sort(files.begin(), files.end(),
              [](const detail::SourceFile& a, const detail::SourceFile& b) {
                  return join_interior(a.dir_name, a.long_name) <
                         join_interior(b.dir_name, b.long_name);
              });

    Archive archive;
    archive.header.date =
        civil_from_unix(static_cast<std::int64_t>(::time(nullptr)), /*with_time=*/false);
    CreateSummary summary;
    std::vector<fs::path> sources;  // parallel to archive.entities

    for (const detail::SourceFile& f : files) {
        const std::string interior = join_interior(f.dir_name, f.long_name);
        if (!options.include_globs.empty()) {
            bool kept = false;
            for (const std::string& glob : options.include_globs)
                if (detail::glob_match(glob, interior)) {
                    kept = true;
                    break;
                }
            if (!kept) continue;
        }

        EntityRecord e;
        e.original_name = fs::absolute(f.disk_path).string();
        e.long_name = f.long_name;
        e.short_name = f.long_name;
        e.dir_name = f.dir_name;
        e.created = detail::mtime_of(f.disk_path);
        e.length = f.size;
        e.origin = options.origin_tag;
        e.mode = AccessMode::read_only;

        const RemoteRule* rule = nullptr;
        for (const RemoteRule& r : options.remote_rules)
            if (detail::glob_match(r.glob, interior)) {
                rule = &r;
                break;
            }
        if (rule) {
            e.storage = Storage::remote;
            e.remote_read_host = detail::remote_url_for(*rule, interior);
            ++summary.remote_count;
        } else {
            e.storage = Storage::embedded;
            e.encoding = options.default_encoding;
            ++summary.embedded_count;
        }
        archive.entities.push_back(std::move(e));
        sources.push_back(f.disk_path);
        ++summary.entity_count;
    }

    if (summary.entity_count == 0)
        summary.warnings.push_back("no files under " + options.root.string() +
                                   "; wrapper has a header only");

    std::string bytes = serialize_wrapper(archive, [&](const EntityRecord& e, std::size_t i) {
        try {
            return read_file_bytes(sources[i]);
        } catch (const std::exception& ex) {
            throw ToolError(ToolError::Kind::unreadable_file,
                            "cannot read " + e.interior_path() + ": " + ex.what());
        }
    });
    atomic_write_file(output, bytes);
    summary.bytes_written = bytes.size();
    return summary;
}

struct ListRow {
    std::string interior;
    Storage storage = Storage::embedded;
    std::uint64_t length = 0;
    std::optional<CivilDateTime> created;
    std::string remote_read_host;
};

inline std::vector<ListRow> cmd_list(const std::filesystem::path& wrapper) {
    std::string bytes = read_file_bytes(wrapper);
    Archive archive = parse_wrapper(bytes);
    std::vector<ListRow> rows;
    rows.reserve(archive.entities.size());
    for (const EntityRecord& e : archive.entities)
        rows.push_back({e.interior_path(), e.storage, e.length, e.created,
                        e.remote_read_host});
    return rows;
}

inline ExtractSummary cmd_extract(const std::filesystem::path& wrapper,
                                  const std::filesystem::path& dest, bool fetch_remote,
                                  bool overwrite = false,
                                  const FetchOptions& fetch_options = {}) {
    namespace fs = std::filesystem;
    std::string bytes = read_file_bytes(wrapper);
    Archive archive = parse_wrapper(bytes);
    fs::create_directories(dest);

    ExtractSummary summary;
    std::vector<std::pair<const EntityRecord*, fs::path>> remote_jobs;
    std::vector<std::pair<std::string, std::string>> manifest;  // interior, url

    for (const EntityRecord& e : archive.entities) {
        // Parsing already rejects dot segments in validated wrappers;
        // re-deriving the target from a normalized path keeps a
        // hand-crafted wrapper from escaping dest.
        std::string interior = normalize_interior_path(e.interior_path());
        fs::path target = dest / interior;

        if (e.storage == Storage::remote && !fetch_remote) {
            manifest.emplace_back(interior, e.remote_read_host);
            ++summary.skipped_remote;
            continue;
        }
        if (fs::exists(target) && !overwrite)
            throw ToolError(ToolError::Kind::destination_collision,
                            target.string() + " already exists (use overwrite)");
        fs::create_directories(target.parent_path());

        if (e.storage == Storage::remote) {
            remote_jobs.emplace_back(&e, target);
            continue;
        }

        std::string content = read_entity_content(bytes, e);
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ToolError(ToolError::Kind::unreadable_file,
                            "cannot create " + target.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out)
            throw ToolError(ToolError::Kind::unreadable_file,
                            "short write to " + target.string());
        if (e.created) detail::set_mtime(target, *e.created);
        ++summary.written;
    }

    if (!remote_jobs.empty()) {
        // Bounded fan-out; failures are warnings and land in the
        // manifest so the URL list is not lost.
        std::atomic<std::size_t> next{0};
        std::mutex mu;
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= remote_jobs.size()) return;
                const EntityRecord& e = *remote_jobs[i].first;
                const fs::path& target = remote_jobs[i].second;
                FetchOutcome outcome = fetch_url(e.remote_read_host, fetch_options);
                std::lock_guard<std::mutex> lock(mu);
                if (!outcome.ok() || outcome.response->status != 200) {
                    std::string reason = outcome.ok()
                                             ? "HTTP " + std::to_string(outcome.response->status)
                                             : outcome.error.detail;
                    summary.warnings.push_back("fetch failed for " + e.interior_path() +
                                               ": " + reason);
                    manifest.emplace_back(normalize_interior_path(e.interior_path()),
                                          e.remote_read_host);
                    ++summary.skipped_remote;
                    continue;
                }
                const std::string& body = outcome.response->body;
                if (body.size() != e.length)
                    summary.warnings.push_back(
                        "size mismatch for " + e.interior_path() + ": declared " +
                        std::to_string(e.length) + ", fetched " +
                        std::to_string(body.size()));
                std::ofstream out(target, std::ios::binary | std::ios::trunc);
                out.write(body.data(), static_cast<std::streamsize>(body.size()));
                out.close();
                if (!out) {
                    summary.warnings.push_back("cannot write " + target.string());
                    continue;
                }
                if (e.created) detail::set_mtime(target, *e.created);
                ++summary.fetched;
            }
        };
        std::size_t n = std::min<std::size_t>(4, remote_jobs.size());
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    if (!manifest.empty()) {
        std::ofstream out(dest / kRemoteManifestName, std::ios::binary | std::ios::trunc);
        for (const auto& [interior, url] : manifest) out << interior << '\t' << url << '\n';
        if (!out)
            throw ToolError(ToolError::Kind::unreadable_file,
                            "cannot write remote manifest");
    }
    return summary;
}

namespace detail {

// Rewrites a wrapper with one entity list change, preserving the
// content bytes of every untouched entity.
inline void rewrite_wrapper(const std::filesystem::path& wrapper, const std::string& bytes,
                            Archive archive,
                            const std::optional<std::string>& new_content) {
    std::string out = serialize_wrapper(
        archive, [&](const EntityRecord& e, std::size_t) -> std::string {
            if (e.payload_offset) return read_entity_content(bytes, e);
            if (new_content) return *new_content;
            throw SerializeError("no content source for " + e.interior_path());
        });
    atomic_write_file(wrapper, out);
}

}  // namespace detail

inline void cmd_add_embedded(const std::filesystem::path& wrapper,
                             const std::filesystem::path& from,
                             const std::string& interior,
                             Encoding encoding = Encoding::raw) {
    std::string bytes = read_file_bytes(wrapper);
    Archive archive = parse_wrapper(bytes);

    std::string normalized = normalize_interior_path(interior);
    if (normalized.empty())
        throw ToolError(ToolError::Kind::bad_argument, "empty interior path");
    if (lookup_linear(archive, normalized))
        throw ToolError(ToolError::Kind::duplicate_path,
                        normalized + " already exists in " + wrapper.string());

    std::string content;
    try {
        content = read_file_bytes(from);
    } catch (const std::exception& ex) {
        throw ToolError(ToolError::Kind::unreadable_file, ex.what());
    }

    auto [dir_name, long_name] = split_interior(normalized);
    EntityRecord e;
    e.original_name = std::filesystem::absolute(from).string();
    e.long_name = long_name;
    e.short_name = long_name;
    e.dir_name = dir_name;
    e.created = detail::mtime_of(from);
    e.length = content.size();
    e.storage = Storage::embedded;
    e.encoding = encoding;
    archive.entities.push_back(std::move(e));

    detail::rewrite_wrapper(wrapper, bytes, std::move(archive), content);
}

inline void cmd_add_remote(const std::filesystem::path& wrapper, const std::string& url,
                           const std::string& interior, std::uint64_t length) {
    std::string bytes = read_file_bytes(wrapper);
    Archive archive = parse_wrapper(bytes);

    std::string normalized = normalize_interior_path(interior);
    if (normalized.empty())
        throw ToolError(ToolError::Kind::bad_argument, "empty interior path");
    if (lookup_linear(archive, normalized))
        throw ToolError(ToolError::Kind::duplicate_path,
                        normalized + " already exists in " + wrapper.string());
    if (!looks_like_http_url(url))
        throw ToolError(ToolError::Kind::bad_argument,
                        "not an absolute http/https URL: " + url);

    auto [dir_name, long_name] = split_interior(normalized);
    EntityRecord e;
    e.long_name = long_name;
    e.short_name = long_name;
    e.dir_name = dir_name;
    e.length = length;
    e.storage = Storage::remote;
    e.remote_read_host = url;
    archive.entities.push_back(std::move(e));

    detail::rewrite_wrapper(wrapper, bytes, std::move(archive), std::nullopt);
}

inline void cmd_remove(const std::filesystem::path& wrapper, const std::string& interior) {
    std::string bytes = read_file_bytes(wrapper);
    Archive archive = parse_wrapper(bytes);

    std::string normalized = normalize_interior_path(interior);
    auto it = std::find_if(archive.entities.begin(), archive.entities.end(),
                           [&](const EntityRecord& e) {
                               return e.interior_path() == normalized;
                           });
    if (it == archive.entities.end())
        throw ToolError(ToolError::Kind::not_found,
                        normalized + " not present in " + wrapper.string());
    archive.entities.erase(it);

    detail::rewrite_wrapper(wrapper, bytes, std::move(archive), std::nullopt);
}

struct VerifyResult {
    bool ok = false;
    std::vector<std::string> lines;  // "severity: locator: message"
};

inline VerifyResult cmd_verify(const std::filesystem::path& wrapper) {
    VerifyResult result;
    std::string bytes;
    try {
        bytes = read_file_bytes(wrapper);
    } catch (const std::exception& ex) {
        result.lines.push_back(std::string("error: file: ") + ex.what());
        return result;
    }

    Archive archive;
    try {
        archive = parse_wrapper(bytes);
    } catch (const ParseError& e) {
        result.lines.push_back("error: parse: " + std::string(to_string(e.kind())) + ": " +
                               e.what());
        return result;
    }

    std::vector<ValidationIssue> issues = validate(archive);
    for (const ValidationIssue& issue : issues) {
        std::string severity =
            issue.severity == ValidationIssue::Severity::error ? "error" : "warning";
        result.lines.push_back(severity + ": " + issue.locator + ": " + issue.message);
    }
    result.ok = !has_errors(issues);
    return result;
}

struct AuditRecord {
    std::string interior;
    std::size_t line_no = 0;  // 1-based within the entity's content
    std::string url;
    bool same_host = false;
};

struct AuditReport {
    std::vector<AuditRecord> records;
};

namespace detail {

inline std::string lower_ascii(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    return s;
}

inline bool html_name(const std::string& long_name) {
    std::string lower = lower_ascii(long_name);
    auto ends_with = [&](std::string_view suffix) {
        return lower.size() > suffix.size() &&
               lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return ends_with(".html") || ends_with(".htm");
}

}  // namespace detail

// Attribute-pattern scan, deliberately not an HTML parser: href/src
// values that are absolute http(s) URLs, with the line they sit on.
inline AuditReport cmd_audit_links(const std::filesystem::path& wrapper,
                                   const std::string& site_host) {
    std::string bytes = read_file_bytes(wrapper);
    Archive archive = parse_wrapper(bytes);

    static const std::regex attr_re(
        R"re((?:href|src)\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s">]+)))re",
        std::regex::icase);
    const std::string site_lower = detail::lower_ascii(site_host);

    AuditReport report;
    for (const EntityRecord& e : archive.entities) {
        if (e.storage != Storage::embedded || !detail::html_name(e.long_name)) continue;
        std::string content = read_entity_content(bytes, e);

        auto begin = std::sregex_iterator(content.begin(), content.end(), attr_re);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            std::string value;
            for (int group : {1, 2, 3})
                if ((*it)[group].matched) value = (*it)[group].str();
            std::string lower = detail::lower_ascii(value);
            if (lower.substr(0, 7) != "http://" && lower.substr(0, 8) != "https://")
                continue;
            auto parts = parse_http_url(value);
            AuditRecord record;
            record.interior = e.interior_path();
            record.line_no = 1 + static_cast<std::size_t>(std::count(
                                     content.begin(),
                                     content.begin() + it->position(0), '\n'));
            record.url = value;
            record.same_host =
                parts && detail::lower_ascii(parts->host) == site_lower;
            report.records.push_back(std::move(record));
        }
    }
    return report;
}

}  // namespace pfs
