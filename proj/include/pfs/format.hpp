#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pfs/codec.hpp"
#include "pfs/datetime.hpp"
#include "pfs/path.hpp"
#include "pfs/url.hpp"

namespace pfs {

/* PFS wrapper, a hybrid ASCII-binary single-file archive:

     wrapper     = magic header-tags entity*
     magic       = "PFS!" LF
     header-tags = tagline*              until the first "[ENTITY]" or EOF
     entity      = "[ENTITY]" LF tagline* [ "[DATA]" LF payload LF ]
     tagline     = key "=" value [ WSP ";" comment ] LF
     payload     = exactly `storedlength` opaque bytes

   Required header keys: version, date. Required entity keys: longname,
   dirname (value may be empty), length, storage, mode; remote entities
   additionally need remotereadhost, embedded ones storedlength plus a
   [DATA] block. `encoding` defaults to raw when absent.

   Unrecognized keys are preserved verbatim, in order, so newer writers
   can attach tags without breaking older readers. A ";" starts a
   comment only when preceded by a space or tab, which keeps ";" usable
   inside URL values. Values are trimmed of surrounding whitespace;
   CR/LF/NUL are not representable in tag text. Parsing accepts CRLF
   line endings; serialization always emits LF. */

inline constexpr std::string_view kMagicLine = "PFS!";
inline constexpr std::string_view kFormatVersion = "1.0";

enum class Storage { embedded, remote };
enum class AccessMode { read_only };

inline std::string_view to_string(Storage s) {
    return s == Storage::embedded ? "embedded" : "remote";
}
inline std::string_view to_string(Encoding e) {
    return e == Encoding::raw ? "raw" : "uuencode";
}
inline std::string_view to_string(AccessMode) { return "RO"; }

using TagList = std::vector<std::pair<std::string, std::string>>;

struct WrapperHeader {
    std::string version = std::string(kFormatVersion);
    CivilDateTime date;
    TagList extra_tags;  // unrecognized keys, source order
};

struct EntityRecord {
    std::string original_name;            // informational source path
    std::string long_name;                // lookup name, case-sensitive
    std::string short_name;               // informational
    std::string dir_name;                 // ""=root, "/"-separated, relative
    std::optional<CivilDateTime> created;
    std::uint64_t length = 0;             // decoded content bytes
    std::optional<std::uint64_t> stored_length;   // encoded region bytes (embedded)
    std::string origin;
    std::string description;
    std::string remote_read_host;         // absolute URL (remote)
    AccessMode mode = AccessMode::read_only;
    Storage storage = Storage::embedded;
    Encoding encoding = Encoding::raw;    // embedded only
    std::optional<std::uint64_t> payload_offset;  // set while parsing
    TagList extra_tags;

    std::string interior_path() const { return join_interior(dir_name, long_name); }
};

// Immutable after parse; safe for unlimited concurrent readers.
struct Archive {
    WrapperHeader header;
    std::vector<EntityRecord> entities;
    std::uint64_t source_size = 0;
};

// Structural equality over declared metadata. Byte-position fields
// (stored_length, payload_offset, source_size) are derived from the
// serialized form and excluded; content equality is checked separately
// through read_entity_content.
inline bool same_structure(const WrapperHeader& a, const WrapperHeader& b) {
    return a.version == b.version && a.date == b.date && a.extra_tags == b.extra_tags;
}

inline bool same_structure(const EntityRecord& a, const EntityRecord& b) {
    return a.original_name == b.original_name && a.long_name == b.long_name &&
           a.short_name == b.short_name && a.dir_name == b.dir_name &&
           a.created == b.created && a.length == b.length && a.origin == b.origin &&
           a.description == b.description && a.remote_read_host == b.remote_read_host &&
           a.mode == b.mode && a.storage == b.storage && a.encoding == b.encoding &&
           a.extra_tags == b.extra_tags;
}

inline bool same_structure(const Archive& a, const Archive& b) {
    if (!same_structure(a.header, b.header) || a.entities.size() != b.entities.size())
        return false;
    for (std::size_t i = 0; i < a.entities.size(); ++i)
        if (!same_structure(a.entities[i], b.entities[i])) return false;
    return true;
}

enum class ParseErrorKind {
    missing_magic,
    malformed_tag_line,
    duplicate_path,
    payload_overrun,
    missing_required_key,
    bad_enum_value,
};

inline std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::missing_magic: return "MissingMagic";
        case ParseErrorKind::malformed_tag_line: return "MalformedTagLine";
        case ParseErrorKind::duplicate_path: return "DuplicatePath";
        case ParseErrorKind::payload_overrun: return "PayloadOverrun";
        case ParseErrorKind::missing_required_key: return "MissingRequiredKey";
        case ParseErrorKind::bad_enum_value: return "BadEnumValue";
    }
    return "ParseError";
}

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          kind_(kind),
          line_(line) {}

    ParseErrorKind kind() const { return kind_; }
    std::size_t line() const { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

class SerializeError : public std::runtime_error {
public:
    explicit SerializeError(const std::string& what) : std::runtime_error(what) {}
};

class RemoteEntityError : public std::logic_error {
public:
    RemoteEntityError()
        : std::logic_error("entity content is stored on a remote host") {}
};

// Supplies the decoded content of embedded entities during serialization.
using PayloadSource = std::function<std::string(const EntityRecord&, std::size_t ordinal)>;

namespace detail {

inline std::string_view trim_wsp(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// A ";" preceded by at least one space or tab begins a comment.
inline std::string_view strip_comment(std::string_view v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] == ';' && (v[i - 1] == ' ' || v[i - 1] == '\t')) return v.substr(0, i);
    return v;
}

inline bool valid_tag_key(std::string_view key) {
    if (key.empty() || key.front() == '[') return false;
    for (char c : key) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u <= 0x20 || c == '=' || c == ';' || u == 0x7F) return false;
    }
    return true;
}

struct LineCursor {
    std::string_view data;
    std::size_t pos = 0;
    std::size_t line_no = 0;

    bool eof() const { return pos >= data.size(); }

    // Next LF-terminated line; trailing CR stripped. Throws on a final
    // unterminated line: the grammar requires LF after every tag line.
    std::optional<std::string_view> next_line() {
        if (eof()) return std::nullopt;
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string_view::npos)
            throw ParseError(ParseErrorKind::malformed_tag_line, line_no + 1,
                             "unterminated line at end of wrapper");
        std::string_view line = data.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        ++line_no;
        return line;
    }
};

inline std::pair<std::string, std::string> parse_tag_line(std::string_view line,
                                                          std::size_t line_no) {
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
        throw ParseError(ParseErrorKind::malformed_tag_line, line_no,
                         "expected key=value");
    std::string_view key = trim_wsp(line.substr(0, eq));
    if (!valid_tag_key(key))
        throw ParseError(ParseErrorKind::malformed_tag_line, line_no, "invalid tag key");
    std::string_view value = trim_wsp(strip_comment(line.substr(eq + 1)));
    return {std::string(key), std::string(value)};
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view key,
                               std::size_t line_no) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(ParseErrorKind::malformed_tag_line, line_no,
                         "bad numeric value for '" + std::string(key) + "'");
    return v;
}

inline const std::set<std::string_view>& entity_keys() {
    static const std::set<std::string_view> keys = {
        "originalname", "longname", "shortname",      "dirname", "created",
        "length",       "storedlength", "origin",     "description",
        "remotereadhost", "mode",   "storage",        "encoding"};
    return keys;
}

}  // namespace detail

inline Archive parse_wrapper(std::string_view bytes) {
    detail::LineCursor cur{bytes};

    auto magic = cur.next_line();
    if (!magic || *magic != kMagicLine)
        throw ParseError(ParseErrorKind::missing_magic, 1, "first line is not \"PFS!\"");

    Archive archive;
    archive.source_size = bytes.size();

    // Header tags until [ENTITY] or EOF.
    bool at_entity = false;
    bool have_version = false, have_date = false;
    while (!cur.eof()) {
        auto line = cur.next_line();
        if (*line == "[ENTITY]") {
            at_entity = true;
            break;
        }
        if (*line == "[DATA]")
            throw ParseError(ParseErrorKind::malformed_tag_line, cur.line_no,
                             "[DATA] outside an entity");
        auto [key, value] = detail::parse_tag_line(*line, cur.line_no);
        if (key == "version") {
            if (have_version)
                throw ParseError(ParseErrorKind::malformed_tag_line, cur.line_no,
                                 "duplicate header key 'version'");
            if (value.empty())
                throw ParseError(ParseErrorKind::malformed_tag_line, cur.line_no,
                                 "empty version");
            archive.header.version = value;
            have_version = true;
        } else if (key == "date") {
            if (have_date)
                throw ParseError(ParseErrorKind::malformed_tag_line, cur.line_no,
                                 "duplicate header key 'date'");
            auto date = parse_wrapper_date(value);
            if (!date)
                throw ParseError(ParseErrorKind::malformed_tag_line, cur.line_no,
                                 "bad date value '" + value + "'");
            archive.header.date = *date;
            have_date = true;
        } else {
            archive.header.extra_tags.emplace_back(std::move(key), std::move(value));
        }
    }
    if (!have_version)
        throw ParseError(ParseErrorKind::missing_required_key, cur.line_no,
                         "header is missing 'version'");
    if (!have_date)
        throw ParseError(ParseErrorKind::missing_required_key, cur.line_no,
                         "header is missing 'date'");

    // Owning strings: entities reallocate as the vector grows.
    std::set<std::pair<std::string, std::string>> seen_paths;

    while (at_entity) {
        EntityRecord e;
        std::set<std::string> seen_keys;
        bool saw_data = false;
        bool entity_done = false;   // consumed the next [ENTITY] line
        at_entity = false;

        auto require_new_key = [&](const std::string& key) {
            if (!seen_keys.insert(key).second)
                throw ParseError(ParseErrorKind::malformed_tag_line, cur.line_no,
                                 "duplicate key '" + key + "'");
        };

        while (!cur.eof() && !entity_done) {
            auto line = cur.next_line();
            if (*line == "[ENTITY]") {
                entity_done = true;
                at_entity = true;
                break;
            }
            if (*line == "[DATA]") {
                if (!seen_keys.count("storedlength"))
                    throw ParseError(ParseErrorKind::missing_required_key, cur.line_no,
                                     "[DATA] without 'storedlength'");
                std::uint64_t stored = *e.stored_length;
                if (stored > bytes.size() - cur.pos)
                    throw ParseError(ParseErrorKind::payload_overrun, cur.line_no,
                                     "storedlength exceeds remaining bytes");
                e.payload_offset = cur.pos;
                cur.pos += stored;
                // one LF (or CRLF) terminates the payload block
                if (cur.pos < bytes.size() && bytes[cur.pos] == '\r') ++cur.pos;
                if (cur.pos >= bytes.size() || bytes[cur.pos] != '\n')
                    throw ParseError(ParseErrorKind::payload_overrun, cur.line_no,
                                     "payload block is not LF-terminated");
                ++cur.pos;
                saw_data = true;
                if (!cur.eof()) {
                    auto after = cur.next_line();
                    if (*after != "[ENTITY]")
                        throw ParseError(ParseErrorKind::malformed_tag_line, cur.line_no,
                                         "expected [ENTITY] or end of file after payload");
                    at_entity = true;
                }
                entity_done = true;
                break;
            }

            auto [key, value] = detail::parse_tag_line(*line, cur.line_no);
            if (!detail::entity_keys().count(key)) {
                e.extra_tags.emplace_back(std::move(key), std::move(value));
                continue;
            }
            require_new_key(key);
            if (key == "originalname") e.original_name = value;
            else if (key == "longname") e.long_name = value;
            else if (key == "shortname") e.short_name = value;
            else if (key == "dirname") e.dir_name = value;
            else if (key == "origin") e.origin = value;
            else if (key == "description") e.description = value;
            else if (key == "remotereadhost") e.remote_read_host = value;
            else if (key == "length") e.length = detail::parse_u64(value, key, cur.line_no);
            else if (key == "storedlength")
                e.stored_length = detail::parse_u64(value, key, cur.line_no);
            else if (key == "created") {
                auto t = parse_wrapper_datetime(value);
                if (!t)
                    throw ParseError(ParseErrorKind::malformed_tag_line, cur.line_no,
                                     "bad created value '" + value + "'");
                e.created = *t;
            } else if (key == "mode") {
                if (value != "RO")
                    throw ParseError(ParseErrorKind::bad_enum_value, cur.line_no,
                                     "unknown mode '" + value + "'");
                e.mode = AccessMode::read_only;
            } else if (key == "storage") {
                if (value == "embedded") e.storage = Storage::embedded;
                else if (value == "remote") e.storage = Storage::remote;
                else
                    throw ParseError(ParseErrorKind::bad_enum_value, cur.line_no,
                                     "unknown storage '" + value + "'");
            } else if (key == "encoding") {
                if (value == "raw") e.encoding = Encoding::raw;
                else if (value == "uuencode") e.encoding = Encoding::uuencode;
                else
                    throw ParseError(ParseErrorKind::bad_enum_value, cur.line_no,
                                     "unknown encoding '" + value + "'");
            }
        }

        for (std::string_view required : {"longname", "dirname", "length", "storage", "mode"})
            if (!seen_keys.count(std::string(required)))
                throw ParseError(ParseErrorKind::missing_required_key, cur.line_no,
                                 "entity is missing '" + std::string(required) + "'");
        if (e.storage == Storage::remote) {
            if (!seen_keys.count("remotereadhost"))
                throw ParseError(ParseErrorKind::missing_required_key, cur.line_no,
                                 "remote entity is missing 'remotereadhost'");
            if (saw_data)
                throw ParseError(ParseErrorKind::malformed_tag_line, cur.line_no,
                                 "[DATA] block on a remote entity");
        } else {
            if (!saw_data)
                throw ParseError(ParseErrorKind::missing_required_key, cur.line_no,
                                 "embedded entity has no [DATA] block");
        }

        archive.entities.push_back(std::move(e));
        const EntityRecord& stored = archive.entities.back();
        if (!seen_paths.insert({stored.dir_name, stored.long_name}).second)
            throw ParseError(ParseErrorKind::duplicate_path, cur.line_no,
                             "duplicate entity path '" + stored.interior_path() + "'");
    }

    return archive;
}

namespace detail {

inline void check_tag_text(std::string_view key, std::string_view value) {
    for (char c : value)
        if (c == '\n' || c == '\r' || c == '\0')
            throw std::invalid_argument("tag '" + std::string(key) +
                                        "' contains CR, LF, or NUL");
}

inline void emit_tag(std::string& out, std::string_view key, std::string_view value) {
    check_tag_text(key, value);
    out.append(key);
    out.push_back('=');
    out.append(value);
    out.push_back('\n');
}

}  // namespace detail

// Canonical form: fixed key order, LF endings, no comments, absent
// optional keys omitted. storedlength is recomputed from the encoded
// payload the source yields.
inline std::string serialize_wrapper(const Archive& archive, const PayloadSource& payloads) {
    std::string out;
    out.append(kMagicLine);
    out.push_back('\n');
    detail::emit_tag(out, "version", archive.header.version);
    detail::emit_tag(out, "date", format_wrapper_date(archive.header.date));
    for (const auto& [k, v] : archive.header.extra_tags) detail::emit_tag(out, k, v);

    for (std::size_t i = 0; i < archive.entities.size(); ++i) {
        const EntityRecord& e = archive.entities[i];
        const bool embedded = e.storage == Storage::embedded;
        std::string encoded;
        if (embedded) {
            std::string payload = payloads(e, i);
            if (payload.size() != e.length)
                throw SerializeError("payload source yielded " +
                                     std::to_string(payload.size()) + " bytes for '" +
                                     e.interior_path() + "', expected " +
                                     std::to_string(e.length));
            encoded = encode_content(payload, e.encoding);
        }

        out.append("[ENTITY]\n");
        if (!e.original_name.empty()) detail::emit_tag(out, "originalname", e.original_name);
        detail::emit_tag(out, "longname", e.long_name);
        if (!e.short_name.empty()) detail::emit_tag(out, "shortname", e.short_name);
        detail::emit_tag(out, "dirname", e.dir_name);
        if (e.created) detail::emit_tag(out, "created", format_wrapper_datetime(*e.created));
        detail::emit_tag(out, "length", std::to_string(e.length));
        if (embedded) detail::emit_tag(out, "storedlength", std::to_string(encoded.size()));
        if (!e.origin.empty()) detail::emit_tag(out, "origin", e.origin);
        if (!e.description.empty()) detail::emit_tag(out, "description", e.description);
        if (e.storage == Storage::remote)
            detail::emit_tag(out, "remotereadhost", e.remote_read_host);
        detail::emit_tag(out, "mode", to_string(e.mode));
        detail::emit_tag(out, "storage", to_string(e.storage));
        if (embedded) detail::emit_tag(out, "encoding", to_string(e.encoding));
        for (const auto& [k, v] : e.extra_tags) detail::emit_tag(out, k, v);
        if (embedded) {
            out.append("[DATA]\n");
            out.append(encoded);
            out.push_back('\n');
        }
    }
    return out;
}

// Decoded content of an embedded entity, from the whole wrapper image.
inline std::string read_entity_content(std::string_view wrapper_bytes,
                                       const EntityRecord& entity) {
    if (entity.storage == Storage::remote) throw RemoteEntityError();
    if (!entity.payload_offset || !entity.stored_length)
        throw std::logic_error("entity has no payload location");
    if (*entity.payload_offset + *entity.stored_length > wrapper_bytes.size())
        throw CodecError(CodecError::Kind::decode_error, "payload region out of bounds");
    std::string_view region =
        wrapper_bytes.substr(*entity.payload_offset, *entity.stored_length);
    return decode_content(region, entity.encoding, entity.length);
}

inline std::string read_entity_content(const std::string& wrapper_bytes,
                                       const EntityRecord& entity) {
    return read_entity_content(std::string_view(wrapper_bytes), entity);
}

// Same, but with a positional read against the wrapper file. No shared
// cursor: each call opens its own stream, so concurrent readers are fine.
inline std::string read_entity_content(const std::filesystem::path& wrapper_file,
                                       const EntityRecord& entity) {
    if (entity.storage == Storage::remote) throw RemoteEntityError();
    if (!entity.payload_offset || !entity.stored_length)
        throw std::logic_error("entity has no payload location");
    std::ifstream in(wrapper_file, std::ios::binary);
    if (!in)
        throw CodecError(CodecError::Kind::decode_error,
                         "cannot open wrapper file " + wrapper_file.string());
    in.seekg(static_cast<std::streamoff>(*entity.payload_offset));
    std::string region(static_cast<std::size_t>(*entity.stored_length), '\0');
    in.read(region.data(), static_cast<std::streamsize>(region.size()));
    if (static_cast<std::uint64_t>(in.gcount()) != *entity.stored_length)
        throw CodecError(CodecError::Kind::decode_error, "payload region out of bounds");
    return decode_content(region, entity.encoding, entity.length);
}

struct ValidationIssue {
    enum class Severity { error, warning };
    Severity severity;
    std::string locator;  // "header" or "entity N"
    std::string message;
};

namespace detail {

// Values must survive a serialize/parse cycle: no CR/LF/NUL, no
// surrounding whitespace (parse trims it), and no WSP+";" sequence
// (parse would treat the rest as a comment).
inline std::optional<std::string> tag_value_problem(std::string_view v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        char c = v[i];
        if (c == '\n' || c == '\r' || c == '\0') return "contains CR, LF, or NUL";
        if (c == ';' && i > 0 && (v[i - 1] == ' ' || v[i - 1] == '\t'))
            return "contains a comment-start sequence (whitespace then ';')";
    }
    if (!v.empty() && (v.front() == ' ' || v.front() == '\t' || v.back() == ' ' ||
                       v.back() == '\t'))
        return "has surrounding whitespace";
    return std::nullopt;
}

inline bool dotted_decimal(std::string_view v) {
    if (v.empty()) return false;
    bool digit_seen = false;
    bool prev_dot = true;
    for (char c : v) {
        if (c == '.') {
            if (prev_dot) return false;
            prev_dot = true;
        } else if (c >= '0' && c <= '9') {
            digit_seen = true;
            prev_dot = false;
        } else {
            return false;
        }
    }
    return digit_seen && !prev_dot;
}

}  // namespace detail

// Full invariant audit. Parse already rejects grammar-level problems;
// this re-checks everything so hand-assembled archives get the same
// scrutiny. Unknown tags are warnings only.
inline std::vector<ValidationIssue> validate(const Archive& archive) {
    std::vector<ValidationIssue> issues;
    auto error = [&](std::string locator, std::string message) {
        issues.push_back({ValidationIssue::Severity::error, std::move(locator),
                          std::move(message)});
    };
    auto warning = [&](std::string locator, std::string message) {
        issues.push_back({ValidationIssue::Severity::warning, std::move(locator),
                          std::move(message)});
    };

    if (!detail::dotted_decimal(archive.header.version))
        error("header", "version '" + archive.header.version + "' is not dotted decimal");
    for (const auto& [k, v] : archive.header.extra_tags) {
        if (!detail::valid_tag_key(k))
            error("header", "invalid tag key '" + k + "'");
        else if (k == "version" || k == "date")
            error("header", "extra tag shadows required key '" + k + "'");
        else
            warning("header", "unknown header tag '" + k + "'");
        if (auto problem = detail::tag_value_problem(v))
            error("header", "value of '" + k + "' " + *problem);
    }

    std::set<std::pair<std::string_view, std::string_view>> paths;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> regions;  // (offset, end)

    for (std::size_t i = 0; i < archive.entities.size(); ++i) {
        const EntityRecord& e = archive.entities[i];
        std::string loc = "entity " + std::to_string(i);

        if (e.long_name.empty())
            error(loc, "longname is empty");
        else if (e.long_name.find('/') != std::string::npos ||
                 e.long_name.find('\0') != std::string::npos)
            error(loc, "longname contains '/' or NUL");

        if (e.dir_name.find('\0') != std::string::npos)
            error(loc, "dirname contains NUL");
        else if (!e.dir_name.empty() &&
                 (e.dir_name.front() == '/' || e.dir_name.back() == '/'))
            error(loc, "dirname has a leading or trailing '/'");
        else if (!e.dir_name.empty()) {
            std::string_view rest = e.dir_name;
            while (!rest.empty()) {
                auto slash = rest.find('/');
                std::string_view seg = rest.substr(0, slash);
                if (seg == "..")
                    error(loc, "dirname contains a '..' segment");
                else if (seg == "." || seg.empty())
                    warning(loc, "dirname contains an unreachable '" + std::string(seg) +
                                     "' segment");
                if (slash == std::string_view::npos) break;
                rest.remove_prefix(slash + 1);
            }
        }

        if (!paths.insert({e.dir_name, e.long_name}).second)
            error(loc, "duplicate path '" + e.interior_path() + "'");

        if (e.storage == Storage::remote) {
            if (e.remote_read_host.empty())
                error(loc, "remote entity has no remotereadhost");
            else if (!looks_like_http_url(e.remote_read_host))
                error(loc, "remotereadhost '" + e.remote_read_host +
                               "' is not an absolute http/https URL");
            if (e.payload_offset)
                error(loc, "remote entity carries an embedded payload");
            if (e.stored_length)
                warning(loc, "remote entity carries a storedlength tag");
        } else {
            if (!e.stored_length)
                error(loc, "embedded entity has no storedlength");
            if (!e.payload_offset)
                error(loc, "embedded entity has no payload location");
            if (e.encoding == Encoding::raw && e.stored_length &&
                *e.stored_length != e.length)
                error(loc, "raw entity storedlength differs from length");
            if (e.payload_offset && e.stored_length) {
                std::uint64_t off = *e.payload_offset;
                std::uint64_t end = off + *e.stored_length;
                if (archive.source_size && end > archive.source_size)
                    error(loc, "payload region extends past end of wrapper");
                regions.emplace_back(off, end);
            }
        }

        for (const std::string& field : {e.original_name, e.short_name, e.origin,
                                         e.description, e.remote_read_host})
            if (auto problem = detail::tag_value_problem(field))
                error(loc, "tag value " + *problem);
        if (auto problem = detail::tag_value_problem(e.long_name))
            error(loc, "longname " + *problem);
        if (auto problem = detail::tag_value_problem(e.dir_name))
            error(loc, "dirname " + *problem);

        for (const auto& [k, v] : e.extra_tags) {
            if (!detail::valid_tag_key(k))
                error(loc, "invalid tag key '" + k + "'");
            else if (detail::entity_keys().count(k))
                error(loc, "extra tag shadows required key '" + k + "'");
            else
                warning(loc, "unknown entity tag '" + k + "'");
            if (auto problem = detail::tag_value_problem(v))
                error(loc, "value of '" + k + "' " + *problem);
        }
    }

    std::sort(regions.begin(), regions.end());
    for (std::size_t i = 1; i < regions.size(); ++i)
        if (regions[i].first < regions[i - 1].second)
            error("entity", "payload regions overlap");

    return issues;
}

inline bool has_errors(const std::vector<ValidationIssue>& issues) {
    return std::any_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
        return i.severity == ValidationIssue::Severity::error;
    });
}

}  // namespace pfs
