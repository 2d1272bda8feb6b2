#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace pfs {

class PathError : public std::runtime_error {
public:
    enum class Kind { traversal_rejected, illegal_byte, absolute_remainder };

    PathError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Normalizes the percent-decoded remainder that follows a wrapper
// segment into an interior path: "" for the wrapper root, otherwise
// "seg(/seg)*". One leading "/" is stripped; empty segments collapse;
// "." and ".." segments are rejected. Backslashes are ordinary name
// bytes, not separators.
inline std::string normalize_interior_path(std::string_view raw) {
    if (raw.find('\0') != std::string_view::npos)
        throw PathError(PathError::Kind::illegal_byte, "NUL byte in path");
    if (!raw.empty() && raw.front() == '/') raw.remove_prefix(1);
    if (!raw.empty() && raw.front() == '/')
        throw PathError(PathError::Kind::absolute_remainder,
                        "interior path denotes an absolute location");
    std::string out;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t sep = raw.find('/', pos);
        if (sep == std::string_view::npos) sep = raw.size();
        std::string_view seg = raw.substr(pos, sep - pos);
        if (seg == "." || seg == "..")
            throw PathError(PathError::Kind::traversal_rejected,
                            "dot segment in interior path");
        if (!seg.empty()) {
            if (!out.empty()) out.push_back('/');
            out.append(seg);
        }
        if (sep == raw.size()) break;
        pos = sep + 1;
    }
    return out;
}

// "dirname/longname" interior key; root entries are just "longname".
inline std::string join_interior(std::string_view dirname, std::string_view longname) {
    if (dirname.empty()) return std::string(longname);
    std::string out;
    out.reserve(dirname.size() + 1 + longname.size());
    out.append(dirname);
    out.push_back('/');
    out.append(longname);
    return out;
}

inline std::pair<std::string, std::string> split_interior(std::string_view interior) {
    auto slash = interior.rfind('/');
    if (slash == std::string_view::npos) return {std::string(), std::string(interior)};
    return {std::string(interior.substr(0, slash)), std::string(interior.substr(slash + 1))};
}

}  // namespace pfs
