#pragma once

#include <cstddef>
#include <string_view>
#include <unordered_map>

#include "pfs/format.hpp"

namespace pfs {

// Reference semantics: first declaration wins, comparison is exact
// (case-sensitive, byte-for-byte) on "dirname/longname".
inline const EntityRecord* lookup_linear(const Archive& archive,
                                         std::string_view interior_path) {
    for (const EntityRecord& e : archive.entities)
        if (e.interior_path() == interior_path) return &e;
    return nullptr;
}

namespace detail {

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
        return std::hash<std::string_view>{}(s);
    }
};

}  // namespace detail

// Interior path to entity index. Built once per parsed archive; the
// map borrows nothing, so it stays valid as long as the Archive does.
class PathIndex {
public:
    PathIndex() = default;

    explicit PathIndex(const Archive& archive) {
        by_path_.reserve(archive.entities.size());
        for (std::size_t i = 0; i < archive.entities.size(); ++i)
            by_path_.emplace(archive.entities[i].interior_path(), i);
    }

    const EntityRecord* find(const Archive& archive, std::string_view interior_path) const {
        auto it = by_path_.find(interior_path);
        if (it == by_path_.end()) return nullptr;
        return &archive.entities[it->second];
    }

    std::size_t size() const { return by_path_.size(); }

private:
    std::unordered_map<std::string, std::size_t, detail::StringHash, std::equal_to<>>
        by_path_;
};

inline const EntityRecord* lookup_indexed(const Archive& archive, const PathIndex& index,
                                          std::string_view interior_path) {
    return index.find(archive, interior_path);
}

}  // namespace pfs
