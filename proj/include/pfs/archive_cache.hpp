#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "pfs/format.hpp"
#include "pfs/io.hpp"
#include "pfs/lookup.hpp"

namespace pfs {

// Parsed-wrapper cache keyed by file path. An entry is pinned to the
// (size, mtime) it was parsed from and is dropped when the file on
// disk no longer matches, so edits made while serving take effect on
// the next request. Entries are handed out as shared_ptr<const>:
// eviction never invalidates an archive a request is still using.
class ArchiveCache {
public:
    struct Entry {
        Archive archive;
        PathIndex index;
    };

    explicit ArchiveCache(std::size_t capacity = 16) : capacity_(capacity ? capacity : 1) {}

    // Throws ParseError for malformed wrappers and runtime_error for
    // unreadable files; callers decide how to report.
    std::shared_ptr<const Entry> get(const std::filesystem::path& file) {
        namespace fs = std::filesystem;
        const std::string key = file.string();
        const std::uint64_t size = fs::file_size(file);
        const fs::file_time_type mtime = fs::last_write_time(file);

        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = slots_.find(key);
            if (it != slots_.end() && it->second.size == size &&
                it->second.mtime == mtime) {
                it->second.last_used = ++tick_;
                return it->second.entry;
            }
        }

        // Parse outside the lock; concurrent misses may both parse the
        // same file and the later insert wins, which is harmless.
        std::string bytes = read_file_bytes(file);
        auto entry = std::make_shared<Entry>();
        entry->archive = parse_wrapper(bytes);
        entry->index = PathIndex(entry->archive);
        parses_.fetch_add(1, std::memory_order_relaxed);

        std::lock_guard<std::mutex> lock(mutex_);
        Slot& slot = slots_[key];
        slot = Slot{size, mtime, entry, ++tick_};
        if (slots_.size() > capacity_) evict_oldest();
        return entry;
    }

    std::uint64_t parse_count() const {
        return parses_.load(std::memory_order_relaxed);
    }

    void purge() {
        std::lock_guard<std::mutex> lock(mutex_);
        slots_.clear();
    }

private:
    struct Slot {
        std::uint64_t size = 0;
        std::filesystem::file_time_type mtime;
        std::shared_ptr<const Entry> entry;
        std::uint64_t last_used = 0;
    };

    // Capacity is small; a linear scan beats list bookkeeping.
    void evict_oldest() {
        auto oldest = slots_.begin();
        for (auto it = slots_.begin(); it != slots_.end(); ++it)
            if (it->second.last_used < oldest->second.last_used) oldest = it;
        slots_.erase(oldest);
    }

    std::size_t capacity_;
    std::mutex mutex_;
    std::unordered_map<std::string, Slot> slots_;
    std::uint64_t tick_ = 0;
    std::atomic<std::uint64_t> parses_{0};
};

}  // namespace pfs
