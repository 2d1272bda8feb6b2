#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>

namespace pfs {

inline std::string read_file_bytes(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string bytes;
    in.seekg(0, std::ios::end);
    auto size = in.tellg();
    if (size < 0) throw std::runtime_error("cannot size " + file.string());
    bytes.resize(static_cast<std::size_t>(size));
    in.seekg(0);
    in.read(bytes.data(), size);
    if (!in) throw std::runtime_error("short read from " + file.string());
    return bytes;
}

namespace detail {

// Test seam: fires between writing the temporary file and renaming it
// over the target, simulating a crash mid-update.
inline std::function<void()>& atomic_write_fail_hook() {
    static std::function<void()> hook;
    return hook;
}

}  // namespace detail

// Replace `target` all-or-nothing: write a sibling temp file, flush,
// then rename. Readers see either the old bytes or the new bytes.
inline void atomic_write_file(const std::filesystem::path& target,
                              const std::string& bytes) {
    namespace fs = std::filesystem;
    fs::path temp = target;
    temp += ".tmp." + std::to_string(static_cast<unsigned long>(::getpid()));
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot create " + temp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            fs::remove(temp);
            throw std::runtime_error("short write to " + temp.string());
        }
    }
    if (detail::atomic_write_fail_hook()) {
        fs::remove(temp);
        detail::atomic_write_fail_hook()();
        throw std::runtime_error("update aborted before replacing " + target.string());
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        fs::remove(temp);
        throw std::runtime_error("cannot replace " + target.string() + ": " +
                                 ec.message());
    }
}

}  // namespace pfs
