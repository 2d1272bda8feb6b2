#pragma once

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pfs/format.hpp"

namespace pfs_test {

// Values that survive the canonical serialize/parse cycle: no ';' (so
// no comment ambiguity), no control bytes, no surrounding whitespace.
inline std::string random_safe_text(std::mt19937& rng, std::size_t min_len,
                                    std::size_t max_len, bool allow_space = true) {
    static const std::string kName = "abcdefghijklmnopqrstuvwxyz"
                                     "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-";
    std::string charset = kName;
    if (allow_space) charset += ' ';
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, charset.size() - 1);
    std::string out;
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) out.push_back(charset[pick(rng)]);
    while (!out.empty() && out.front() == ' ') out.erase(out.begin());
    while (!out.empty() && out.back() == ' ') out.pop_back();
    if (out.empty()) out = "x";
    return out;
}

inline std::string random_name(std::mt19937& rng) {
    return random_safe_text(rng, 1, 12, /*allow_space=*/false);
}

inline std::string random_bytes(std::mt19937& rng, std::size_t size) {
    std::uniform_int_distribution<int> byte(0, 255);
    std::string out(size, '\0');
    for (char& c : out) c = static_cast<char>(byte(rng));
    return out;
}

inline pfs::CivilDateTime random_date(std::mt19937& rng, bool with_time) {
    pfs::CivilDateTime t;
    // Mostly inside the two-digit pivot window, occasionally outside
    // to exercise the ISO fallback.
    if (std::uniform_int_distribution<int>(0, 9)(rng) == 0)
        t.year = std::uniform_int_distribution<int>(2070, 2199)(rng);
    else
        t.year = std::uniform_int_distribution<int>(1970, 2069)(rng);
    t.month = std::uniform_int_distribution<int>(1, 12)(rng);
    t.day = std::uniform_int_distribution<int>(1, 28)(rng);
    if (with_time) {
        t.hour = std::uniform_int_distribution<int>(0, 23)(rng);
        t.minute = std::uniform_int_distribution<int>(0, 59)(rng);
        t.second = std::uniform_int_distribution<int>(0, 59)(rng);
        t.has_time = true;
    }
    return t;
}

struct GeneratedArchive {
    pfs::Archive archive;
    std::vector<std::string> contents;  // parallel to entities; "" for remote
};

// Random but always-canonicalizable archive: unique paths, safe tag
// values, payloads over the full byte range, both encodings, mixed
// embedded/remote entities.
inline GeneratedArchive random_archive(std::mt19937& rng, std::size_t max_entities = 50,
                                       std::size_t max_payload = 65536) {
    GeneratedArchive gen;
    gen.archive.header.date = random_date(rng, /*with_time=*/false);

    std::uniform_int_distribution<int> coin(0, 1);
    if (coin(rng)) {
        std::size_t extras = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
        for (std::size_t i = 0; i < extras; ++i)
            gen.archive.header.extra_tags.emplace_back("x-" + random_name(rng),
                                                       random_safe_text(rng, 0, 20));
    }

    std::size_t count = std::uniform_int_distribution<std::size_t>(0, max_entities)(rng);
    std::set<std::pair<std::string, std::string>> used;
    while (gen.archive.entities.size() < count) {
        pfs::EntityRecord e;
        e.long_name = random_name(rng);
        std::size_t depth = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        for (std::size_t i = 0; i < depth; ++i) {
            if (!e.dir_name.empty()) e.dir_name += '/';
            e.dir_name += random_name(rng);
        }
        if (!used.insert({e.dir_name, e.long_name}).second) continue;

        if (coin(rng)) e.original_name = random_safe_text(rng, 1, 30);
        if (coin(rng)) e.short_name = random_name(rng);
        if (coin(rng)) e.created = random_date(rng, coin(rng) == 1);
        if (coin(rng)) e.origin = random_safe_text(rng, 1, 15, /*allow_space=*/false);
        if (coin(rng)) e.description = random_safe_text(rng, 1, 40);
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
            e.extra_tags.emplace_back("x-" + random_name(rng),
                                      random_safe_text(rng, 0, 20));

        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
            e.storage = pfs::Storage::remote;
            e.remote_read_host =
                "http://origin-" + std::to_string(gen.archive.entities.size()) +
                ".example/" + e.long_name;
            e.length = std::uniform_int_distribution<std::uint64_t>(0, 1 << 20)(rng);
            gen.contents.emplace_back();
        } else {
            e.storage = pfs::Storage::embedded;
            e.encoding = coin(rng) ? pfs::Encoding::uuencode : pfs::Encoding::raw;
            std::size_t size =
                std::uniform_int_distribution<std::size_t>(0, max_payload)(rng);
            gen.contents.push_back(random_bytes(rng, size));
            e.length = gen.contents.back().size();
        }
        gen.archive.entities.push_back(std::move(e));
    }
    return gen;
}

inline std::string serialize_generated(const GeneratedArchive& gen) {
    return pfs::serialize_wrapper(gen.archive,
                                  [&](const pfs::EntityRecord&, std::size_t i) {
                                      return gen.contents[i];
                                  });
}

}  // namespace pfs_test
