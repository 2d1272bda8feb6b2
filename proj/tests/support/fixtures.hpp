#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "pfs/io.hpp"
#include "support/temp_dir.hpp"

namespace pfs_test {

// Remote-tagged vendor record as it appears in the wild, comments and
// blank-valued dirname included.
inline const std::string kVendorSample =
    "PFS!\n"
    "version=1.0\n"
    "date=25-06-97\n"
    "[ENTITY]\n"
    "originalname=C:\\Program Files\\WINZIP\\Vendor.txt\n"
    "longname=Vendor.txt\n"
    "shortname=Vendor.txt\n"
    "dirname=                ;PFS directory (root)\n"
    "created=14-08-95 6:00:00 AM\n"
    "length=2952 ;physical file length\n"
    "origin=Windows95 ;created Win-PFSutil ver1.0\n"
    "description=This is the Vendors message file\n"
    "remotereadhost=http://astral.ct.monash.edu.au/~files/vendor.txt\n"
    "mode=RO ;read-only access\n"
    "storage=remote ;stored on remotehost\n";

// Small account site: a front page, two department pages, two images.
inline std::map<std::string, std::string> account_site_files() {
    return {
        {"index.html",
         "<html><head><title>Accounts</title></head><body>\n"
         "<img src=\"Images/logo.gif\">\n"
         "<a href=\"Dept1/dept1.html\">Dept1</a>\n"
         "<a href=\"Dept2/dept2.html\">Dept2</a>\n"
         "</body></html>\n"},
        {"Images/logo.gif", std::string("GIF89a") + std::string(64, '\x01')},
        {"Images/chart.gif", std::string("GIF89a") + std::string(96, '\x02')},
        {"Dept1/dept1.html", "<html><body>Department one</body></html>\n"},
        {"Dept2/dept2.html", "<html><body>Department two</body></html>\n"},
    };
}

inline void build_tree(const std::filesystem::path& root,
                       const std::map<std::string, std::string>& files) {
    std::filesystem::create_directories(root);
    for (const auto& [rel, bytes] : files) write_file(root / rel, bytes);
}

// Byte-level recursive comparison; returns a description of the first
// difference, empty when the trees match.
inline std::string compare_trees(const std::filesystem::path& a,
                                 const std::filesystem::path& b) {
    namespace fs = std::filesystem;
    std::map<std::string, fs::path> files_a, files_b;
    for (auto& entry : fs::recursive_directory_iterator(a))
        if (entry.is_regular_file())
            files_a[fs::relative(entry.path(), a).string()] = entry.path();
    for (auto& entry : fs::recursive_directory_iterator(b))
        if (entry.is_regular_file())
            files_b[fs::relative(entry.path(), b).string()] = entry.path();

    for (const auto& [rel, path] : files_a) {
        auto it = files_b.find(rel);
        if (it == files_b.end()) return rel + " missing from " + b.string();
        if (pfs::read_file_bytes(path) != pfs::read_file_bytes(it->second))
            return rel + " differs";
    }
    for (const auto& [rel, path] : files_b)
        if (!files_a.count(rel)) return rel + " missing from " + a.string();
    return "";
}

}  // namespace pfs_test
