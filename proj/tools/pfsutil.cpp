// pfsutil: build, inspect, edit, and extract .pfs wrappers.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfs/format.hpp"
#include "pfs/tool.hpp"

namespace {

std::string format_created(const std::optional<pfs::CivilDateTime>& created) {
    if (!created) return "-";
    return pfs::format_wrapper_datetime(*created);
}

int run_create(const std::string& root, const std::string& out, const std::string& encoding,
               const std::vector<std::string>& remote_specs,
               const std::vector<std::string>& include_globs, bool overwrite) {
    pfs::BuildOptions options;
    options.root = root;
    options.include_globs = include_globs;
    options.overwrite = overwrite;
    options.default_encoding =
        encoding == "uuencode" ? pfs::Encoding::uuencode : pfs::Encoding::raw;
    for (const std::string& spec : remote_specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            std::cerr << "pfsutil: --remote expects GLOB=BASEURL, got '" << spec << "'\n";
            return 2;
        }
        options.remote_rules.push_back({spec.substr(0, eq), spec.substr(eq + 1)});
    }

    pfs::CreateSummary summary = pfs::cmd_create(options, out);
    for (const std::string& w : summary.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << out << ": " << summary.entity_count << " entities ("
              << summary.embedded_count << " embedded, " << summary.remote_count
              << " remote), " << summary.bytes_written << " bytes\n";
    return 0;
}

int run_list(const std::string& file) {
    for (const pfs::ListRow& row : pfs::cmd_list(file)) {
        std::cout << row.interior << '\t' << pfs::to_string(row.storage) << '\t'
                  << row.length << '\t' << format_created(row.created) << '\t'
                  << (row.remote_read_host.empty() ? "-" : row.remote_read_host) << '\n';
    }
    return 0;
}

int run_extract(const std::string& file, const std::string& dest, bool fetch_remote,
                bool overwrite) {
    pfs::ExtractSummary summary = pfs::cmd_extract(file, dest, fetch_remote, overwrite);
    for (const std::string& w : summary.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "extracted " << summary.written << " files, fetched " << summary.fetched
              << ", skipped " << summary.skipped_remote << " remote\n";
    return 0;
}

int run_verify(const std::string& file) {
    pfs::VerifyResult result = pfs::cmd_verify(file);
    for (const std::string& line : result.lines) std::cout << line << "\n";
    if (!result.ok) return 1;
    std::cout << "ok\n";
    return 0;
}

int run_audit(const std::string& file, const std::string& host) {
    pfs::AuditReport report = pfs::cmd_audit_links(file, host);
    for (const pfs::AuditRecord& r : report.records) {
        std::cout << r.interior << ':' << r.line_no << '\t' << r.url << '\t'
                  << (r.same_host ? "same-host" : "foreign-host") << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Portable file set wrapper utility"};
    app.require_subcommand(1);

    auto* create = app.add_subcommand("create", "Package a directory tree into a wrapper");
    std::string create_root, create_out, create_encoding = "raw";
    std::vector<std::string> create_remote, create_include;
    bool create_overwrite = false;
    create->add_option("--root", create_root, "Source directory")->required();
    create->add_option("--out", create_out, "Output wrapper file")->required();
    create->add_option("--encoding", create_encoding, "Payload encoding")
        ->check(CLI::IsMember({"raw", "uuencode"}));
    create->add_option("--remote", create_remote,
                       "GLOB=BASEURL; matching files become remote entries");
    create->add_option("--include", create_include, "Only include matching paths");
    create->add_flag("--overwrite", create_overwrite, "Replace an existing output file");

    auto* list = app.add_subcommand("list", "List wrapper entities");
    std::string list_file;
    list->add_option("file", list_file, "Wrapper file")->required();

    auto* extract = app.add_subcommand("extract", "Extract a wrapper to a directory");
    std::string extract_file, extract_dest;
    bool extract_fetch = false, extract_overwrite = false;
    extract->add_option("file", extract_file, "Wrapper file")->required();
    extract->add_option("--dest", extract_dest, "Destination directory")->required();
    extract->add_flag("--fetch-remote", extract_fetch, "Download remote entries");
    extract->add_flag("--overwrite", extract_overwrite, "Replace existing files");

    auto* add = app.add_subcommand("add", "Add an embedded entry");
    std::string add_file, add_from, add_as;
    add->add_option("file", add_file, "Wrapper file")->required();
    add->add_option("--from", add_from, "Source file")->required();
    add->add_option("--as", add_as, "Interior path")->required();

    auto* add_remote = app.add_subcommand("add-remote", "Add a remote-tagged entry");
    std::string ar_file, ar_url, ar_as;
    std::uint64_t ar_length = 0;
    add_remote->add_option("file", ar_file, "Wrapper file")->required();
    add_remote->add_option("--url", ar_url, "Absolute http/https URL")->required();
    add_remote->add_option("--as", ar_as, "Interior path")->required();
    add_remote->add_option("--length", ar_length, "Content length in bytes")->required();

    auto* remove = app.add_subcommand("remove", "Remove an entry");
    std::string rm_file, rm_interior;
    remove->add_option("file", rm_file, "Wrapper file")->required();
    remove->add_option("interior", rm_interior, "Interior path")->required();

    auto* verify = app.add_subcommand("verify", "Check wrapper invariants");
    std::string verify_file;
    verify->add_option("file", verify_file, "Wrapper file")->required();

    auto* audit = app.add_subcommand("audit-links", "Report absolute links in HTML entries");
    std::string audit_file, audit_host;
    audit->add_option("file", audit_file, "Wrapper file")->required();
    audit->add_option("--host", audit_host, "Host counted as same-host")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "pfsutil: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*create)
            return run_create(create_root, create_out, create_encoding, create_remote,
                              create_include, create_overwrite);
        if (*list) return run_list(list_file);
        if (*extract)
            return run_extract(extract_file, extract_dest, extract_fetch, extract_overwrite);
        if (*add) {
            pfs::cmd_add_embedded(add_file, add_from, add_as);
            std::cout << "added " << add_as << "\n";
            return 0;
        }
        if (*add_remote) {
            pfs::cmd_add_remote(ar_file, ar_url, ar_as, ar_length);
            std::cout << "added " << ar_as << " -> " << ar_url << "\n";
            return 0;
        }
        if (*remove) {
            pfs::cmd_remove(rm_file, rm_interior);
            std::cout << "removed " << rm_interior << "\n";
            return 0;
        }
        if (*verify) return run_verify(verify_file);
        if (*audit) return run_audit(audit_file, audit_host);
    } catch (const std::exception& e) {
        std::cerr << "pfsutil: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
