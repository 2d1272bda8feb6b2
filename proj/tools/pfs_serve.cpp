// pfs-serve: static file server that also resolves paths through .pfs
// wrappers and relays remote-tagged entries.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pfs/server.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Wrapper-aware static HTTP server"};

    std::string root, bind = "127.0.0.1", index = "index.html", log_level = "info";
    int port = 8080;
    double remote_timeout_s = 10.0;
    bool no_remote_relay = false;
    std::uint64_t max_remote_bytes = 32ull * 1024 * 1024;

    app.add_option("--root", root, "Document root")->required();
    app.add_option("--bind", bind, "Bind address");
    app.add_option("--port", port, "Port, 0 for an ephemeral one")
        ->check(CLI::Range(0, 65535));
    app.add_option("--index", index, "Index name served for wrapper roots");
    app.add_option("--remote-timeout", remote_timeout_s, "Remote fetch timeout, seconds")
        ->check(CLI::PositiveNumber);
    app.add_flag("--no-remote-relay", no_remote_relay, "Answer 502 for remote entries");
    app.add_option("--max-remote-bytes", max_remote_bytes, "Remote fetch size cap");
    app.add_option("--log-level", log_level, "quiet or info")
        ->check(CLI::IsMember({"quiet", "info"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "pfs-serve: " << e.what() << "\n";
        return 2;
    }

    if (!std::filesystem::is_directory(root)) {
        std::cerr << "pfs-serve: " << root << " is not a directory\n";
        return 1;
    }

    pfs::ServerConfig config;
    config.docroot = root;
    config.bind_address = bind;
    config.port = port;
    config.index_name = index;
    config.remote_relay = !no_remote_relay;
    config.remote_timeout =
        std::chrono::milliseconds(static_cast<long long>(remote_timeout_s * 1000.0));
    config.max_remote_bytes = max_remote_bytes;
    if (log_level == "info")
        config.log_sink = [](const std::string& line) { std::cout << line << std::endl; };
    config.error_sink = [](const std::string& line) { std::cerr << line << std::endl; };

    // Block shutdown signals before the listener thread spawns so the
    // mask is inherited and sigwait below is the only consumer.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    pfs::PfsServer server(config);
    if (!server.start()) {
        std::cerr << "pfs-serve: cannot bind " << bind << ":" << port << "\n";
        return 1;
    }
    std::cout << "pfs-serve listening on " << bind << ":" << server.port() << std::endl;

    int got = 0;
    sigwait(&signals, &got);
    server.stop();
    return 0;
}
