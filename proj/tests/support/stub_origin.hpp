#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>

namespace pfs_test {

// Scriptable loopback origin for relay and fetch tests.
class StubOrigin {
public:
    StubOrigin() {
        server_.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
            hits.fetch_add(1);
            Behavior behavior;
            {
                std::lock_guard<std::mutex> lock(mutex_);
                auto it = routes_.find(req.path);
                if (it == routes_.end()) {
                    res.status = 404;
                    res.set_content("stub: no route", "text/plain");
                    return;
                }
                behavior = it->second;
            }
            if (behavior.delay.count() > 0) std::this_thread::sleep_for(behavior.delay);
            if (!behavior.location.empty()) {
                res.status = behavior.status;
                res.set_header("Location", behavior.location);
                return;
            }
            res.status = behavior.status;
            if (behavior.status == 200)
                res.set_content(behavior.body, behavior.content_type);
            else
                res.set_content("stub: scripted status", "text/plain");
        });
    }

    ~StubOrigin() { stop(); }

    void start() {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    void stop() {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

    int port() const { return port_; }

    std::string url(const std::string& path) const {
        return "http://127.0.0.1:" + std::to_string(port_) + path;
    }

    void serve_bytes(const std::string& path, std::string body,
                     std::string content_type = "application/octet-stream") {
        std::lock_guard<std::mutex> lock(mutex_);
        routes_[path] = {200, std::move(body), std::move(content_type), {}, {}};
    }

    void serve_status(const std::string& path, int status) {
        std::lock_guard<std::mutex> lock(mutex_);
        routes_[path] = {status, {}, {}, {}, {}};
    }

    void serve_stall(const std::string& path, std::chrono::milliseconds delay,
                     std::string body = "late") {
        std::lock_guard<std::mutex> lock(mutex_);
        routes_[path] = {200, std::move(body), "text/plain", delay, {}};
    }

    void serve_redirect(const std::string& path, const std::string& location,
                        int status = 302) {
        std::lock_guard<std::mutex> lock(mutex_);
        routes_[path] = {status, {}, {}, {}, location};
    }

    std::atomic<int> hits{0};

private:
    struct Behavior {
        int status = 200;
        std::string body;
        std::string content_type;
        std::chrono::milliseconds delay{0};
        std::string location;
    };

    httplib::Server server_;
    std::thread thread_;
    int port_ = -1;
    std::mutex mutex_;
    std::map<std::string, Behavior> routes_;
};

}  // namespace pfs_test
