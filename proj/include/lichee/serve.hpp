#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace lichee {

struct ServeConfig {
    std::filesystem::path bundle;
    /// Directory of viewer assets mounted at "/"; optional.
    std::filesystem::path assets;
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
};

/// Read-only local HTTP server: GET /bundle.json returns the bundle file
/// as written, everything else is a static asset. Without an assets
/// directory a minimal index page is served.
class BundleServer {
public:
    explicit BundleServer(ServeConfig cfg);
    ~BundleServer();
    BundleServer(const BundleServer&) = delete;
    BundleServer& operator=(const BundleServer&) = delete;

    /// Binds the socket; returns the bound port. Throws on failure.
    int bind();
    /// Serves until stop(); call after bind().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace lichee
