#include "lichee/serve.hpp"

#include <stdexcept>

#include <httplib.h>

#include "lichee/bundle.hpp"
#include "lichee/io.hpp"

namespace lichee {

namespace {

constexpr const char* kIndexPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>lineage bundle</title></head>
<body>
<h1>Lineage bundle</h1>
<p>No viewer assets are installed. The bundle is available at <a href="bundle.json">bundle.json</a>.</p>
<pre id="out"></pre>
<script>
fetch('bundle.json').then(r => r.json()).then(b => {
  const lines = [`samples: ${b.samples.names.join(', ')}`,
                 `nodes: ${b.network.nodes.length}`,
                 `valid trees: ${b.search.trees_valid}`];
  for (const t of b.trees) lines.push(`tree ${t.rank}: score ${t.qp_objective ?? t.local_score}`);
  document.getElementById('out').textContent = lines.join('\n');
});
</script>
</body></html>
)";

}  // namespace

struct BundleServer::Impl {
    ServeConfig cfg;
    httplib::Server server;
    bool bound = false;
};

BundleServer::BundleServer(ServeConfig cfg) : impl_(std::make_unique<Impl>()) {
    impl_->cfg = std::move(cfg);
    // Refuse to start on something that is not a bundle.
    parse_bundle(read_file(impl_->cfg.bundle));

    auto& srv = impl_->server;
    const auto bundle_path = impl_->cfg.bundle;
    srv.Get("/bundle.json", [bundle_path](const httplib::Request&, httplib::Response& res) {
        try {
            res.set_content(read_file(bundle_path), "application/json");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(e.what(), "text/plain");
        }
    });
    const bool has_assets = !impl_->cfg.assets.empty() && std::filesystem::is_directory(impl_->cfg.assets);
    if (has_assets) {
        if (!srv.set_mount_point("/", impl_->cfg.assets.string()))
            throw std::runtime_error(impl_->cfg.assets.string() + ": cannot serve assets");
    }
    if (!has_assets || !std::filesystem::exists(impl_->cfg.assets / "index.html")) {
        srv.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kIndexPage, "text/html"); });
    }
    auto reject = [](const httplib::Request&, httplib::Response& res) {
        res.status = 405;
        res.set_content("read-only server", "text/plain");
    };
    srv.Post(".*", reject);
    srv.Put(".*", reject);
    srv.Delete(".*", reject);
}

BundleServer::~BundleServer() { stop(); }

int BundleServer::bind() {
    auto& cfg = impl_->cfg;
    int port = cfg.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(cfg.host);
        if (port < 0) throw std::runtime_error("cannot bind " + cfg.host);
    } else if (!impl_->server.bind_to_port(cfg.host, port)) {
        throw std::runtime_error("cannot bind " + cfg.host + ":" + std::to_string(port));
    }
    impl_->bound = true;
    return port;
}

void BundleServer::listen() {
    if (!impl_->bound) throw std::logic_error("BundleServer::listen before bind");
    impl_->server.listen_after_bind();
}

void BundleServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace lichee
