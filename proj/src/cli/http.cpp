#include "vps/cli/http.hpp"

#include <httplib.h>

namespace vps::cli {

namespace {

constexpr const char* kIndex =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>vps</title></head><body>\n"
    "<h1>vps</h1>\n<p>No UI bundle is being served. API endpoints:</p>\n<ul>\n"
    "<li><a href=\"/api/program\">GET /api/program</a></li>\n"
    "<li><a href=\"/api/trace\">GET /api/trace</a></li>\n"
    "<li><a href=\"/api/diagram?step=last&amp;format=svg\">GET /api/diagram?step=K&amp;format=svg|json|dot</a></li>\n"
    "<li>POST /api/grade {\"step\": K, \"answer\": \"...\"}</li>\n</ul>\n</body></html>\n";

void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.contentType);
}

}  // namespace

struct HttpService::Impl {
    httplib::Server server;
};

HttpService::HttpService(const Session& session, std::optional<std::string> uiDir) : impl_(std::make_unique<Impl>()) {
    auto& svr = impl_->server;
    // httplib's default adds SO_REUSEPORT, which would let a second server
    // share a busy port instead of failing.
    svr.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    svr.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    svr.Get("/api/trace", [&session](const httplib::Request&, httplib::Response& res) { send(res, session.get_trace()); });
    svr.Get("/api/program",
            [&session](const httplib::Request&, httplib::Response& res) { send(res, session.get_program()); });
    svr.Get("/api/diagram", [&session](const httplib::Request& req, httplib::Response& res) {
        send(res, session.get_diagram(req.get_param_value("step"), req.get_param_value("format")));
    });
    svr.Post("/api/grade",
             [&session](const httplib::Request& req, httplib::Response& res) { send(res, session.post_grade(req.body)); });
    svr.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    svr.Get(R"(/api/.*)", [](const httplib::Request& req, httplib::Response& res) {
        res.status = 404;
        res.set_content("{\"error\":\"unknown endpoint " + req.path + "\"}\n", "application/json");
    });
    bool mounted = uiDir && svr.set_mount_point("/", *uiDir);
    if (!mounted) {
        svr.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kIndex, "text/html"); });
    }
}

HttpService::~HttpService() = default;

bool HttpService::bind(const std::string& host, int port) {
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port(host);
        return port_ > 0;
    }
    if (!impl_->server.bind_to_port(host, port)) return false;
    port_ = port;
    return true;
}

bool HttpService::listen() { return impl_->server.listen_after_bind(); }

void HttpService::stop() { impl_->server.stop(); }

}  // namespace vps::cli
