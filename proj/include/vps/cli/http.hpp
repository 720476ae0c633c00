#pragma once

#include <memory>
#include <optional>
#include <string>

#include "vps/cli/session.hpp"

namespace vps::cli {

/// HTTP front end over a Session: the /api endpoints plus an optional
/// static directory at "/".
class HttpService {
public:
    explicit HttpService(const Session& session, std::optional<std::string> uiDir = std::nullopt);
    ~HttpService();
    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    /// Binds without listening. Port 0 picks a free port. False if the
    /// address is taken.
    bool bind(const std::string& host, int port);
    int port() const { return port_; }

    /// Blocks until stop() is called from another thread.
    bool listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = -1;
};

}  // namespace vps::cli
