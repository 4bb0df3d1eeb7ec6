#pragma once

// Eigen first: httplib pulls in <resolv.h>, whose _res macro collides with Eigen parameter names.
#include "itac/api.hpp"

#include <httplib.h>

namespace itac::api {

inline constexpr const char* kEndpoints[] = {"/models", "/predict",     "/fps",       "/optimize",
                                             "/window", "/feasibility", "/guidelines"};

/// Route every endpoint (GET and POST) through handle(); unknown paths get a JSON 404.
/// The project must outlive the server.
inline void mount(httplib::Server& server, const io::Project& project) {
    auto route = [&project](const httplib::Request& req, httplib::Response& res) {
        const auto r = handle(project, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    for (const char* path : kEndpoints) {
        server.Get(path, route);
        server.Post(path, route);
    }
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        res.set_content(dump(error_json(Error(ErrorCode::NotFound, "no endpoint '" + req.path + "'", "path"))),
                        "application/json");
    });
}

}  // namespace itac::api
