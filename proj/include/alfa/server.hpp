#pragma once

#include "alfa/pipeline.hpp"

#include <httplib.h>
#include <json.hpp>

#include <optional>
#include <string>

namespace alfa {

inline std::optional<std::string> base64_decode(const std::string& in) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::string out;
    out.reserve(in.size() * 3 / 4);
    int buffer = 0, bits = 0;
    for (char c : in) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        const int v = value_of(c);
        if (v < 0) return std::nullopt;
        buffer = buffer << 6 | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((buffer >> bits) & 0xFF));
        }
    }
    return out;
}

// POST /classify {image_b64: <PGM/PPM bytes>} -> ClassifyResponse JSON.
// GET /health -> {model_schema, status}. Requests share one immutable model.
inline void configure_server(httplib::Server& server, const ForestModel& model) {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        nlohmann::json j{{"status", "ok"}, {"model_schema", kModelSchema}};
        res.set_content(j.dump(), "application/json");
    });

    server.Post("/classify", [&model](const httplib::Request& req, httplib::Response& res) {
        auto bad_request = [&res](const std::string& msg) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", msg}}.dump(), "application/json");
        };

        nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("image_b64") ||
            !body.at("image_b64").is_string()) {
            return bad_request("body must be a JSON object with an image_b64 string");
        }
        auto bytes = base64_decode(body.at("image_b64").get<std::string>());
        if (!bytes) return bad_request("image_b64 is not valid base64");

        GrayImage img;
        try {
            img = load_image_from_memory(*bytes);
        } catch (const std::exception& e) {
            return bad_request(std::string("cannot parse image: ") + e.what());
        }

        const ClassifyResponse resp = classify_image(img, model);
        if (!resp.ok()) {
            res.status = 422;
            res.set_content(to_json(resp).dump(), "application/json");
            return;
        }
        res.set_content(to_json(resp).dump(), "application/json");
    });
}

} // namespace alfa
