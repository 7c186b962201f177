#include "mediaseal/registry_service.hpp"

#include <chrono>
#include <fstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mediaseal/base64.hpp"
#include "mediaseal/hex.hpp"
#include "mediaseal/rate_limiter.hpp"

namespace mediaseal {

namespace {

std::string kind_string(LookupKind k) {
    switch (k) {
    case LookupKind::Found: return "found";
    case LookupKind::NotFound: return "not_found";
    case LookupKind::NoAccess: return "no_access";
    case LookupKind::Missing: return "missing";
    }
    return "not_found";
}

LookupKind kind_from_string(const std::string& s) {
    if (s == "found") return LookupKind::Found;
    if (s == "not_found") return LookupKind::NotFound;
    if (s == "no_access") return LookupKind::NoAccess;
    if (s == "missing") return LookupKind::Missing;
    throw Error("unknown lookup kind: " + s);
}

nlohmann::json outcome_json(const LookupOutcome& outcome) {
    nlohmann::json j{{"kind", kind_string(outcome.kind)}};
    if (outcome.entry) j["entry"] = nlohmann::json::parse(serialize_entry(*outcome.entry));
    return j;
}

double monotonic_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

} // namespace

struct RegistryService::Impl {
    httplib::Server server;
    RateLimiter limiter;

    Impl(size_t n, double window) : limiter(n, window) {}
};

RegistryService::RegistryService(ServiceConfig config)
    : config_(std::move(config)),
      registry_(std::make_unique<Registry>(config_.data_dir)),
      impl_(std::make_unique<Impl>(config_.rate_limit, config_.rate_window)) {
    auto& server = impl_->server;

    auto authed = [this](const httplib::Request& req, httplib::Response& res) {
        const std::string want = "Bearer " + config_.auth_token;
        if (config_.auth_token.empty() || req.get_header_value("Authorization") == want)
            return true;
        res.status = 401;
        res.set_content(R"({"error":"unauthorized"})", "application/json");
        return false;
    };

    server.Post("/entries", [this, authed](const httplib::Request& req,
                                           httplib::Response& res) {
        if (!authed(req, res)) return;
        try {
            registry_->store_entry(parse_entry(req.body));
            res.set_content(R"({"stored":true})", "application/json");
        } catch (const DuplicateWatermarkId& e) {
            res.status = 409;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
    });

    server.Get(R"(/entries/by-hash/([0-9a-f]{64}))",
               [this](const httplib::Request& req, httplib::Response& res) {
                   const auto bytes = from_hex(req.matches[1].str());
                   Digest hash;
                   std::copy(bytes->begin(), bytes->end(), hash.begin());
                   res.set_content(outcome_json(registry_->lookup_by_hash(hash)).dump(),
                                   "application/json");
               });

    server.Get(R"(/entries/by-watermark/(\d+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                   const uint64_t id = std::stoull(req.matches[1].str());
                   res.set_content(outcome_json(registry_->lookup_by_watermark(id)).dump(),
                                   "application/json");
               });

    server.Post("/entries/by-fingerprint", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
        try {
            const auto body = nlohmann::json::parse(req.body);
            const auto fp = Fingerprint::from_text(body.at("fingerprint").get<std::string>());
            const int tau = body.at("tau").get<int>();
            const auto outcome = registry_->lookup_by_fingerprint(fp, tau);
            nlohmann::json candidates = nlohmann::json::array();
            for (const auto& c : outcome.candidates)
                candidates.push_back(nlohmann::json{
                    {"distance", c.distance},
                    {"entry", nlohmann::json::parse(serialize_entry(c.entry))},
                    {"needs_human_review", c.needs_human_review},
                });
            res.set_content(nlohmann::json{{"candidates", std::move(candidates)},
                                           {"kind", kind_string(outcome.kind)}}
                                .dump(),
                            "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
    });

    server.Get("/trustlist", [this](const httplib::Request&, httplib::Response& res) {
        std::string text = R"({"records":[],"version":0})";
        if (!config_.trust_list_path.empty()) {
            std::ifstream in(config_.trust_list_path, std::ios::binary);
            if (in)
                text.assign(std::istreambuf_iterator<char>(in),
                            std::istreambuf_iterator<char>());
        }
        res.set_content(text, "application/json");
    });

    server.Post("/detect", [this](const httplib::Request& req, httplib::Response& res) {
        std::string client = req.get_header_value("X-Client-Id");
        if (client.empty()) client = req.remote_addr;
        if (!impl_->limiter.allow(client, monotonic_seconds())) {
            res.status = 429;
            res.set_content(R"({"error":"rate limited"})", "application/json");
            return;
        }
        try {
            const auto body = nlohmann::json::parse(req.body);
            const auto bytes = base64_decode(body.at("asset").get<std::string>());
            if (!bytes) throw Error("bad base64");
            const MediaAsset asset = parse_asset(*bytes);
            const auto detection = decode_watermark(asset.image(), config_.detector_key);
            // Binary answer only: no payload, no confidence.
            res.set_content(nlohmann::json{{"watermark",
                                            detection.status == DetectionStatus::Detected
                                                ? "detected"
                                                : "undetectable"}}
                                .dump(),
                            "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
    });

    server.Post("/internal/detect", [this, authed](const httplib::Request& req,
                                                   httplib::Response& res) {
        if (!authed(req, res)) return;
        try {
            const auto body = nlohmann::json::parse(req.body);
            const auto bytes = base64_decode(body.at("asset").get<std::string>());
            if (!bytes) throw Error("bad base64");
            const MediaAsset asset = parse_asset(*bytes);
            const auto detection = decode_watermark(asset.image(), config_.detector_key);
            nlohmann::json j{
                {"raw_bit_agreement", detection.raw_bit_agreement},
                {"status", detection.status == DetectionStatus::Detected ? "detected"
                                                                        : "undetectable"},
            };
            if (detection.payload) j["watermark_id"] = detection.payload->id;
            res.set_content(j.dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
    });

    server.Post("/faults", [this, authed](const httplib::Request& req,
                                          httplib::Response& res) {
        if (!authed(req, res)) return;
        try {
            const auto body = nlohmann::json::parse(req.body);
            FaultInjection faults;
            faults.manifest_lookup =
                fault_mode_from_string(body.at("manifest_lookup").get<std::string>());
            faults.watermark_lookup =
                fault_mode_from_string(body.at("watermark_lookup").get<std::string>());
            faults.fingerprint_lookup =
                fault_mode_from_string(body.at("fingerprint_lookup").get<std::string>());
            registry_->set_faults(faults);
            res.set_content(R"({"applied":true})", "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
    });
}

RegistryService::~RegistryService() { stop(); }

void RegistryService::start() {
    auto& server = impl_->server;
    if (config_.port == 0) {
        port_ = server.bind_to_any_port("127.0.0.1");
        if (port_ < 0) throw Error("cannot bind service port");
    } else {
        if (!server.bind_to_port("127.0.0.1", config_.port))
            throw Error("cannot bind service port " + std::to_string(config_.port));
        port_ = config_.port;
    }
    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    server.wait_until_ready();
}

void RegistryService::stop() {
    if (thread_.joinable()) {
        impl_->server.stop();
        thread_.join();
    }
}

struct HttpRegistryClient::Impl {
    httplib::Client client;
    std::string auth_token;

    Impl(const std::string& host, int port) : client(host, port) {
        client.set_connection_timeout(5);
        client.set_read_timeout(10);
    }

    httplib::Headers auth_headers() const {
        if (auth_token.empty()) return {};
        return {{"Authorization", "Bearer " + auth_token}};
    }
};

HttpRegistryClient::HttpRegistryClient(std::string host, int port, std::string auth_token)
    : impl_(std::make_unique<Impl>(host, port)) {
    impl_->auth_token = std::move(auth_token);
}

HttpRegistryClient::~HttpRegistryClient() = default;

namespace {

LookupOutcome parse_outcome(const httplib::Result& res) {
    if (!res || res->status != 200) return {LookupKind::NoAccess, {}};
    try {
        const auto j = nlohmann::json::parse(res->body);
        LookupOutcome outcome;
        outcome.kind = kind_from_string(j.at("kind").get<std::string>());
        if (j.contains("entry")) outcome.entry = parse_entry(j["entry"].dump());
        return outcome;
    } catch (const std::exception&) {
        return {LookupKind::NoAccess, {}};
    }
}

} // namespace

LookupOutcome HttpRegistryClient::lookup_by_hash(const Digest& hash) {
    return parse_outcome(
        impl_->client.Get("/entries/by-hash/" + to_hex(hash.data(), hash.size())));
}

LookupOutcome HttpRegistryClient::lookup_by_watermark(uint64_t id) {
    return parse_outcome(impl_->client.Get("/entries/by-watermark/" + std::to_string(id)));
}

FingerprintLookupOutcome HttpRegistryClient::lookup_by_fingerprint(const Fingerprint& fp,
                                                                   int tau) {
    const std::string body =
        nlohmann::json{{"fingerprint", fp.to_text()}, {"tau", tau}}.dump();
    auto res = impl_->client.Post("/entries/by-fingerprint", body, "application/json");
    if (!res || res->status != 200) return {LookupKind::NoAccess, {}};
    try {
        const auto j = nlohmann::json::parse(res->body);
        FingerprintLookupOutcome outcome;
        outcome.kind = kind_from_string(j.at("kind").get<std::string>());
        for (const auto& c : j.at("candidates"))
            outcome.candidates.push_back({parse_entry(c.at("entry").dump()),
                                          c.at("distance").get<int>(),
                                          c.at("needs_human_review").get<bool>()});
        return outcome;
    } catch (const std::exception&) {
        return {LookupKind::NoAccess, {}};
    }
}

void HttpRegistryClient::store_entry(const RegistryEntry& entry) {
    auto res = impl_->client.Post("/entries", impl_->auth_headers(), serialize_entry(entry),
                                  "application/json");
    if (!res) throw StoreError("registry unreachable");
    if (res->status == 409) throw DuplicateWatermarkId("watermark id already bound");
    if (res->status != 200) throw StoreError("registry rejected entry: " + res->body);
}

void HttpRegistryClient::set_faults(const FaultInjection& faults) {
    const std::string body = nlohmann::json{
        {"fingerprint_lookup", to_string(faults.fingerprint_lookup)},
        {"manifest_lookup", to_string(faults.manifest_lookup)},
        {"watermark_lookup", to_string(faults.watermark_lookup)},
    }.dump();
    auto res = impl_->client.Post("/faults", impl_->auth_headers(), body, "application/json");
    if (!res || res->status != 200) throw StoreError("fault injection failed");
}

std::string HttpRegistryClient::detect(const std::vector<uint8_t>& asset_bytes) {
    const std::string body = nlohmann::json{{"asset", base64_encode(asset_bytes)}}.dump();
    auto res = impl_->client.Post("/detect", body, "application/json");
    if (!res) throw Error("registry unreachable");
    if (res->status == 429) throw Error("rate limited");
    if (res->status != 200) throw Error("detect failed: " + res->body);
    return nlohmann::json::parse(res->body).at("watermark").get<std::string>();
}

TrustList HttpRegistryClient::fetch_trust_list() {
    auto res = impl_->client.Get("/trustlist");
    if (!res || res->status != 200) throw Error("trust list unavailable");
    return load_trust_list(std::vector<uint8_t>(res->body.begin(), res->body.end()));
}

} // namespace mediaseal
