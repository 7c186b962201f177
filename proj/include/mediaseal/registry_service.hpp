#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "mediaseal/registry.hpp"
#include "mediaseal/trust.hpp"
#include "mediaseal/watermark.hpp"

namespace mediaseal {

struct ServiceConfig {
    int port = 0; // 0 picks a free port
    std::filesystem::path data_dir;
    std::filesystem::path trust_list_path; // empty serves an empty list
    size_t rate_limit = 10;                // public /detect grants per window
    double rate_window = 60.0;             // seconds
    std::string auth_token;                // bearer token for internal endpoints
    WatermarkKey detector_key;             // key behind /detect
};

// HTTP front end over a Registry. Public surface: lookups, the trust list,
// and the rate-limited binary /detect. Internal surface (bearer token):
// stores, fault injection, and the confidence-leaking /internal/detect.
class RegistryService {
public:
    explicit RegistryService(ServiceConfig config);
    ~RegistryService();

    void start(); // binds and serves on a background thread
    void stop();
    int port() const { return port_; }
    Registry& registry() { return *registry_; }

private:
    struct Impl;
    ServiceConfig config_;
    std::unique_ptr<Registry> registry_;
    std::unique_ptr<Impl> impl_;
    std::thread thread_;
    int port_ = 0;
};

// RegistryHandle over HTTP; network failures surface as NoAccess, matching
// the validator-error modeling of lookups.
class HttpRegistryClient : public RegistryHandle {
public:
    HttpRegistryClient(std::string host, int port, std::string auth_token = "");
    ~HttpRegistryClient() override;

    LookupOutcome lookup_by_hash(const Digest& hash) override;
    LookupOutcome lookup_by_watermark(uint64_t id) override;
    FingerprintLookupOutcome lookup_by_fingerprint(const Fingerprint& fp, int tau) override;

    void store_entry(const RegistryEntry& entry); // needs the auth token
    void set_faults(const FaultInjection& faults);
    std::string detect(const std::vector<uint8_t>& asset_bytes); // public, binary
    TrustList fetch_trust_list();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace mediaseal
