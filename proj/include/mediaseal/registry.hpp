#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "mediaseal/fingerprint.hpp"
#include "mediaseal/manifest.hpp"

namespace mediaseal {

struct RegistryEntry {
    Digest content_hash{};
    SignedManifest signed_manifest;
    std::optional<uint64_t> watermark_id;
    std::vector<Fingerprint> fingerprints;
    std::optional<std::array<uint8_t, 64>> thumbnail; // 8x8 luma block
    int64_t stored_at = 0;

    bool operator==(const RegistryEntry&) const = default;

    void check() const; // content_hash must equal the manifest's content hash
};

std::string serialize_entry(const RegistryEntry& entry); // canonical JSON, one line
RegistryEntry parse_entry(const std::string& line);      // throws StoreError

enum class FaultMode { Normal, NoAccess, MissingManifest };

std::string to_string(FaultMode m);
FaultMode fault_mode_from_string(const std::string& s);

// Injectable outcome overrides, one per lookup subsystem. They change only the
// labels lookups report, never the stored data.
struct FaultInjection {
    FaultMode manifest_lookup = FaultMode::Normal;
    FaultMode watermark_lookup = FaultMode::Normal;
    FaultMode fingerprint_lookup = FaultMode::Normal;

    bool operator==(const FaultInjection&) const = default;
};

enum class LookupKind { Found, NotFound, NoAccess, Missing };

struct LookupOutcome {
    LookupKind kind = LookupKind::NotFound;
    std::optional<RegistryEntry> entry; // present iff Found
};

struct FingerprintCandidate {
    RegistryEntry entry;
    int distance = 0;
    bool needs_human_review = true; // every automated match requires review
};

struct FingerprintLookupOutcome {
    LookupKind kind = LookupKind::NotFound;
    std::vector<FingerprintCandidate> candidates; // sorted by distance, then stored_at
};

// Read-side interface shared by the in-process store and the HTTP client.
class RegistryHandle {
public:
    virtual ~RegistryHandle() = default;
    virtual LookupOutcome lookup_by_hash(const Digest& hash) = 0;
    virtual LookupOutcome lookup_by_watermark(uint64_t id) = 0;
    virtual FingerprintLookupOutcome lookup_by_fingerprint(const Fingerprint& fp, int tau) = 0;
};

// Append-only log of canonical-JSON entry records plus in-memory indexes
// rebuilt on open. A store is acknowledged only after its log line is fsynced;
// recovery tolerates a torn final line by truncating it away.
class Registry : public RegistryHandle {
public:
    explicit Registry(const std::filesystem::path& data_dir, bool store_thumbnails = true);
    ~Registry() override;

    Registry(const Registry&) = delete;
    Registry& operator=(const Registry&) = delete;

    void store_entry(RegistryEntry entry); // throws DuplicateWatermarkId, StoreError

    LookupOutcome lookup_by_hash(const Digest& hash) override;
    LookupOutcome lookup_by_watermark(uint64_t id) override;
    FingerprintLookupOutcome lookup_by_fingerprint(const Fingerprint& fp, int tau) override;

    void set_faults(const FaultInjection& faults);
    FaultInjection faults() const;

    size_t entry_count() const;

private:
    mutable std::mutex mu_;
    std::filesystem::path log_path_;
    bool store_thumbnails_;
    int log_fd_ = -1;
    std::map<std::string, RegistryEntry> by_hash_; // hex(content_hash) -> entry
    std::map<uint64_t, std::string> by_watermark_; // watermark id -> hex(content_hash)
    FaultInjection faults_;
};

} // namespace mediaseal
