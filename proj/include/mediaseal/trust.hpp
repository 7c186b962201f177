#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mediaseal/errors.hpp"

namespace mediaseal {

enum class SecurityLevel { CloudHigh, DeviceSecure, DeviceLow };

std::string to_string(SecurityLevel level);
SecurityLevel security_level_from_string(const std::string& s);

struct CertificateRecord {
    std::string certificate_id;
    std::array<uint8_t, 32> public_key{};
    std::string owner_name;
    SecurityLevel security_level = SecurityLevel::CloudHigh;
    bool revoked = false;
    std::optional<int64_t> revoked_at;

    bool operator==(const CertificateRecord&) const = default;
};

enum class LookupStatus { Trusted, Revoked, Unknown };

struct LookupResult {
    LookupStatus status = LookupStatus::Unknown;
    std::optional<CertificateRecord> record;
};

// Immutable value; mutation returns a new list with a bumped version.
class TrustList {
public:
    TrustList() = default;

    uint64_t version() const { return version_; }
    const std::map<std::string, CertificateRecord>& records() const { return records_; }

    LookupResult lookup(const std::string& certificate_id) const;

    TrustList with_record(CertificateRecord record) const;
    TrustList revoke(const std::string& certificate_id, int64_t at) const;

    bool operator==(const TrustList&) const = default;

    static TrustList from_parts(std::map<std::string, CertificateRecord> records,
                                uint64_t version) {
        TrustList t;
        t.records_ = std::move(records);
        t.version_ = version;
        return t;
    }

private:
    std::map<std::string, CertificateRecord> records_;
    uint64_t version_ = 0;
};

std::vector<uint8_t> save_trust_list(const TrustList& trust);
TrustList load_trust_list(const std::vector<uint8_t>& bytes);

} // namespace mediaseal
