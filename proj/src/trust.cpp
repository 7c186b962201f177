#include "mediaseal/trust.hpp"

#include <nlohmann/json.hpp>

#include "mediaseal/hex.hpp"

namespace mediaseal {

std::string to_string(SecurityLevel level) {
    switch (level) {
    case SecurityLevel::CloudHigh: return "cloud_high";
    case SecurityLevel::DeviceSecure: return "device_secure";
    case SecurityLevel::DeviceLow: return "device_low";
    }
    return "cloud_high";
}

SecurityLevel security_level_from_string(const std::string& s) {
    if (s == "cloud_high") return SecurityLevel::CloudHigh;
    if (s == "device_secure") return SecurityLevel::DeviceSecure;
    if (s == "device_low") return SecurityLevel::DeviceLow;
    throw Error("unknown security level: " + s);
}

LookupResult TrustList::lookup(const std::string& certificate_id) const {
    auto it = records_.find(certificate_id);
    if (it == records_.end()) return {LookupStatus::Unknown, std::nullopt};
    return {it->second.revoked ? LookupStatus::Revoked : LookupStatus::Trusted, it->second};
}

TrustList TrustList::with_record(CertificateRecord record) const {
    if (record.revoked && !record.revoked_at)
        throw InvariantViolation("revoked record requires revoked_at");
    TrustList next = *this;
    next.records_[record.certificate_id] = std::move(record);
    next.version_ = version_ + 1;
    return next;
}

TrustList TrustList::revoke(const std::string& certificate_id, int64_t at) const {
    auto it = records_.find(certificate_id);
    if (it == records_.end())
        throw UnknownCertificate("cannot revoke unknown certificate: " + certificate_id);
    TrustList next = *this;
    auto& rec = next.records_[certificate_id];
    if (!rec.revoked) {
        rec.revoked = true;
        rec.revoked_at = at;
    }
    next.version_ = version_ + 1;
    return next;
}

std::vector<uint8_t> save_trust_list(const TrustList& trust) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& [id, rec] : trust.records()) { // map order == sorted by id
        nlohmann::json r{
            {"certificate_id", rec.certificate_id},
            {"owner_name", rec.owner_name},
            {"public_key", to_hex(rec.public_key.data(), rec.public_key.size())},
            {"revoked", rec.revoked},
            {"security_level", to_string(rec.security_level)},
        };
        if (rec.revoked_at) r["revoked_at"] = *rec.revoked_at;
        records.push_back(std::move(r));
    }
    const std::string text =
        nlohmann::json{{"records", std::move(records)}, {"version", trust.version()}}.dump();
    return std::vector<uint8_t>(text.begin(), text.end());
}

TrustList load_trust_list(const std::vector<uint8_t>& bytes) {
    nlohmann::json j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (!j.is_object() || !j.contains("records") || !j["records"].is_array() ||
        !j.contains("version") || !j["version"].is_number_unsigned())
        throw MalformedTrustList("trust list must be {records, version}");

    std::map<std::string, CertificateRecord> records;
    for (const auto& r : j["records"]) {
        try {
            CertificateRecord rec;
            rec.certificate_id = r.at("certificate_id").get<std::string>();
            rec.owner_name = r.at("owner_name").get<std::string>();
            auto key = from_hex(r.at("public_key").get<std::string>());
            if (!key || key->size() != 32) throw MalformedTrustList("bad public key");
            std::copy(key->begin(), key->end(), rec.public_key.begin());
            rec.revoked = r.at("revoked").get<bool>();
            rec.security_level = security_level_from_string(r.at("security_level").get<std::string>());
            if (r.contains("revoked_at")) rec.revoked_at = r["revoked_at"].get<int64_t>();
            if (rec.revoked && !rec.revoked_at)
                throw MalformedTrustList("revoked record missing revoked_at");
            if (!records.emplace(rec.certificate_id, std::move(rec)).second)
                throw MalformedTrustList("duplicate certificate id");
        } catch (const nlohmann::json::exception& e) {
            throw MalformedTrustList(std::string("bad certificate record: ") + e.what());
        }
    }

    return TrustList::from_parts(std::move(records), j["version"].get<uint64_t>());
}

} // namespace mediaseal
