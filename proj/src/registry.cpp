#include "mediaseal/registry.hpp"

#include <algorithm>
#include <fstream>

#include <fcntl.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "mediaseal/hex.hpp"

namespace mediaseal {

void RegistryEntry::check() const {
    if (content_hash != signed_manifest.manifest.content_hash)
        throw InvariantViolation("entry key must equal the manifest's content hash");
    if (stored_at <= 0) throw InvariantViolation("stored_at must be positive");
}

std::string serialize_entry(const RegistryEntry& entry) {
    entry.check();
    const auto manifest_bytes = serialize_signed_manifest(entry.signed_manifest);
    nlohmann::json fps = nlohmann::json::array();
    for (const auto& fp : entry.fingerprints) fps.push_back(fp.to_text());
    nlohmann::json j{
        {"content_hash", to_hex(entry.content_hash.data(), entry.content_hash.size())},
        {"fingerprints", std::move(fps)},
        {"signed_manifest",
         nlohmann::json::parse(manifest_bytes.begin(), manifest_bytes.end())},
        {"stored_at", entry.stored_at},
    };
    if (entry.watermark_id) j["watermark_id"] = *entry.watermark_id;
    if (entry.thumbnail)
        j["thumbnail"] = to_hex(entry.thumbnail->data(), entry.thumbnail->size());
    return j.dump();
}

RegistryEntry parse_entry(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_object()) throw StoreError("undecodable registry record");
    try {
        RegistryEntry e;
        auto hash = from_hex(j.at("content_hash").get<std::string>());
        if (!hash || hash->size() != 32) throw StoreError("bad content hash");
        std::copy(hash->begin(), hash->end(), e.content_hash.begin());
        const std::string manifest_text = j.at("signed_manifest").dump();
        e.signed_manifest = parse_signed_manifest(
            std::vector<uint8_t>(manifest_text.begin(), manifest_text.end()));
        for (const auto& t : j.at("fingerprints"))
            e.fingerprints.push_back(Fingerprint::from_text(t.get<std::string>()));
        if (j.contains("watermark_id")) e.watermark_id = j["watermark_id"].get<uint64_t>();
        if (j.contains("thumbnail")) {
            auto thumb = from_hex(j["thumbnail"].get<std::string>());
            if (!thumb || thumb->size() != 64) throw StoreError("bad thumbnail");
            std::array<uint8_t, 64> t;
            std::copy(thumb->begin(), thumb->end(), t.begin());
            e.thumbnail = t;
        }
        e.stored_at = j.at("stored_at").get<int64_t>();
        e.check();
        return e;
    } catch (const StoreError&) {
        throw;
    } catch (const std::exception& ex) {
        throw StoreError(std::string("undecodable registry record: ") + ex.what());
    }
}

std::string to_string(FaultMode m) {
    switch (m) {
    case FaultMode::Normal: return "normal";
    case FaultMode::NoAccess: return "no_access";
    case FaultMode::MissingManifest: return "missing_manifest";
    }
    return "normal";
}

FaultMode fault_mode_from_string(const std::string& s) {
    if (s == "normal") return FaultMode::Normal;
    if (s == "no_access") return FaultMode::NoAccess;
    if (s == "missing_manifest") return FaultMode::MissingManifest;
    throw Error("unknown fault mode: " + s);
}

Registry::Registry(const std::filesystem::path& data_dir, bool store_thumbnails)
    : store_thumbnails_(store_thumbnails) {
    std::error_code ec;
    std::filesystem::create_directories(data_dir, ec);
    log_path_ = data_dir / "entries.log";

    // Replay the log; keep everything up to the last complete, parseable line.
    size_t valid_bytes = 0;
    {
        std::ifstream in(log_path_, std::ios::binary);
        std::string line;
        while (in && std::getline(in, line)) {
            if (in.eof() && !line.empty()) break; // torn tail without newline
            if (line.empty()) break;
            RegistryEntry entry;
            try {
                entry = parse_entry(line);
            } catch (const StoreError&) {
                break;
            }
            const std::string key =
                to_hex(entry.content_hash.data(), entry.content_hash.size());
            auto old = by_hash_.find(key);
            if (old != by_hash_.end() && old->second.watermark_id)
                by_watermark_.erase(*old->second.watermark_id);
            if (entry.watermark_id) by_watermark_[*entry.watermark_id] = key;
            by_hash_[key] = std::move(entry);
            valid_bytes += line.size() + 1;
        }
    }

    log_fd_ = ::open(log_path_.c_str(), O_WRONLY | O_CREAT, 0644);
    if (log_fd_ < 0) throw StoreError("cannot open registry log: " + log_path_.string());
    if (::ftruncate(log_fd_, static_cast<off_t>(valid_bytes)) != 0 ||
        ::lseek(log_fd_, 0, SEEK_END) < 0)
        throw StoreError("cannot reset registry log tail");
}

Registry::~Registry() {
    if (log_fd_ >= 0) ::close(log_fd_);
}

void Registry::store_entry(RegistryEntry entry) {
    entry.check();
    if (!store_thumbnails_) entry.thumbnail.reset();
    std::lock_guard<std::mutex> lock(mu_);

    const std::string key = to_hex(entry.content_hash.data(), entry.content_hash.size());
    if (entry.watermark_id) {
        auto bound = by_watermark_.find(*entry.watermark_id);
        if (bound != by_watermark_.end() && bound->second != key)
            throw DuplicateWatermarkId("watermark id already bound to another entry");
    }

    const std::string line = serialize_entry(entry) + "\n";
    size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = ::write(log_fd_, line.data() + written, line.size() - written);
        if (n < 0) throw StoreError("registry log write failed");
        written += static_cast<size_t>(n);
    }
    if (::fsync(log_fd_) != 0) throw StoreError("registry log fsync failed");

    // Indexes update only after the record is durable; replay restores them.
    auto old = by_hash_.find(key);
    if (old != by_hash_.end() && old->second.watermark_id)
        by_watermark_.erase(*old->second.watermark_id);
    if (entry.watermark_id) by_watermark_[*entry.watermark_id] = key;
    by_hash_[key] = std::move(entry);
}

LookupOutcome Registry::lookup_by_hash(const Digest& hash) {
    std::lock_guard<std::mutex> lock(mu_);
    if (faults_.manifest_lookup == FaultMode::NoAccess) return {LookupKind::NoAccess, {}};
    auto it = by_hash_.find(to_hex(hash.data(), hash.size()));
    if (it == by_hash_.end()) return {LookupKind::NotFound, {}};
    if (faults_.manifest_lookup == FaultMode::MissingManifest)
        return {LookupKind::Missing, {}};
    return {LookupKind::Found, it->second};
}

LookupOutcome Registry::lookup_by_watermark(uint64_t id) {
    std::lock_guard<std::mutex> lock(mu_);
    if (faults_.watermark_lookup == FaultMode::NoAccess) return {LookupKind::NoAccess, {}};
    auto it = by_watermark_.find(id);
    if (it == by_watermark_.end()) return {LookupKind::NotFound, {}};
    if (faults_.watermark_lookup == FaultMode::MissingManifest)
        return {LookupKind::Missing, {}};
    return {LookupKind::Found, by_hash_.at(it->second)};
}

FingerprintLookupOutcome Registry::lookup_by_fingerprint(const Fingerprint& fp, int tau) {
    std::lock_guard<std::mutex> lock(mu_);
    if (faults_.fingerprint_lookup == FaultMode::NoAccess) return {LookupKind::NoAccess, {}};

    std::vector<FingerprintCandidate> candidates;
    for (const auto& [key, entry] : by_hash_) {
        int best = 65;
        for (const auto& stored : entry.fingerprints) {
            if (stored.algorithm != fp.algorithm) continue;
            best = std::min(best, hamming_distance(stored, fp));
        }
        if (best <= tau) candidates.push_back({entry, best, true});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const FingerprintCandidate& a, const FingerprintCandidate& b) {
                         if (a.distance != b.distance) return a.distance < b.distance;
                         return a.entry.stored_at < b.entry.stored_at;
                     });
    if (candidates.empty()) return {LookupKind::NotFound, {}};
    if (faults_.fingerprint_lookup == FaultMode::MissingManifest)
        return {LookupKind::Missing, std::move(candidates)};
    return {LookupKind::Found, std::move(candidates)};
}

void Registry::set_faults(const FaultInjection& faults) {
    std::lock_guard<std::mutex> lock(mu_);
    faults_ = faults;
}

FaultInjection Registry::faults() const {
    std::lock_guard<std::mutex> lock(mu_);
    return faults_;
}

size_t Registry::entry_count() const {
    std::lock_guard<std::mutex> lock(mu_);
    return by_hash_.size();
}

} // namespace mediaseal
