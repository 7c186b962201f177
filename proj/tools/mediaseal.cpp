#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mediaseal/attacks.hpp"
#include "mediaseal/base64.hpp"
#include "mediaseal/hex.hpp"
#include "mediaseal/oracle_attack.hpp"
#include "mediaseal/registry_service.hpp"
#include "mediaseal/scenarios.hpp"
#include "mediaseal/transform.hpp"
#include "mediaseal/validation.hpp"

namespace {

using namespace mediaseal;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path);
}

MediaAsset load_asset(const std::string& path) { return parse_asset(read_file(path)); }

void save_asset(const std::string& path, const MediaAsset& asset) {
    write_file(path, serialize_asset(asset));
}

TrustList load_trust_file(const std::string& path) {
    if (path.empty()) return {};
    return load_trust_list(read_file(path));
}

// Shared flag bundle resolving either a key file or a deterministic seed.
struct WmKeyOpts {
    std::string key_path;
    uint64_t seed = 0;
    bool seed_set = false;
    std::string mode = "robust";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--wm-key", key_path, "watermark key file (17 bytes)");
        cmd->add_option("--wm-seed", seed, "derive the watermark key from a seed")
            ->each([this](const std::string&) { seed_set = true; });
        cmd->add_option("--wm-mode", mode, "robust|fragile")
            ->check(CLI::IsMember({"robust", "fragile"}));
    }
    bool present() const { return !key_path.empty() || seed_set; }
    WatermarkKey resolve() const {
        if (!key_path.empty()) return WatermarkKey::from_bytes(read_file(key_path));
        return WatermarkKey::generate(
            mode == "fragile" ? WatermarkMode::Fragile : WatermarkMode::Robust, seed);
    }
};

struct RegistryOpts {
    std::string url;
    std::string data_dir;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--registry", url, "registry service URL (http://host:port)");
        cmd->add_option("--data-dir", data_dir, "local registry data directory");
    }
    bool present() const { return !url.empty() || !data_dir.empty(); }
};

std::pair<std::string, int> parse_url(const std::string& url) {
    std::string rest = url;
    const std::string prefix = "http://";
    if (rest.rfind(prefix, 0) == 0) rest = rest.substr(prefix.size());
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--registry needs host:port");
    return {rest.substr(0, colon), std::stoi(rest.substr(colon + 1))};
}

std::string auth_token_from_env() {
    const char* token = std::getenv("MEDIASEAL_AUTH_TOKEN");
    return token ? token : "";
}

// Owns whichever backend the flags selected.
struct RegistryAccess {
    std::unique_ptr<Registry> local;
    std::unique_ptr<HttpRegistryClient> remote;

    RegistryHandle* handle() {
        if (local) return local.get();
        if (remote) return remote.get();
        return nullptr;
    }
    static RegistryAccess open(const RegistryOpts& opts) {
        RegistryAccess access;
        if (!opts.url.empty()) {
            const auto [host, port] = parse_url(opts.url);
            access.remote =
                std::make_unique<HttpRegistryClient>(host, port, auth_token_from_env());
        } else if (!opts.data_dir.empty()) {
            access.local = std::make_unique<Registry>(opts.data_dir);
        }
        return access;
    }
};

std::array<uint8_t, 64> luma_thumbnail(const PixelImage& img) {
    const auto luma = luma_plane(img);
    std::array<uint8_t, 64> thumb{};
    for (uint32_t by = 0; by < 8; ++by)
        for (uint32_t bx = 0; bx < 8; ++bx) {
            const uint32_t y0 = by * img.height / 8,
                           y1 = std::max(y0 + 1, (by + 1) * img.height / 8);
            const uint32_t x0 = bx * img.width / 8,
                           x1 = std::max(x0 + 1, (bx + 1) * img.width / 8);
            double sum = 0.0;
            for (uint32_t y = y0; y < y1; ++y)
                for (uint32_t x = x0; x < x1; ++x) sum += luma[size_t(y) * img.width + x];
            thumb[by * 8 + bx] = static_cast<uint8_t>(
                std::clamp(sum / (double(y1 - y0) * (x1 - x0)) + 0.5, 0.0, 255.0));
        }
    return thumb;
}

RegistryEntry entry_from_asset(const MediaAsset& asset, int64_t stored_at) {
    const auto segment = asset.manifest_segment();
    if (!segment) throw Error("asset carries no manifest to register");
    RegistryEntry entry;
    entry.signed_manifest = parse_signed_manifest(*segment);
    entry.content_hash = entry.signed_manifest.manifest.content_hash;
    entry.watermark_id = entry.signed_manifest.manifest.watermark_id;
    entry.fingerprints = {
        compute_fingerprint(asset.image(), FingerprintAlgorithm::BlockMean),
        compute_fingerprint(asset.image(), FingerprintAlgorithm::DctWave),
    };
    entry.thumbnail = luma_thumbnail(asset.image());
    entry.stored_at = stored_at;
    return entry;
}

void store_via(const RegistryOpts& opts, const RegistryEntry& entry) {
    RegistryAccess access = RegistryAccess::open(opts);
    if (access.remote) access.remote->store_entry(entry);
    else if (access.local) access.local->store_entry(entry);
    else throw CLI::ValidationError("registration needs --registry or --data-dir");
}

void print_human_report(const ValidationReport& report) {
    std::cout << "Result: " << to_string(report.result) << "\n";
    std::cout << "Confidence: " << to_string(report.confidence) << "\n";
    std::cout << "C2PA: " << c2pa_status_string(report.c2pa.status);
    for (auto c : report.c2pa.concerns) std::cout << " [" << to_string(c) << "]";
    std::cout << "\n";
    if (report.watermark)
        std::cout << "Watermark: " << to_string(report.watermark->state) << "\n";
    if (report.fingerprint)
        std::cout << "Fingerprint: " << to_string(report.fingerprint->state) << "\n";
    for (const auto& c : report.concerns) std::cout << "Concern: " << c << "\n";
    if (report.needs_human_review) std::cout << "Needs human review\n";
    if (report.display) {
        const auto& d = *report.display;
        std::cout << "Signer: " << d.signer << "\n";
        std::cout << "Security level: " << to_string(d.security_level) << "\n";
        if (d.low_security_caveat)
            std::cout << "Caveat: signed in a low-security environment\n";
        for (const auto& a : d.assertions) std::cout << "Assertion: " << a << "\n";
        for (const auto& a : d.actions) {
            std::cout << "Action: " << to_string(a.kind) << " (" << a.tool << ")";
            if (a.region)
                std::cout << " region [" << a.region->left << "," << a.region->top << ","
                          << a.region->right << "," << a.region->bottom << "]";
            std::cout << "\n";
        }
        for (const auto& i : d.ingredients) {
            std::cout << "Ingredient: " << i.description;
            if (i.thumbnail_hash)
                std::cout << " thumbnail "
                          << to_hex(i.thumbnail_hash->data(), i.thumbnail_hash->size());
            std::cout << "\n";
        }
    }
}

struct SignOpts {
    std::string input, output, cert, trust_path, signer, security = "cloud_high";
    uint64_t key_seed = 1;
    std::vector<std::string> assertions;
    int64_t issued_at = 1;
    bool watermark = false, do_register = false;
    uint64_t wm_id = 0;
    WmKeyOpts wm;
    RegistryOpts reg;
};

struct VerifyOpts {
    std::string input, trust_path, mode = "short", algorithm = "block_mean";
    int tau = 10;
    WmKeyOpts wm;
    RegistryOpts reg;
};

struct WmEmbedOpts {
    std::string input, output;
    uint64_t id = 1;
    WmKeyOpts key;
};

struct WmDetectOpts {
    std::string input;
    WmKeyOpts key;
};

struct FpComputeOpts {
    std::string input, algorithm = "block_mean";
};

struct FpMatchOpts {
    std::string a, b, algorithm = "block_mean";
    int tau = 10;
};

struct AttackOpts {
    std::string name, input, output, donor, cert, meta_key, meta_value, mark_text = "AI";
    uint64_t key_seed = 1, budget = 10000;
    std::vector<uint32_t> region;
    std::vector<std::string> assertions;
    std::string target_fp, endpoint = "internal";
    int tau = 10;
    bool have_cert = false;
    WmKeyOpts wm;
    RegistryOpts reg;
};

struct ServeOpts {
    int port = 8077;
    std::string data_dir, trust_path, auth_token;
    size_t rate_limit = 10;
    double rate_window = 60.0;
    WmKeyOpts wm;
};

struct StoreOpts {
    std::string input;
    int64_t stored_at = 1;
    RegistryOpts reg;
};

struct FaultOpts {
    std::string manifest = "normal", watermark = "normal", fingerprint = "normal";
    RegistryOpts reg;
};

struct RevokeOpts {
    std::string cert, trust_path;
    int64_t at = 1;
};

struct ShowOpts {
    std::string trust_path, registry_url;
};

std::atomic<bool> g_stop{false};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"media integrity toolkit: signed manifests, watermarks, fingerprints"};
    app.require_subcommand(1);

    std::string format = "human";
    uint64_t global_seed = 1;
    app.add_option("--format", format, "human|json")
        ->check(CLI::IsMember({"human", "json"}));
    app.add_option("--seed", global_seed, "deterministic seed");

    std::function<int()> action;

    // ---- sign ----------------------------------------------------------
    auto* sign = app.add_subcommand("sign", "hash, sign, and embed a manifest");
    {
        auto opts = std::make_shared<SignOpts>();
        sign->add_option("input", opts->input)->required();
        sign->add_option("-o,--output", opts->output)->required();
        sign->add_option("--cert", opts->cert, "certificate id")->required();
        sign->add_option("--key-seed", opts->key_seed, "signing key seed");
        sign->add_option("--trust-list", opts->trust_path);
        sign->add_option("--signer", opts->signer, "display name (default: cert id)");
        sign->add_option("--assertion", opts->assertions, "assertion (repeatable)");
        sign->add_option("--issued-at", opts->issued_at);
        sign->add_option("--security-level", opts->security)
            ->check(CLI::IsMember({"cloud_high", "device_secure", "device_low"}));
        sign->add_flag("--watermark", opts->watermark, "embed a robust watermark first");
        sign->add_option("--wm-id", opts->wm_id, "watermark payload id");
        sign->add_flag("--register", opts->do_register, "store the entry in the registry");
        opts->wm.add_to(sign);
        opts->reg.add_to(sign);
        sign->callback([&action, opts, &global_seed] {
            action = [opts, &global_seed] {
                MediaAsset asset = load_asset(opts->input);
                std::optional<uint64_t> wm_id;
                if (opts->watermark) {
                    const uint64_t id = opts->wm_id ? opts->wm_id : (global_seed | 1);
                    const WatermarkKey key = opts->wm.present()
                                                 ? opts->wm.resolve()
                                                 : WatermarkKey::generate(
                                                       WatermarkMode::Robust, global_seed);
                    asset.set_image(embed_watermark(asset.image(),
                                                    WatermarkPayload::from_id(id), key));
                    wm_id = id;
                }
                const TrustList trust = load_trust_file(opts->trust_path);
                const SigningKey key = generate_signing_key(opts->cert, opts->key_seed);
                Manifest manifest;
                manifest.signer_name = opts->signer.empty() ? opts->cert : opts->signer;
                manifest.assertions = opts->assertions;
                manifest.actions.push_back(
                    {ActionKind::Created, std::nullopt, "mediaseal", opts->issued_at});
                manifest.content_hash = hard_hash(asset.image());
                manifest.watermark_id = wm_id;
                manifest.security_level = security_level_from_string(opts->security);
                manifest.issued_at = opts->issued_at;
                const SignedManifest sm = sign_manifest(
                    manifest, key, opts->trust_path.empty() ? nullptr : &trust);
                const MediaAsset out = embed_manifest(asset, sm);
                save_asset(opts->output, out);
                if (opts->do_register)
                    store_via(opts->reg, entry_from_asset(out, opts->issued_at));
                return 0;
            };
        });
    }

    // ---- verify --------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "validate an asset and print a report");
    {
        auto opts = std::make_shared<VerifyOpts>();
        verify->add_option("input", opts->input)->required();
        verify->add_option("--trust-list", opts->trust_path);
        verify->add_option("--mode", opts->mode)->check(CLI::IsMember({"short", "full"}));
        verify->add_option("--tau", opts->tau);
        verify->add_option("--algorithm", opts->algorithm)
            ->check(CLI::IsMember({"block_mean", "dct_wave"}));
        opts->wm.add_to(verify);
        opts->reg.add_to(verify);
        verify->callback([&action, opts, &format] {
            action = [opts, &format] {
                const MediaAsset asset = load_asset(opts->input);
                const TrustList trust = load_trust_file(opts->trust_path);
                std::optional<WatermarkKey> key;
                if (opts->wm.present()) key = opts->wm.resolve();
                RegistryAccess access = RegistryAccess::open(opts->reg);
                ValidationConfig config;
                config.mode = opts->mode == "full" ? ValidationMode::Full
                                                   : ValidationMode::ShortCircuit;
                config.algorithm = fingerprint_algorithm_from_string(opts->algorithm);
                config.tau = opts->tau;
                const ValidationReport report = validate(
                    asset, trust, key ? &*key : nullptr, access.handle(), config);
                if (format == "json") std::cout << serialize_report(report) << "\n";
                else print_human_report(report);
                return 0; // the result is data, not a failure
            };
        });
    }

    // ---- watermark -----------------------------------------------------
    auto* wm = app.add_subcommand("watermark", "embed or detect imperceptible watermarks");
    wm->require_subcommand(1);
    {
        auto opts = std::make_shared<WmEmbedOpts>();
        auto* embed = wm->add_subcommand("embed");
        embed->add_option("input", opts->input)->required();
        embed->add_option("-o,--output", opts->output)->required();
        embed->add_option("--id", opts->id)->required();
        opts->key.add_to(embed);
        embed->callback([&action, opts] {
            action = [opts] {
                MediaAsset asset = load_asset(opts->input);
                asset.set_image(embed_watermark(
                    asset.image(), WatermarkPayload::from_id(opts->id), opts->key.resolve()));
                save_asset(opts->output, asset);
                return 0;
            };
        });

        auto dopts = std::make_shared<WmDetectOpts>();
        auto* detect = wm->add_subcommand("detect");
        detect->add_option("input", dopts->input)->required();
        dopts->key.add_to(detect);
        detect->callback([&action, dopts, &format] {
            action = [dopts, &format] {
                const MediaAsset asset = load_asset(dopts->input);
                const DetectionResult result =
                    decode_watermark(asset.image(), dopts->key.resolve());
                const bool detected = result.status == DetectionStatus::Detected;
                if (format == "json") {
                    nlohmann::json j{{"status", detected ? "detected" : "undetectable"}};
                    if (result.payload) j["watermark_id"] = result.payload->id;
                    std::cout << j.dump() << "\n";
                } else {
                    std::cout << (detected ? "detected" : "undetectable");
                    if (result.payload) std::cout << " id=" << result.payload->id;
                    std::cout << "\n";
                }
                return 0;
            };
        });
    }

    // ---- fingerprint ---------------------------------------------------
    auto* fp = app.add_subcommand("fingerprint", "compute or match soft hashes");
    fp->require_subcommand(1);
    {
        auto copts = std::make_shared<FpComputeOpts>();
        auto* compute = fp->add_subcommand("compute");
        compute->add_option("input", copts->input)->required();
        compute->add_option("--algorithm", copts->algorithm)
            ->check(CLI::IsMember({"block_mean", "dct_wave"}));
        compute->callback([&action, copts] {
            action = [copts] {
                const MediaAsset asset = load_asset(copts->input);
                std::cout << compute_fingerprint(
                                 asset.image(),
                                 fingerprint_algorithm_from_string(copts->algorithm))
                                 .to_text()
                          << "\n";
                return 0;
            };
        });

        auto mopts = std::make_shared<FpMatchOpts>();
        auto* match = fp->add_subcommand("match");
        match->add_option("a", mopts->a)->required();
        match->add_option("b", mopts->b)->required();
        match->add_option("--algorithm", mopts->algorithm)
            ->check(CLI::IsMember({"block_mean", "dct_wave"}));
        match->add_option("--tau", mopts->tau);
        match->callback([&action, mopts, &format] {
            action = [mopts, &format] {
                const auto alg = fingerprint_algorithm_from_string(mopts->algorithm);
                const auto fa = compute_fingerprint(load_asset(mopts->a).image(), alg);
                const auto fb = compute_fingerprint(load_asset(mopts->b).image(), alg);
                const int d = hamming_distance(fa, fb);
                const bool matched = d <= mopts->tau;
                if (format == "json")
                    std::cout << nlohmann::json{{"distance", d},
                                                {"match", matched},
                                                {"needs_human_review", matched}}
                                     .dump()
                              << "\n";
                else
                    std::cout << "distance=" << d << (matched ? " match" : " no-match")
                              << (matched ? " (needs human review)" : "") << "\n";
                return 0;
            };
        });
    }

    // ---- attack --------------------------------------------------------
    auto* attack = app.add_subcommand("attack", "run an attack or scenario");
    {
        auto opts = std::make_shared<AttackOpts>();
        attack->add_option("name", opts->name,
                           "attack id, scenario-1|scenario-2|scenario-3, or oracle-sim")
            ->required();
        attack->add_option("input", opts->input);
        attack->add_option("-o,--output", opts->output);
        attack->add_option("--donor", opts->donor, "donor asset for transplants");
        attack->add_option("--cert", opts->cert)
            ->each([opts](const std::string&) { opts->have_cert = true; });
        attack->add_option("--key-seed", opts->key_seed);
        attack->add_option("--assertion", opts->assertions);
        attack->add_option("--meta-key", opts->meta_key);
        attack->add_option("--meta-value", opts->meta_value);
        attack->add_option("--region", opts->region, "left top right bottom")->expected(4);
        attack->add_option("--mark-text", opts->mark_text);
        attack->add_option("--target-fingerprint", opts->target_fp);
        attack->add_option("--tau", opts->tau);
        attack->add_option("--budget", opts->budget);
        attack->add_option("--endpoint", opts->endpoint)
            ->check(CLI::IsMember({"internal", "public"}));
        opts->wm.add_to(attack);
        opts->reg.add_to(attack);
        attack->callback([&action, opts, &global_seed, &format] {
            action = [opts, &global_seed, &format]() -> int {
                const std::string& name = opts->name;
                if (name == "scenario-1" || name == "scenario-2" || name == "scenario-3") {
                    ScenarioResult result;
                    if (name == "scenario-1")
                        result = scenario_authentic_faked_as_ai(global_seed);
                    else if (name == "scenario-2")
                        result = scenario_ai_faked_as_authentic(global_seed);
                    else result = scenario_manipulated_metadata(global_seed);
                    if (format == "human")
                        std::cout << result.name << ": mitigated="
                                  << (result.mitigated ? "true" : "false") << "\n";
                    else std::cout << serialize_scenario(result) << "\n";
                    return 0;
                }
                if (name == "oracle-sim") {
                    OracleAttackConfig config;
                    config.seed = global_seed;
                    const auto endpoint = opts->endpoint == "public"
                                              ? OracleEndpoint::PublicRateLimited
                                              : OracleEndpoint::InternalConfidence;
                    const auto result = oracle_attack_simulation(endpoint, config);
                    std::cout << nlohmann::json{
                                     {"denied", result.denied},
                                     {"effective_cost", result.effective_cost},
                                     {"elapsed", result.elapsed},
                                     {"endpoint", opts->endpoint},
                                     {"final_distortion", result.final_distortion},
                                     {"queries", result.queries},
                                     {"succeeded", result.succeeded},
                                 }.dump()
                              << "\n";
                    return 0;
                }

                AttackName parsed;
                try {
                    parsed = attack_name_from_string(name);
                } catch (const Error&) {
                    std::cerr << "unknown attack: " << name << "\n";
                    return 1;
                }
                if (opts->input.empty() || opts->output.empty()) {
                    std::cerr << "attack " << name << " needs input and --output\n";
                    return 1;
                }

                AttackSpec spec;
                spec.name = parsed;
                spec.seed = global_seed;
                spec.assertions = opts->assertions;
                spec.meta_key = opts->meta_key;
                spec.meta_value = opts->meta_value;
                spec.mark_text = opts->mark_text;
                spec.tau = opts->tau;
                spec.budget = opts->budget;
                if (opts->region.size() == 4)
                    spec.region = EditRegion{opts->region[0], opts->region[1],
                                             opts->region[2], opts->region[3]};
                if (!opts->target_fp.empty())
                    spec.target = Fingerprint::from_text(opts->target_fp);

                std::optional<SigningKey> signing_key;
                if (opts->have_cert)
                    signing_key = generate_signing_key(opts->cert, opts->key_seed);
                std::optional<WatermarkKey> wm_key;
                if (opts->wm.present()) wm_key = opts->wm.resolve();
                std::optional<MediaAsset> donor;
                if (!opts->donor.empty()) donor = load_asset(opts->donor);
                RegistryAccess access = RegistryAccess::open(opts->reg);

                if (parsed == AttackName::RegistryDos && access.remote) {
                    access.remote->set_faults({FaultMode::NoAccess, FaultMode::NoAccess,
                                               FaultMode::NoAccess});
                    save_asset(opts->output, load_asset(opts->input));
                    return 0;
                }

                AttackContext ctx;
                ctx.signing_key = signing_key ? &*signing_key : nullptr;
                ctx.watermark_key = wm_key ? &*wm_key : nullptr;
                ctx.donor = donor ? &*donor : nullptr;
                ctx.registry = access.local.get();
                save_asset(opts->output, run_attack(load_asset(opts->input), spec, ctx));
                return 0;
            };
        });
    }

    // ---- registry ------------------------------------------------------
    auto* registry_cmd = app.add_subcommand("registry", "serve or operate the registry");
    registry_cmd->require_subcommand(1);
    {
        auto sopts = std::make_shared<ServeOpts>();
        auto* serve = registry_cmd->add_subcommand("serve");
        serve->add_option("--port", sopts->port);
        serve->add_option("--data-dir", sopts->data_dir)->required();
        serve->add_option("--trust-list", sopts->trust_path);
        serve->add_option("--rate-limit", sopts->rate_limit);
        serve->add_option("--rate-window", sopts->rate_window);
        serve->add_option("--auth-token", sopts->auth_token);
        sopts->wm.add_to(serve);
        serve->callback([&action, sopts, &global_seed] {
            action = [sopts, &global_seed] {
                ServiceConfig config;
                config.port = sopts->port;
                config.data_dir = sopts->data_dir;
                config.trust_list_path = sopts->trust_path;
                config.rate_limit = sopts->rate_limit;
                config.rate_window = sopts->rate_window;
                config.auth_token = sopts->auth_token.empty() ? auth_token_from_env()
                                                              : sopts->auth_token;
                config.detector_key =
                    sopts->wm.present()
                        ? sopts->wm.resolve()
                        : WatermarkKey::generate(WatermarkMode::Robust, global_seed);
                RegistryService service(std::move(config));
                service.start();
                std::signal(SIGINT, [](int) { g_stop = true; });
                std::signal(SIGTERM, [](int) { g_stop = true; });
                std::cout << "serving on 127.0.0.1:" << service.port() << std::endl;
                while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
                service.stop();
                return 0;
            };
        });

        auto ropts = std::make_shared<StoreOpts>();
        auto* store = registry_cmd->add_subcommand("store");
        store->add_option("input", ropts->input)->required();
        store->add_option("--stored-at", ropts->stored_at);
        ropts->reg.add_to(store);
        store->callback([&action, ropts] {
            action = [ropts] {
                store_via(ropts->reg, entry_from_asset(load_asset(ropts->input),
                                                       ropts->stored_at));
                return 0;
            };
        });

        auto fopts = std::make_shared<FaultOpts>();
        auto* fault = registry_cmd->add_subcommand("fault");
        fault->add_option("--manifest", fopts->manifest)
            ->check(CLI::IsMember({"normal", "no_access", "missing_manifest"}));
        fault->add_option("--watermark", fopts->watermark)
            ->check(CLI::IsMember({"normal", "no_access", "missing_manifest"}));
        fault->add_option("--fingerprint", fopts->fingerprint)
            ->check(CLI::IsMember({"normal", "no_access", "missing_manifest"}));
        fopts->reg.add_to(fault);
        fault->callback([&action, fopts] {
            action = [fopts]() -> int {
                if (fopts->reg.url.empty()) {
                    std::cerr << "registry fault needs --registry URL\n";
                    return 1;
                }
                RegistryAccess access = RegistryAccess::open(fopts->reg);
                access.remote->set_faults({
                    fault_mode_from_string(fopts->manifest),
                    fault_mode_from_string(fopts->watermark),
                    fault_mode_from_string(fopts->fingerprint),
                });
                return 0;
            };
        });
    }

    // ---- trust ---------------------------------------------------------
    auto* trust_cmd = app.add_subcommand("trust", "inspect or update the trust list");
    trust_cmd->require_subcommand(1);
    {
        auto ropts = std::make_shared<RevokeOpts>();
        auto* revoke = trust_cmd->add_subcommand("revoke");
        revoke->add_option("cert", ropts->cert)->required();
        revoke->add_option("--trust-list", ropts->trust_path)->required();
        revoke->add_option("--at", ropts->at);
        revoke->callback([&action, ropts] {
            action = [ropts] {
                const TrustList trust = load_trust_file(ropts->trust_path);
                write_file(ropts->trust_path,
                           save_trust_list(trust.revoke(ropts->cert, ropts->at)));
                return 0;
            };
        });

        auto sopts = std::make_shared<ShowOpts>();
        auto* show = trust_cmd->add_subcommand("show");
        show->add_option("--trust-list", sopts->trust_path);
        show->add_option("--registry", sopts->registry_url);
        show->callback([&action, sopts, &format] {
            action = [sopts, &format] {
                TrustList trust;
                if (!sopts->registry_url.empty()) {
                    const auto [host, port] = parse_url(sopts->registry_url);
                    trust = HttpRegistryClient(host, port).fetch_trust_list();
                } else {
                    trust = load_trust_file(sopts->trust_path);
                }
                if (format == "json") {
                    const auto bytes = save_trust_list(trust);
                    std::cout << std::string(bytes.begin(), bytes.end()) << "\n";
                } else {
                    std::cout << "version " << trust.version() << "\n";
                    for (const auto& [id, rec] : trust.records())
                        std::cout << id << " " << rec.owner_name << " "
                                  << to_string(rec.security_level)
                                  << (rec.revoked ? " REVOKED" : "") << "\n";
                }
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors are exit 1
    }

    try {
        return action ? action() : 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const StoreError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
