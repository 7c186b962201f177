#pragma once

#include <stdexcept>
#include <string>

namespace mediaseal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Container / pixel model
struct MalformedContainer : Error { using Error::Error; };
struct InvariantViolation : Error { using Error::Error; };
struct BadTransformParams : Error { using Error::Error; };

// Manifest / signing
struct HashMismatch : Error { using Error::Error; };
struct KeyMismatch : Error { using Error::Error; };
struct MalformedManifestSegment : Error { using Error::Error; };

// Trust list
struct UnknownCertificate : Error { using Error::Error; };
struct MalformedTrustList : Error { using Error::Error; };

// Watermarking / fingerprinting
struct ImageTooSmall : Error { using Error::Error; };
struct BadKey : Error { using Error::Error; };
struct AlgorithmMismatch : Error { using Error::Error; };

// Registry
struct DuplicateWatermarkId : Error { using Error::Error; };
struct StoreError : Error { using Error::Error; };

// Attack harness
struct MissingContext : Error { using Error::Error; };

} // namespace mediaseal
