#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mediaseal {

inline std::string to_hex(const uint8_t* data, size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0xF]);
    }
    return out;
}

inline std::string to_hex(const std::vector<uint8_t>& data) {
    return to_hex(data.data(), data.size());
}

// Lowercase hex only; returns nullopt on odd length or bad digit.
inline std::optional<std::vector<uint8_t>> from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    std::vector<uint8_t> out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int v = 0;
        for (int j = 0; j < 2; ++j) {
            const char c = hex[i * 2 + j];
            v <<= 4;
            if (c >= '0' && c <= '9') v |= c - '0';
            else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
            else return std::nullopt;
        }
        out[i] = static_cast<uint8_t>(v);
    }
    return out;
}

} // namespace mediaseal
