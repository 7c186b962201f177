#include "mediaseal/dct.hpp"

#include <cmath>

namespace mediaseal {

namespace {

struct Basis8 {
    float m[8][8]; // m[k][n] = c(k) * cos((2n+1) k pi / 16)
    Basis8() {
        const double pi = std::acos(-1.0);
        for (int k = 0; k < 8; ++k) {
            const double c = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            for (int n = 0; n < 8; ++n)
                m[k][n] = static_cast<float>(c * std::cos((2 * n + 1) * k * pi / 16.0));
        }
    }
};

const Basis8& basis8() {
    static const Basis8 b;
    return b;
}

} // namespace

void dct8x8_forward(const float* block, float* coeffs) {
    const auto& b = basis8();
    float tmp[64];
    // rows
    for (int y = 0; y < 8; ++y)
        for (int k = 0; k < 8; ++k) {
            float s = 0;
            for (int n = 0; n < 8; ++n) s += b.m[k][n] * block[y * 8 + n];
            tmp[y * 8 + k] = s;
        }
    // columns
    for (int x = 0; x < 8; ++x)
        for (int k = 0; k < 8; ++k) {
            float s = 0;
            for (int n = 0; n < 8; ++n) s += b.m[k][n] * tmp[n * 8 + x];
            coeffs[k * 8 + x] = s;
        }
}

void dct8x8_inverse(const float* coeffs, float* block) {
    const auto& b = basis8();
    float tmp[64];
    for (int x = 0; x < 8; ++x)
        for (int n = 0; n < 8; ++n) {
            float s = 0;
            for (int k = 0; k < 8; ++k) s += b.m[k][n] * coeffs[k * 8 + x];
            tmp[n * 8 + x] = s;
        }
    for (int y = 0; y < 8; ++y)
        for (int n = 0; n < 8; ++n) {
            float s = 0;
            for (int k = 0; k < 8; ++k) s += b.m[k][n] * tmp[y * 8 + k];
            block[y * 8 + n] = s;
        }
}

std::vector<float> dct2d_forward(const std::vector<float>& plane, size_t n) {
    const double pi = std::acos(-1.0);
    std::vector<double> basis(n * n);
    for (size_t k = 0; k < n; ++k) {
        const double c = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (size_t i = 0; i < n; ++i)
            basis[k * n + i] = c * std::cos((2 * i + 1) * k * pi / (2.0 * n));
    }
    std::vector<double> tmp(n * n), out(n * n);
    for (size_t y = 0; y < n; ++y)
        for (size_t k = 0; k < n; ++k) {
            double s = 0;
            for (size_t i = 0; i < n; ++i) s += basis[k * n + i] * plane[y * n + i];
            tmp[y * n + k] = s;
        }
    for (size_t x = 0; x < n; ++x)
        for (size_t k = 0; k < n; ++k) {
            double s = 0;
            for (size_t i = 0; i < n; ++i) s += basis[k * n + i] * tmp[i * n + x];
            out[k * n + x] = s;
        }
    return std::vector<float>(out.begin(), out.end());
}

} // namespace mediaseal
