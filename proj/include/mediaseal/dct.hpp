#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mediaseal {

// Orthonormal 2-D DCT-II / DCT-III over 8x8 blocks, row-major float planes.
void dct8x8_forward(const float* block, float* coeffs); // both 64 floats, stride 8
void dct8x8_inverse(const float* coeffs, float* block);

// Orthonormal 2-D DCT-II of an NxN plane (straightforward O(N^3); used at
// analysis sizes like 32x32).
std::vector<float> dct2d_forward(const std::vector<float>& plane, size_t n);

} // namespace mediaseal
