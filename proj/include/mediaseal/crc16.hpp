#pragma once

#include <cstddef>
#include <cstdint>

namespace mediaseal {

// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, xorout 0.
uint16_t crc16_ccitt_false(const uint8_t* data, size_t len);

// CRC over the big-endian bytes of a 64-bit watermark ID.
uint16_t crc16_of_id(uint64_t id);

} // namespace mediaseal
