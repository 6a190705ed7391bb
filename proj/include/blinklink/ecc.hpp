#pragma once

// Extended Hamming(8,4) SECDED carried inside the 8-bit payload.
//
// Byte bit i holds Hamming position i + 1:
//   pos 1 p1, pos 2 p2, pos 3 d0, pos 4 p4, pos 5 d1, pos 6 d2, pos 7 d3,
//   pos 8 overall parity.
// p1/p2/p4 cover the positions whose index has that bit set; the overall bit
// makes the byte's parity even.

#include <cstdint>
#include <optional>

namespace blinklink {

struct EccCodeword
{
    std::uint8_t byte = 0;

    friend constexpr bool operator==(EccCodeword, EccCodeword) = default;
};

enum class EccStatus { clean, corrected, uncorrectable };

struct EccResult
{
    std::optional<std::uint8_t> data;
    EccStatus status = EccStatus::clean;
    /// Byte bit (0..7) that was flipped back when status is corrected.
    std::optional<int> bit_index;
};

/// Throws ConfigError for data > 15.
[[nodiscard]] EccCodeword ecc_encode(std::uint8_t data);

[[nodiscard]] EccResult ecc_decode(std::uint8_t byte);

[[nodiscard]] const char* to_string(EccStatus status);

}  // namespace blinklink
