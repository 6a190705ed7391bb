#include "blinklink/ecc.hpp"

#include "blinklink/error.hpp"

#include <array>
#include <bit>
#include <string>

namespace blinklink {

namespace {

// Hamming positions (1-indexed) of data bits d0..d3.
constexpr std::array<int, 4> kDataPositions{3, 5, 6, 7};

constexpr bool position_bit(std::uint8_t byte, int position)
{
    return ((byte >> (position - 1)) & 1U) != 0;
}

int syndrome(std::uint8_t byte)
{
    int s = 0;
    for (int position = 1; position <= 7; ++position)
    {
        if (position_bit(byte, position))
        {
            s ^= position;
        }
    }
    return s;
}

std::uint8_t extract_data(std::uint8_t byte)
{
    std::uint8_t data = 0;
    for (std::size_t i = 0; i < kDataPositions.size(); ++i)
    {
        if (position_bit(byte, kDataPositions[i]))
        {
            data |= static_cast<std::uint8_t>(1U << i);
        }
    }
    return data;
}

}  // namespace

EccCodeword ecc_encode(std::uint8_t data)
{
    if (data > 0x0F)
    {
        throw ConfigError("ECC datum must fit in 4 bits, got " + std::to_string(data));
    }
    std::uint8_t byte = 0;
    for (std::size_t i = 0; i < kDataPositions.size(); ++i)
    {
        if ((data >> i) & 1U)
        {
            byte |= static_cast<std::uint8_t>(1U << (kDataPositions[i] - 1));
        }
    }
    // Parity bits set so the 7-bit syndrome is zero.
    const int s = syndrome(byte);
    for (const int parity_position : {1, 2, 4})
    {
        if (s & parity_position)
        {
            byte |= static_cast<std::uint8_t>(1U << (parity_position - 1));
        }
    }
    if (std::popcount(byte) % 2 != 0)
    {
        byte |= 0x80;
    }
    return EccCodeword{byte};
}

EccResult ecc_decode(std::uint8_t byte)
{
    const int s = syndrome(byte);
    const bool odd = std::popcount(byte) % 2 != 0;

    EccResult result;
    if (s == 0 && !odd)
    {
        result.status = EccStatus::clean;
        result.data = extract_data(byte);
    }
    else if (odd)
    {
        // Single error: at the syndrome position, or the overall parity bit.
        const int bit = s == 0 ? 7 : s - 1;
        result.status = EccStatus::corrected;
        result.bit_index = bit;
        result.data = extract_data(static_cast<std::uint8_t>(byte ^ (1U << bit)));
    }
    else
    {
        result.status = EccStatus::uncorrectable;
    }
    return result;
}

const char* to_string(EccStatus status)
{
    switch (status)
    {
    case EccStatus::clean:
        return "clean";
    case EccStatus::corrected:
        return "corrected";
    case EccStatus::uncorrectable:
        return "uncorrectable";
    }
    return "unknown";
}

}  // namespace blinklink
