#pragma once

// Line code for the LED blink link.
//
// A packet is 12 bits: 2 start bits, 8 payload bits, 2 stop bits. Every bit is
// held on the LED for frames_per_bit camera frames (12 at 30 FPS, i.e. 2.5 bit/s
// and 4.8 s per packet). Between packets the LED idles off, so the first start
// bit always produces a rising edge the receiver can lock onto.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace blinklink {

struct Payload
{
    std::uint8_t value = 0;

    friend constexpr bool operator==(Payload, Payload) = default;
};

/// Alert payload sent by a drone that no longer trusts its radio ('S').
inline constexpr Payload kSosPayload{0x53};

inline constexpr std::size_t kPacketBits = 12;
inline constexpr std::size_t kStartBits = 2;
inline constexpr std::size_t kPayloadBits = 8;
inline constexpr std::size_t kStopBits = 2;

using BitPair = std::array<bool, 2>;

enum class BitOrder { msb_first, lsb_first };

struct LineCodeConfig
{
    BitPair start_pattern{true, false};
    BitPair stop_pattern{false, true};
    BitOrder bit_order = BitOrder::msb_first;
    int frames_per_bit = 12;
    double fps = 30.0;
    int idle_frames = 24;

    [[nodiscard]] double bit_rate() const { return fps / frames_per_bit; }
    [[nodiscard]] double bit_duration() const { return frames_per_bit / fps; }

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct Packet
{
    std::array<bool, kPacketBits> bits{};

    friend bool operator==(const Packet&, const Packet&) = default;
};

/// Frame-level LED state; `true` is LED on.
struct LedWaveform
{
    std::vector<bool> frames;
    double fps = 30.0;

    [[nodiscard]] std::size_t size() const { return frames.size(); }
    [[nodiscard]] double duration() const { return static_cast<double>(frames.size()) / fps; }

    friend bool operator==(const LedWaveform&, const LedWaveform&) = default;
};

[[nodiscard]] Packet encode_packet(Payload payload, const LineCodeConfig& config = {});

/// Inverse of encode_packet. Throws LengthError unless exactly 12 bits are
/// given and FramingError when the start or stop bits are wrong.
[[nodiscard]] Payload decode_packet(std::span<const bool> bits, const LineCodeConfig& config = {});

[[nodiscard]] LedWaveform packet_to_waveform(const Packet& packet, const LineCodeConfig& config = {});

/// Leading idle, then every packet followed by an idle gap. Throws EmptyInput.
[[nodiscard]] LedWaveform encode_message_stream(std::span<const Payload> payloads,
                                                const LineCodeConfig& config = {});

/// All 256 payloads 0x00..0xFF in ascending order.
[[nodiscard]] std::vector<Payload> full_payload_range();

}  // namespace blinklink
