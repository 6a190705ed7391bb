#include "blinklink/codec.hpp"

#include "blinklink/error.hpp"

#include <algorithm>
#include <string>

namespace blinklink {

void LineCodeConfig::validate() const
{
    if (frames_per_bit < 1)
    {
        throw ConfigError("frames_per_bit must be >= 1, got " + std::to_string(frames_per_bit));
    }
    if (!(fps > 0.0))
    {
        throw ConfigError("fps must be > 0");
    }
    if (idle_frames < 0)
    {
        throw ConfigError("idle_frames must be >= 0");
    }
    // The idle level is LED off; without an on bit the packet start has no edge.
    if (!start_pattern[0] && !start_pattern[1])
    {
        throw ConfigError("start_pattern must contain at least one LED-on bit");
    }
}

Packet encode_packet(Payload payload, const LineCodeConfig& config)
{
    Packet packet;
    auto out = packet.bits.begin();
    out = std::copy(config.start_pattern.begin(), config.start_pattern.end(), out);
    for (std::size_t i = 0; i < kPayloadBits; ++i)
    {
        const auto shift = config.bit_order == BitOrder::msb_first ? kPayloadBits - 1 - i : i;
        *out++ = ((payload.value >> shift) & 1U) != 0;
    }
    std::copy(config.stop_pattern.begin(), config.stop_pattern.end(), out);
    return packet;
}

Payload decode_packet(std::span<const bool> bits, const LineCodeConfig& config)
{
    if (bits.size() != kPacketBits)
    {
        throw LengthError("packet must have 12 bits, got " + std::to_string(bits.size()));
    }
    if (!std::equal(config.start_pattern.begin(), config.start_pattern.end(), bits.begin()))
    {
        throw FramingError(FramingPosition::start);
    }
    if (!std::equal(config.stop_pattern.begin(), config.stop_pattern.end(),
                    bits.begin() + kStartBits + kPayloadBits))
    {
        throw FramingError(FramingPosition::stop);
    }

    std::uint8_t value = 0;
    for (std::size_t i = 0; i < kPayloadBits; ++i)
    {
        if (bits[kStartBits + i])
        {
            const auto shift = config.bit_order == BitOrder::msb_first ? kPayloadBits - 1 - i : i;
            value |= static_cast<std::uint8_t>(1U << shift);
        }
    }
    return Payload{value};
}

namespace {

void append_packet(std::vector<bool>& frames, const Packet& packet, int frames_per_bit)
{
    for (const bool bit : packet.bits)
    {
        frames.insert(frames.end(), static_cast<std::size_t>(frames_per_bit), bit);
    }
}

}  // namespace

LedWaveform packet_to_waveform(const Packet& packet, const LineCodeConfig& config)
{
    LedWaveform waveform;
    waveform.fps = config.fps;
    waveform.frames.reserve(kPacketBits * static_cast<std::size_t>(config.frames_per_bit));
    append_packet(waveform.frames, packet, config.frames_per_bit);
    return waveform;
}

LedWaveform encode_message_stream(std::span<const Payload> payloads, const LineCodeConfig& config)
{
    if (payloads.empty())
    {
        throw EmptyInput("message stream needs at least one payload");
    }
    const auto idle = static_cast<std::size_t>(config.idle_frames);
    const auto packet_frames = kPacketBits * static_cast<std::size_t>(config.frames_per_bit);

    LedWaveform waveform;
    waveform.fps = config.fps;
    waveform.frames.reserve(idle + payloads.size() * (packet_frames + idle));
    waveform.frames.insert(waveform.frames.end(), idle, false);
    for (const Payload payload : payloads)
    {
        append_packet(waveform.frames, encode_packet(payload, config), config.frames_per_bit);
        waveform.frames.insert(waveform.frames.end(), idle, false);
    }
    return waveform;
}

std::vector<Payload> full_payload_range()
{
    std::vector<Payload> payloads(256);
    for (std::size_t i = 0; i < payloads.size(); ++i)
    {
        payloads[i].value = static_cast<std::uint8_t>(i);
    }
    return payloads;
}

}  // namespace blinklink
