#pragma once

// Receiver side of the blink link.
//
// The decoder sees only per-frame classifier scores. It locks onto the packet
// start by correlating against the idle + start-flag waveform, refines the
// frames-per-bit estimate, then averages each bit window and thresholds it.

#include "blinklink/channel.hpp"
#include "blinklink/codec.hpp"
#include "blinklink/error.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace blinklink {

struct DecoderConfig
{
    double threshold = 0.5;
    LineCodeConfig line_code;
    /// Minimum normalized start-flag correlation accepted as a packet start.
    double min_correlation = 0.6;
    int search_step = 1;
    /// A framed packet with any bit below this confidence is reported as
    /// low_confidence instead of ok. Zero disables the check.
    double min_bit_confidence = 0.0;
    /// Half-width of the frames-per-bit refinement grid, relative to nominal.
    double rate_search = 0.05;

    void validate() const;
};

struct ClockEstimate
{
    /// First frame of the first start bit.
    std::size_t packet_start = 0;
    double frames_per_bit = 12.0;
    double correlation = 0.0;
};

struct BitDecision
{
    bool value = false;
    double mean_score = 0.0;
    /// |2 * mean_score - 1|
    double confidence = 0.0;
};

using PacketDecisions = std::array<BitDecision, kPacketBits>;

enum class DecodeStatus { ok, framing_error, low_confidence, no_sync };

[[nodiscard]] std::string_view to_string(DecodeStatus status);

struct DecodeReport
{
    std::optional<Payload> payload;
    /// 12 decisions, empty for no_sync.
    std::vector<BitDecision> bits;
    ClockEstimate clock;
    DecodeStatus status = DecodeStatus::no_sync;
    std::optional<FramingPosition> framing;

    [[nodiscard]] bool has_clock() const { return status != DecodeStatus::no_sync; }
};

/// Idle frames at -1 followed by the start pattern expanded to frames_per_bit,
/// on mapped to +1 and off to -1.
[[nodiscard]] std::vector<double> start_flag_template(const DecoderConfig& config);

/// Throws NoSync when no offset reaches min_correlation, or when the stream is
/// shorter than the template.
[[nodiscard]] ClockEstimate recover_clock(const FrameScores& scores, const DecoderConfig& config);

/// As above, with the template not allowed to start before `search_from`.
[[nodiscard]] ClockEstimate recover_clock(std::span<const double> scores, const DecoderConfig& config,
                                          std::size_t search_from = 0);

/// Throws Truncated if a bit window has fewer than frames_per_bit / 2 frames.
[[nodiscard]] PacketDecisions estimate_bits(const FrameScores& scores, const ClockEstimate& clock,
                                            const DecoderConfig& config);
[[nodiscard]] PacketDecisions estimate_bits(std::span<const double> scores, const ClockEstimate& clock,
                                            const DecoderConfig& config);

/// Every packet found in the stream, in order.
[[nodiscard]] std::vector<DecodeReport> decode_stream(const FrameScores& scores, const DecoderConfig& config);

/// First report of decode_stream, or a no_sync report.
[[nodiscard]] DecodeReport decode_single(const FrameScores& scores, const DecoderConfig& config);

/// Incremental decode_stream. Reports are released once enough frames have
/// arrived that later frames cannot change them; finish() flushes the rest.
/// Not thread-safe; one session per thread at a time.
class StreamDecoder
{
public:
    explicit StreamDecoder(DecoderConfig config);

    std::vector<DecodeReport> push(std::span<const double> scores);
    std::vector<DecodeReport> finish();

    [[nodiscard]] std::size_t frames_seen() const { return buffer_.size(); }

private:
    std::vector<DecodeReport> drain(bool final);

    DecoderConfig config_;
    std::vector<double> buffer_;
    std::size_t cursor_ = 0;
    bool done_ = false;
};

}  // namespace blinklink
