#pragma once

#include "blinklink/channel.hpp"
#include "blinklink/decoder.hpp"

#include <filesystem>
#include <string>

namespace blinklink {

/// SVG of one decoded packet: a dot per frame score, alternating shaded
/// bands at the recovered bit boundaries, dots colored by bit role
/// (start, payload, stop). Throws NoSync when the report has no clock.
[[nodiscard]] std::string render_trace_svg(const DecodeReport& report, const FrameScores& scores,
                                           const DecoderConfig& config);

/// Writes render_trace_svg to `path`; nothing is written on error.
void emit_trace(const DecodeReport& report, const FrameScores& scores, const std::filesystem::path& path,
                const DecoderConfig& config);

}  // namespace blinklink
