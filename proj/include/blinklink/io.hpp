#pragma once

// Interchange formats between CLI stages.
//
//   waveform text   "fps=<real>" then one 0/1 per line
//   score CSV       header "frame_index,score,truth"; truth is 0, 1 or empty
//   reports         one JSON object per line
//
// Reals are written in shortest round-trip form, so a file read back gives
// bit-identical values.

#include "blinklink/channel.hpp"
#include "blinklink/codec.hpp"
#include "blinklink/decoder.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace blinklink {

[[nodiscard]] std::string format_real(double value);

void write_waveform(std::ostream& out, const LedWaveform& waveform);
/// Throws ConfigError on malformed input.
[[nodiscard]] LedWaveform read_waveform(std::istream& in);

void write_scores_csv(std::ostream& out, const FrameScores& scores);
[[nodiscard]] FrameScores read_scores_csv(std::istream& in, double fps = 30.0);

/// With `ecc` set, an "ecc" member carries the SECDED outcome of the payload.
[[nodiscard]] nlohmann::ordered_json report_to_json(const DecodeReport& report, bool ecc = false);
void write_reports(std::ostream& out, std::span<const DecodeReport> reports, bool ecc = false);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace blinklink
