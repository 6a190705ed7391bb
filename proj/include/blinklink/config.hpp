#pragma once

// Experiment configuration: one JSON document mirroring ExperimentConfig
// field for field, with `--set a.b.c=value` overrides applied by dotted path
// before parsing. Unknown keys are rejected.

#include "blinklink/channel.hpp"
#include "blinklink/codec.hpp"
#include "blinklink/decoder.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace blinklink {

struct PayloadSet
{
    enum class Kind { list, range, sos };

    Kind kind = Kind::range;
    /// Explicit values for Kind::list.
    std::vector<int> values;
    /// Repetitions for Kind::sos.
    int count = 1;

    /// With `ecc`, values are 4-bit data and the range is 0x0..0xF.
    [[nodiscard]] std::vector<std::uint8_t> expand(bool ecc) const;
};

struct ExperimentConfig
{
    LineCodeConfig line_code;
    ChannelConfig channel;
    /// decoder.line_code always mirrors line_code.
    DecoderConfig decoder;
    PayloadSet payload_set;
    int trials = 1;
    std::filesystem::path output_dir = "out";
    bool ecc = false;
    /// Worker threads for trials; 0 picks the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

enum class SweepParameter { flip_p, drift, drop_prob };

struct SweepSpec
{
    SweepParameter parameter = SweepParameter::flip_p;
    std::vector<double> grid;
    ExperimentConfig base;

    void validate() const;
};

[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& config);
[[nodiscard]] ExperimentConfig experiment_from_json(const nlohmann::json& document);
[[nodiscard]] SweepSpec sweep_from_json(const nlohmann::json& document);

/// Parses `path.to.key=value`; the value is read as JSON when it parses,
/// otherwise as a string. Throws ConfigError.
void apply_override(nlohmann::json& document, const std::string& assignment);

[[nodiscard]] nlohmann::json load_json_file(const std::filesystem::path& path);

[[nodiscard]] std::string to_string(SweepParameter parameter);
[[nodiscard]] SweepParameter parse_sweep_parameter(const std::string& name);

}  // namespace blinklink
