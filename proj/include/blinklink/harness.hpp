#pragma once

#include "blinklink/config.hpp"
#include "blinklink/decoder.hpp"
#include "blinklink/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace blinklink {

struct TrialResult
{
    std::uint64_t seed = 0;
    LinkStats stats;
    std::vector<DecodeReport> reports;
    /// Messages whose 4-bit datum survived ECC decoding (ECC runs only).
    std::optional<std::uint64_t> ecc_data_ok;
};

struct ExperimentResult
{
    LinkStats stats;
    std::optional<std::uint64_t> ecc_data_ok;
    std::vector<TrialResult> trials;
};

/// Payloads actually put on the air (ECC codewords when enabled).
[[nodiscard]] std::vector<Payload> transmitted_payloads(const ExperimentConfig& config);

/// encode -> channel -> decode_stream -> link_stats for every trial. Trial t
/// uses channel seed `seed + t`; trials run in parallel and are reduced in
/// order, so the result does not depend on the thread count.
[[nodiscard]] ExperimentResult simulate_experiment(const ExperimentConfig& config);

/// simulate_experiment plus reports.jsonl and stats.csv in output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

[[nodiscard]] std::string stats_csv(const ExperimentConfig& config, const ExperimentResult& result);
[[nodiscard]] std::string reports_jsonl(const ExperimentConfig& config, const ExperimentResult& result);

struct SweepRow
{
    double value = 0.0;
    LinkStats stats;
};

struct SweepResult
{
    SweepParameter parameter = SweepParameter::flip_p;
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
};

/// One simulate_experiment per grid value. Success increasing with flip_p or
/// drop_prob by more than sampling noise is flagged in `warnings`.
[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec);

[[nodiscard]] std::string sweep_csv(const SweepResult& result);

}  // namespace blinklink
