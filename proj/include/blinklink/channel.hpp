#pragma once

// Simulated optical channel plus onboard LED-state classifier.
//
// The receiver's CNN is replaced by a score surrogate: each frame's true LED
// state is mapped to a score in [0,1] drawn from a class-conditional model.
// Timing impairments (clock drift, dropped frames, unknown lead-in) are applied
// to the waveform before scoring.

#include "blinklink/codec.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace blinklink {

/// Per-frame classifier output; `truth` is the aligned LED state when known.
struct FrameScores
{
    std::vector<double> scores;
    double fps = 30.0;
    std::optional<std::vector<bool>> truth;

    [[nodiscard]] std::size_t size() const { return scores.size(); }
};

/// Hard decisions: the score is 1.0/0.0 and wrong with probability `p`.
struct FlipModel
{
    double p = 0.0;
};

/// LED-on frames draw from Beta(a_on, b_on), LED-off frames from Beta(b_on, a_on).
struct BetaModel
{
    double a_on = 1.0;
    double b_on = 1.0;
};

using ScoreModel = std::variant<FlipModel, BetaModel>;

struct ChannelConfig
{
    ScoreModel score_model = FlipModel{};
    /// Multiplier on the bit duration seen by the receiver.
    double drift = 1.0;
    double drop_prob = 0.0;
    int lead_offset = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

using ChannelEngine = std::mt19937_64;

/// Resample by drift (output frame i takes source frame floor(i / drift)),
/// drop frames independently with drop_prob, then prepend lead_offset idle
/// frames. Accepts any positive drift; the [0.9, 1.1] range is enforced by
/// ChannelConfig::validate.
[[nodiscard]] LedWaveform apply_timing(const LedWaveform& waveform, const ChannelConfig& config);
[[nodiscard]] LedWaveform apply_timing(const LedWaveform& waveform, const ChannelConfig& config,
                                       ChannelEngine& engine);

/// apply_timing followed by one score per frame. Same seed, same output.
[[nodiscard]] FrameScores sample_scores(const LedWaveform& waveform, const ChannelConfig& config);

/// One score for a frame whose LED state is `led_on`.
[[nodiscard]] double draw_score(const ScoreModel& model, bool led_on, ChannelEngine& engine);

struct LabelledScores
{
    std::vector<double> scores;
    std::vector<bool> labels;
};

/// `per_class` on-frames followed by `per_class` off-frames.
[[nodiscard]] LabelledScores draw_labelled_scores(const ScoreModel& model, std::size_t per_class,
                                                  std::uint64_t seed);

/// Exact accuracy of the mirrored Beta pair when thresholding at `threshold`.
[[nodiscard]] double beta_accuracy(const BetaModel& model, double threshold = 0.5);

/// Exact AUC, P(X_on > X_off), by numerical quadrature.
[[nodiscard]] double beta_auc(const BetaModel& model);

struct CalibrationOptions
{
    std::uint64_t seed = 1;
    std::size_t samples_per_class = 100'000;
};

struct CalibrationResult
{
    BetaModel model;
    double model_auc = 0.0;
    double model_accuracy = 0.0;
    double empirical_auc = 0.0;
    double empirical_accuracy = 0.0;
};

/// Finds Beta parameters whose empirical AUC and accuracy at 0.5 both land
/// within `tol` of the targets. Requires 0.5 < target_acc <= target_auc < 1.
/// Throws CalibrationFailed when the search budget is exhausted.
[[nodiscard]] CalibrationResult calibrate_score_model(double target_auc, double target_acc, double tol,
                                                      const CalibrationOptions& options = {});

}  // namespace blinklink
