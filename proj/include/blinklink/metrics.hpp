#pragma once

#include "blinklink/codec.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace blinklink {

struct DecodeReport;

struct RocPoint
{
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve
{
    /// From (0,0) to (1,1), one point per distinct score, highest threshold first.
    std::vector<RocPoint> points;
    double auc = 0.0;
};

struct ConfusionMatrix
{
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    [[nodiscard]] std::uint64_t total() const { return tp + fp + tn + fn; }
    [[nodiscard]] double accuracy() const
    {
        return static_cast<double>(tp + tn) / static_cast<double>(total());
    }
};

struct AccuracyResult
{
    double accuracy = 0.0;
    ConfusionMatrix confusion;
};

struct LinkStats
{
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    std::uint64_t messages_ok = 0;
    std::uint64_t messages_total = 0;
    double ber = 0.0;
    double message_success_rate = 0.0;

    LinkStats& operator+=(const LinkStats& other);
};

/// Rank-based AUC with half credit for tied scores (Mann-Whitney U), plus
/// the threshold-swept curve. Throws DegenerateLabels if a class is missing
/// and ConfigError on a length mismatch.
[[nodiscard]] RocCurve roc_auc(std::span<const double> scores, const std::vector<bool>& labels);

/// Predictions are `score >= threshold`. Throws EmptyInput.
[[nodiscard]] AccuracyResult accuracy_at(std::span<const double> scores, const std::vector<bool>& labels,
                                         double threshold);

/// Matches reports to sent payloads in stream order and counts message and
/// bit errors over the matched packets.
[[nodiscard]] LinkStats link_stats(std::span<const Payload> sent, std::span<const DecodeReport> reports,
                                   const LineCodeConfig& line_code = {});

}  // namespace blinklink
