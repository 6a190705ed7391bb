#include "blinklink/metrics.hpp"

#include "blinklink/decoder.hpp"
#include "blinklink/error.hpp"

#include <algorithm>
#include <numeric>

namespace blinklink {

namespace {

void finalize(LinkStats& stats)
{
    stats.ber = stats.bits_total == 0 ? 0.0
                                      : static_cast<double>(stats.bit_errors) / static_cast<double>(stats.bits_total);
    stats.message_success_rate =
        stats.messages_total == 0
            ? 0.0
            : static_cast<double>(stats.messages_ok) / static_cast<double>(stats.messages_total);
}

void check_lengths(std::span<const double> scores, const std::vector<bool>& labels)
{
    if (scores.size() != labels.size())
    {
        throw ConfigError("scores and labels differ in length");
    }
}

}  // namespace

LinkStats& LinkStats::operator+=(const LinkStats& other)
{
    bit_errors += other.bit_errors;
    bits_total += other.bits_total;
    messages_ok += other.messages_ok;
    messages_total += other.messages_total;
    finalize(*this);
    return *this;
}

RocCurve roc_auc(std::span<const double> scores, const std::vector<bool>& labels)
{
    check_lengths(scores, labels);
    const auto positives = static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), true));
    const auto negatives = static_cast<std::uint64_t>(labels.size()) - positives;
    if (positives == 0 || negatives == 0)
    {
        throw DegenerateLabels("ROC needs both LED-on and LED-off samples");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    // Twice the Mann-Whitney U: 2 per correctly ordered pair, 1 per tie.
    std::uint64_t twice_u = 0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    for (std::size_t i = 0; i < order.size();)
    {
        std::uint64_t group_pos = 0;
        std::uint64_t group_neg = 0;
        const double value = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == value; ++i)
        {
            ++(labels[order[i]] ? group_pos : group_neg);
        }
        const std::uint64_t neg_below = negatives - fp - group_neg;
        twice_u += 2 * group_pos * neg_below + group_pos * group_neg;
        tp += group_pos;
        fp += group_neg;
        curve.points.push_back(
            {static_cast<double>(fp) / static_cast<double>(negatives),
             static_cast<double>(tp) / static_cast<double>(positives)});
    }
    curve.auc = static_cast<double>(twice_u) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
    return curve;
}

AccuracyResult accuracy_at(std::span<const double> scores, const std::vector<bool>& labels, double threshold)
{
    check_lengths(scores, labels);
    if (scores.empty())
    {
        throw EmptyInput("accuracy needs at least one scored frame");
    }
    AccuracyResult result;
    ConfusionMatrix& cm = result.confusion;
    for (std::size_t i = 0; i < scores.size(); ++i)
    {
        const bool predicted = scores[i] >= threshold;
        if (labels[i])
        {
            ++(predicted ? cm.tp : cm.fn);
        }
        else
        {
            ++(predicted ? cm.fp : cm.tn);
        }
    }
    result.accuracy = cm.accuracy();
    return result;
}

LinkStats link_stats(std::span<const Payload> sent, std::span<const DecodeReport> reports,
                     const LineCodeConfig& line_code)
{
    // Order-preserving alignment. Exact matches are maximised first (an LCS),
    // then the number of paired reports; skipping either side scores 0.
    // Without missing or spurious reports this is index-by-index pairing.
    constexpr std::uint64_t kExact = (std::uint64_t{1} << 32) + 1;
    constexpr std::uint64_t kPair = 1;
    const std::size_t n = sent.size();
    const std::size_t m = reports.size();
    const auto exact = [&](std::size_t i, std::size_t j) {
        return reports[j].status == DecodeStatus::ok && reports[j].payload && *reports[j].payload == sent[i];
    };

    std::vector<std::uint64_t> score((n + 1) * (m + 1), 0);
    const auto at = [&](std::size_t i, std::size_t j) -> std::uint64_t& { return score[i * (m + 1) + j]; };
    for (std::size_t i = n; i-- > 0;)
    {
        for (std::size_t j = m; j-- > 0;)
        {
            const std::uint64_t diagonal = at(i + 1, j + 1) + (exact(i, j) ? kExact : kPair);
            at(i, j) = std::max({diagonal, at(i, j + 1), at(i + 1, j)});
        }
    }

    LinkStats stats;
    stats.messages_total = n;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n && j < m)
    {
        const bool is_exact = exact(i, j);
        if (at(i, j) == at(i + 1, j + 1) + (is_exact ? kExact : kPair))
        {
            if (is_exact)
            {
                ++stats.messages_ok;
            }
            if (reports[j].bits.size() == kPacketBits)
            {
                const Packet expected = encode_packet(sent[i], line_code);
                for (std::size_t k = 0; k < kPacketBits; ++k)
                {
                    stats.bit_errors += reports[j].bits[k].value != expected.bits[k] ? 1 : 0;
                }
                stats.bits_total += kPacketBits;
            }
            ++i;
            ++j;
        }
        else if (at(i, j) == at(i, j + 1))
        {
            ++j;
        }
        else
        {
            ++i;
        }
    }
    finalize(stats);
    return stats;
}

}  // namespace blinklink
