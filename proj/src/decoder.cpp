#include "blinklink/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace blinklink {

void DecoderConfig::validate() const
{
    line_code.validate();
    if (!(threshold > 0.0 && threshold < 1.0))
    {
        throw ConfigError("threshold must lie in (0, 1)");
    }
    if (!(min_correlation > 0.0 && min_correlation <= 1.0))
    {
        throw ConfigError("min_correlation must lie in (0, 1]");
    }
    if (search_step < 1)
    {
        throw ConfigError("search_step must be >= 1");
    }
    if (!(min_bit_confidence >= 0.0 && min_bit_confidence <= 1.0))
    {
        throw ConfigError("min_bit_confidence must lie in [0, 1]");
    }
    if (!(rate_search >= 0.0 && rate_search < 0.5))
    {
        throw ConfigError("rate_search must lie in [0, 0.5)");
    }
}

std::string_view to_string(DecodeStatus status)
{
    switch (status)
    {
    case DecodeStatus::ok:
        return "ok";
    case DecodeStatus::framing_error:
        return "framing_error";
    case DecodeStatus::low_confidence:
        return "low_confidence";
    case DecodeStatus::no_sync:
        return "no_sync";
    }
    return "unknown";
}

namespace {

constexpr int kRateGridHalfSteps = 20;

std::size_t round_half_up(double x)
{
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

double level(bool on)
{
    return on ? 1.0 : -1.0;
}

double centered(double score)
{
    return 2.0 * score - 1.0;
}

/// Normalized correlation of the template against centered scores at `offset`.
double correlation_at(std::span<const double> scores, std::span<const double> tmpl, double tmpl_norm,
                      std::size_t offset)
{
    double dot = 0.0;
    double energy = 0.0;
    for (std::size_t j = 0; j < tmpl.size(); ++j)
    {
        const double c = centered(scores[offset + j]);
        dot += tmpl[j] * c;
        energy += c * c;
    }
    if (energy <= 0.0)
    {
        return 0.0;
    }
    return dot / (tmpl_norm * std::sqrt(energy));
}

/// Correlation of the known parts of a packet (idle, start bits, stop bits)
/// laid out with a candidate frames-per-bit. Payload frames carry no weight.
double packet_frame_correlation(std::span<const double> scores, const LineCodeConfig& line_code,
                                std::size_t packet_start, double frames_per_bit)
{
    double dot = 0.0;
    double weight_energy = 0.0;
    double energy = 0.0;
    const auto add = [&](std::size_t begin, std::size_t end, double weight) {
        end = std::min(end, scores.size());
        for (std::size_t i = begin; i < end; ++i)
        {
            const double c = centered(scores[i]);
            dot += weight * c;
            weight_energy += weight * weight;
            energy += c * c;
        }
    };

    const auto idle = static_cast<std::size_t>(line_code.idle_frames);
    add(packet_start - idle, packet_start, -1.0);
    const auto edge = [&](std::size_t bit) {
        return round_half_up(static_cast<double>(packet_start) + static_cast<double>(bit) * frames_per_bit);
    };
    for (std::size_t k = 0; k < kStartBits; ++k)
    {
        add(edge(k), edge(k + 1), level(line_code.start_pattern[k]));
    }
    for (std::size_t k = 0; k < kStopBits; ++k)
    {
        const auto bit = kStartBits + kPayloadBits + k;
        add(edge(bit), edge(bit + 1), level(line_code.stop_pattern[k]));
    }
    if (energy <= 0.0 || weight_energy <= 0.0)
    {
        return 0.0;
    }
    return dot / std::sqrt(weight_energy * energy);
}

double refine_frames_per_bit(std::span<const double> scores, const DecoderConfig& config, std::size_t packet_start)
{
    const double nominal = config.line_code.frames_per_bit;
    double best_rate = nominal;
    double best_corr = packet_frame_correlation(scores, config.line_code, packet_start, nominal);
    // Nearest-to-nominal first so ties keep the smaller correction.
    for (int step = 1; step <= kRateGridHalfSteps; ++step)
    {
        for (const int sign : {-1, 1})
        {
            const double rate =
                nominal * (1.0 + sign * config.rate_search * static_cast<double>(step) / kRateGridHalfSteps);
            const double corr = packet_frame_correlation(scores, config.line_code, packet_start, rate);
            if (corr > best_corr)
            {
                best_corr = corr;
                best_rate = rate;
            }
        }
    }
    return best_rate;
}

enum class StepKind { report, no_sync, truncated, need_more };

struct Step
{
    StepKind kind = StepKind::no_sync;
    DecodeReport report;
    std::size_t next_cursor = 0;
};

struct SyncSearch
{
    StepKind kind = StepKind::no_sync;
    std::size_t offset = 0;
    double correlation = 0.0;
    double best_seen = 0.0;
};

/// First offset at or above min_correlation, then the best offset within one
/// bit period of it. A wider window would reach in-payload 0,0,1,0 runs, which
/// look exactly like idle followed by the start flag. With `final` unset, reports need_more whenever
/// frames not yet received could change the answer.
SyncSearch find_start_flag(std::span<const double> scores, const DecoderConfig& config, std::size_t search_from,
                           bool final)
{
    const std::vector<double> tmpl = start_flag_template(config);
    const double tmpl_norm =
        std::sqrt(std::inner_product(tmpl.begin(), tmpl.end(), tmpl.begin(), 0.0));
    const std::size_t length = tmpl.size();
    const auto step = static_cast<std::size_t>(config.search_step);
    const std::size_t n = scores.size();

    SyncSearch result;
    const auto no_result = [&] {
        result.kind = final ? StepKind::no_sync : StepKind::need_more;
        return result;
    };
    if (n < length)
    {
        return no_result();
    }

    std::size_t first = n;
    for (std::size_t offset = search_from; offset + length <= n; offset += step)
    {
        const double corr = correlation_at(scores, tmpl, tmpl_norm, offset);
        result.best_seen = std::max(result.best_seen, corr);
        if (corr >= config.min_correlation)
        {
            first = offset;
            break;
        }
    }
    if (first == n)
    {
        return no_result();
    }
    const auto window = static_cast<std::size_t>(config.line_code.frames_per_bit);
    if (!final && first + window + length > n)
    {
        result.kind = StepKind::need_more;
        return result;
    }

    result.kind = StepKind::report;
    result.offset = first;
    result.correlation = -2.0;
    for (std::size_t offset = first; offset <= first + window && offset + length <= n; offset += step)
    {
        const double corr = correlation_at(scores, tmpl, tmpl_norm, offset);
        if (corr > result.correlation)
        {
            result.correlation = corr;
            result.offset = offset;
        }
    }
    return result;
}

std::size_t frames_needed_for_packet(const DecoderConfig& config, std::size_t packet_start)
{
    const double longest_bit = config.line_code.frames_per_bit * (1.0 + config.rate_search);
    return packet_start + static_cast<std::size_t>(std::ceil(kPacketBits * longest_bit)) + 2;
}

Step decode_step(std::span<const double> scores, const DecoderConfig& config, std::size_t cursor, bool final)
{
    Step step;
    const SyncSearch sync = find_start_flag(scores, config, cursor, final);
    if (sync.kind != StepKind::report)
    {
        step.kind = sync.kind;
        return step;
    }

    ClockEstimate clock;
    clock.packet_start = sync.offset + static_cast<std::size_t>(config.line_code.idle_frames);
    clock.correlation = sync.correlation;
    if (!final && frames_needed_for_packet(config, clock.packet_start) > scores.size())
    {
        step.kind = StepKind::need_more;
        return step;
    }
    clock.frames_per_bit = refine_frames_per_bit(scores, config, clock.packet_start);

    PacketDecisions decisions{};
    try
    {
        decisions = estimate_bits(scores, clock, config);
    }
    catch (const Truncated&)
    {
        step.kind = final ? StepKind::truncated : StepKind::need_more;
        return step;
    }

    DecodeReport& report = step.report;
    report.clock = clock;
    report.bits.assign(decisions.begin(), decisions.end());
    std::array<bool, kPacketBits> values{};
    std::transform(decisions.begin(), decisions.end(), values.begin(),
                   [](const BitDecision& d) { return d.value; });

    const double fpb = clock.frames_per_bit;
    try
    {
        const Payload payload = decode_packet(values, config.line_code);
        const bool confident = std::all_of(decisions.begin(), decisions.end(), [&](const BitDecision& d) {
            return d.confidence >= config.min_bit_confidence;
        });
        report.status = confident ? DecodeStatus::ok : DecodeStatus::low_confidence;
        if (confident)
        {
            report.payload = payload;
        }
        const auto packet_end = round_half_up(static_cast<double>(clock.packet_start) + kPacketBits * fpb);
        step.next_cursor = packet_end - round_half_up(fpb / 2.0);
    }
    catch (const FramingError& error)
    {
        report.status = DecodeStatus::framing_error;
        report.framing = error.position();
        step.next_cursor = sync.offset + std::max<std::size_t>(1, round_half_up(fpb));
    }
    step.next_cursor = std::max(step.next_cursor, cursor + 1);
    step.kind = StepKind::report;
    return step;
}

}  // namespace

std::vector<double> start_flag_template(const DecoderConfig& config)
{
    const auto& line_code = config.line_code;
    std::vector<double> tmpl(static_cast<std::size_t>(line_code.idle_frames), -1.0);
    for (const bool bit : line_code.start_pattern)
    {
        tmpl.insert(tmpl.end(), static_cast<std::size_t>(line_code.frames_per_bit), level(bit));
    }
    return tmpl;
}

ClockEstimate recover_clock(std::span<const double> scores, const DecoderConfig& config, std::size_t search_from)
{
    const SyncSearch sync = find_start_flag(scores, config, search_from, true);
    if (sync.kind != StepKind::report)
    {
        throw NoSync("best start-flag correlation " + std::to_string(sync.best_seen) + " below " +
                     std::to_string(config.min_correlation));
    }
    ClockEstimate clock;
    clock.packet_start = sync.offset + static_cast<std::size_t>(config.line_code.idle_frames);
    clock.correlation = sync.correlation;
    clock.frames_per_bit = refine_frames_per_bit(scores, config, clock.packet_start);
    return clock;
}

ClockEstimate recover_clock(const FrameScores& scores, const DecoderConfig& config)
{
    return recover_clock(scores.scores, config, 0);
}

PacketDecisions estimate_bits(std::span<const double> scores, const ClockEstimate& clock,
                              const DecoderConfig& config)
{
    const double fpb = clock.frames_per_bit;
    const auto edge = [&](std::size_t bit) {
        return round_half_up(static_cast<double>(clock.packet_start) + static_cast<double>(bit) * fpb);
    };

    PacketDecisions decisions{};
    for (std::size_t k = 0; k < kPacketBits; ++k)
    {
        const std::size_t begin = edge(k);
        const std::size_t end = std::min(edge(k + 1), scores.size());
        const std::size_t available = end > begin ? end - begin : 0;
        if (available == 0 || static_cast<double>(available) < fpb / 2.0)
        {
            throw Truncated("bit " + std::to_string(k) + " has " + std::to_string(available) + " frames");
        }
        const double sum = std::accumulate(scores.begin() + static_cast<std::ptrdiff_t>(begin),
                                           scores.begin() + static_cast<std::ptrdiff_t>(end), 0.0);
        BitDecision& d = decisions[k];
        d.mean_score = sum / static_cast<double>(available);
        d.value = d.mean_score >= config.threshold;
        d.confidence = std::abs(2.0 * d.mean_score - 1.0);
    }
    return decisions;
}

PacketDecisions estimate_bits(const FrameScores& scores, const ClockEstimate& clock, const DecoderConfig& config)
{
    return estimate_bits(std::span<const double>(scores.scores), clock, config);
}

std::vector<DecodeReport> decode_stream(const FrameScores& scores, const DecoderConfig& config)
{
    config.validate();
    std::vector<DecodeReport> reports;
    std::size_t cursor = 0;
    for (;;)
    {
        Step step = decode_step(scores.scores, config, cursor, true);
        if (step.kind != StepKind::report)
        {
            break;
        }
        reports.push_back(std::move(step.report));
        cursor = step.next_cursor;
    }
    return reports;
}

DecodeReport decode_single(const FrameScores& scores, const DecoderConfig& config)
{
    config.validate();
    Step step = decode_step(scores.scores, config, 0, true);
    if (step.kind == StepKind::report)
    {
        return std::move(step.report);
    }
    return DecodeReport{};
}

StreamDecoder::StreamDecoder(DecoderConfig config) : config_(std::move(config))
{
    config_.validate();
}

std::vector<DecodeReport> StreamDecoder::push(std::span<const double> scores)
{
    buffer_.insert(buffer_.end(), scores.begin(), scores.end());
    return drain(false);
}

std::vector<DecodeReport> StreamDecoder::finish()
{
    return drain(true);
}

std::vector<DecodeReport> StreamDecoder::drain(bool final)
{
    std::vector<DecodeReport> reports;
    while (!done_)
    {
        Step step = decode_step(buffer_, config_, cursor_, final);
        if (step.kind == StepKind::report)
        {
            reports.push_back(std::move(step.report));
            cursor_ = step.next_cursor;
            continue;
        }
        if (step.kind != StepKind::need_more)
        {
            done_ = true;
        }
        break;
    }
    return reports;
}

}  // namespace blinklink
