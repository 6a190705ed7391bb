#include "blinklink/harness.hpp"

#include "blinklink/ecc.hpp"
#include "blinklink/error.hpp"
#include "blinklink/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace blinklink {

namespace {

std::uint64_t count_ecc_data_ok(std::span<const std::uint8_t> data, std::span<const DecodeReport> reports)
{
    // Re-run the alignment at the datum level: a report counts when its
    // payload decodes (clean or corrected) to the datum that was sent.
    std::vector<Payload> sent;
    sent.reserve(data.size());
    for (const std::uint8_t d : data)
    {
        sent.push_back(Payload{d});
    }
    std::vector<DecodeReport> recovered;
    recovered.reserve(reports.size());
    for (const DecodeReport& report : reports)
    {
        DecodeReport r;
        r.status = DecodeStatus::framing_error;
        if (report.payload)
        {
            const EccResult ecc = ecc_decode(report.payload->value);
            if (ecc.data)
            {
                r.status = DecodeStatus::ok;
                r.payload = Payload{*ecc.data};
            }
        }
        recovered.push_back(std::move(r));
    }
    return link_stats(sent, recovered).messages_ok;
}

TrialResult run_trial(const ExperimentConfig& config, const LedWaveform& waveform, std::span<const Payload> sent,
                      std::span<const std::uint8_t> data, std::size_t trial)
{
    TrialResult result;
    ChannelConfig channel = config.channel;
    channel.seed = config.channel.seed + trial;
    result.seed = channel.seed;

    const FrameScores scores = sample_scores(waveform, channel);
    result.reports = decode_stream(scores, config.decoder);
    result.stats = link_stats(sent, result.reports, config.line_code);
    if (config.ecc)
    {
        result.ecc_data_ok = count_ecc_data_ok(data, result.reports);
    }
    return result;
}

void append_stats_row(std::ostringstream& out, const LinkStats& stats)
{
    out << stats.messages_total << ',' << stats.messages_ok << ',' << format_real(stats.message_success_rate) << ','
        << stats.bit_errors << ',' << stats.bits_total << ',' << format_real(stats.ber);
}

}  // namespace

std::vector<Payload> transmitted_payloads(const ExperimentConfig& config)
{
    std::vector<Payload> payloads;
    for (const std::uint8_t value : config.payload_set.expand(config.ecc))
    {
        payloads.push_back(config.ecc ? Payload{ecc_encode(value).byte} : Payload{value});
    }
    return payloads;
}

ExperimentResult simulate_experiment(const ExperimentConfig& config)
{
    config.validate();
    DecoderConfig decoder = config.decoder;
    decoder.line_code = config.line_code;
    ExperimentConfig effective = config;
    effective.decoder = decoder;

    const std::vector<std::uint8_t> data = config.payload_set.expand(config.ecc);
    const std::vector<Payload> sent = transmitted_payloads(config);
    const LedWaveform waveform = encode_message_stream(sent, config.line_code);

    const auto trials = static_cast<std::size_t>(config.trials);
    std::vector<TrialResult> results(trials);
    const unsigned hardware = std::max(1U, std::thread::hardware_concurrency());
    const auto workers =
        static_cast<std::size_t>(std::min<std::size_t>(trials, config.threads == 0 ? hardware : config.threads));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto work = [&] {
        for (std::size_t t = next++; t < trials; t = next++)
        {
            try
            {
                results[t] = run_trial(effective, waveform, sent, data, t);
            }
            catch (...)
            {
                const std::lock_guard lock(failure_mutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers <= 1)
    {
        work();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
        {
            pool.emplace_back(work);
        }
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }

    ExperimentResult result;
    for (const TrialResult& trial : results)
    {
        result.stats += trial.stats;
        if (trial.ecc_data_ok)
        {
            result.ecc_data_ok = result.ecc_data_ok.value_or(0) + *trial.ecc_data_ok;
        }
    }
    result.trials = std::move(results);
    return result;
}

std::string stats_csv(const ExperimentConfig& config, const ExperimentResult& result)
{
    std::ostringstream out;
    out << "trials,messages_total,messages_ok,message_success_rate,bit_errors,bits_total,ber";
    if (config.ecc)
    {
        out << ",ecc_data_ok";
    }
    out << '\n' << config.trials << ',';
    append_stats_row(out, result.stats);
    if (config.ecc)
    {
        out << ',' << result.ecc_data_ok.value_or(0);
    }
    out << '\n';
    return out.str();
}

std::string reports_jsonl(const ExperimentConfig& config, const ExperimentResult& result)
{
    std::ostringstream out;
    for (std::size_t t = 0; t < result.trials.size(); ++t)
    {
        for (const DecodeReport& report : result.trials[t].reports)
        {
            auto j = report_to_json(report, config.ecc);
            j["trial"] = t;
            out << j.dump() << '\n';
        }
    }
    return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    ExperimentResult result = simulate_experiment(config);
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec)
    {
        throw IoError("cannot create output directory '" + config.output_dir.string() + "': " + ec.message());
    }
    write_file(config.output_dir / "reports.jsonl", reports_jsonl(config, result));
    write_file(config.output_dir / "stats.csv", stats_csv(config, result));
    return result;
}

SweepResult run_sweep(const SweepSpec& spec)
{
    spec.validate();
    SweepResult result;
    result.parameter = spec.parameter;
    for (const double value : spec.grid)
    {
        ExperimentConfig config = spec.base;
        switch (spec.parameter)
        {
        case SweepParameter::flip_p:
            std::get<FlipModel>(config.channel.score_model).p = value;
            break;
        case SweepParameter::drift:
            config.channel.drift = value;
            break;
        case SweepParameter::drop_prob:
            config.channel.drop_prob = value;
            break;
        }
        result.rows.push_back({value, simulate_experiment(config).stats});
    }

    if (spec.parameter != SweepParameter::drift)
    {
        for (std::size_t i = 1; i < result.rows.size(); ++i)
        {
            const LinkStats& prev = result.rows[i - 1].stats;
            const LinkStats& cur = result.rows[i].stats;
            const auto variance = [](const LinkStats& s) {
                const double n = static_cast<double>(std::max<std::uint64_t>(s.messages_total, 1));
                return s.message_success_rate * (1.0 - s.message_success_rate) / n;
            };
            const double noise = 3.0 * std::sqrt(variance(prev) + variance(cur)) +
                                 1.0 / static_cast<double>(std::max<std::uint64_t>(cur.messages_total, 1));
            if (cur.message_success_rate > prev.message_success_rate + noise)
            {
                result.warnings.push_back("success rate rises from " + format_real(prev.message_success_rate) +
                                          " to " + format_real(cur.message_success_rate) + " as " +
                                          to_string(spec.parameter) + " goes " +
                                          format_real(result.rows[i - 1].value) + " -> " +
                                          format_real(result.rows[i].value));
            }
        }
    }
    return result;
}

std::string sweep_csv(const SweepResult& result)
{
    std::ostringstream out;
    out << to_string(result.parameter)
        << ",messages_total,messages_ok,message_success_rate,bit_errors,bits_total,ber\n";
    for (const SweepRow& row : result.rows)
    {
        out << format_real(row.value) << ',';
        append_stats_row(out, row.stats);
        out << '\n';
    }
    return out.str();
}

}  // namespace blinklink
