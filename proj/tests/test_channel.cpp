#include "blinklink/channel.hpp"
#include "blinklink/error.hpp"
#include "blinklink/metrics.hpp"

#include <doctest.h>

#include <cmath>

using namespace blinklink;

namespace {

LedWaveform packet_wave(std::uint8_t value)
{
    return packet_to_waveform(encode_packet(Payload{value}));
}

std::vector<std::size_t> run_lengths(const std::vector<bool>& frames)
{
    std::vector<std::size_t> runs;
    for (std::size_t i = 0; i < frames.size();)
    {
        std::size_t j = i;
        while (j < frames.size() && frames[j] == frames[i])
        {
            ++j;
        }
        runs.push_back(j - i);
        i = j;
    }
    return runs;
}

}  // namespace

TEST_CASE("apply_timing identity and pure shift")
{
    const LedWaveform wf = packet_wave(0xA5);
    ChannelConfig config;
    CHECK(apply_timing(wf, config) == wf);

    config.lead_offset = 7;
    const LedWaveform shifted = apply_timing(wf, config);
    REQUIRE(shifted.size() == wf.size() + 7);
    for (std::size_t i = 0; i < 7; ++i)
    {
        CHECK_FALSE(shifted.frames[i]);
    }
    CHECK(std::equal(wf.frames.begin(), wf.frames.end(), shifted.frames.begin() + 7));
}

TEST_CASE("apply_timing drift resamples by floor division")
{
    // 0x55 packet: 1,00,1,0,1,0,1,0,1,0,1; every run is one bit except the second.
    const LedWaveform wf = packet_wave(0x55);
    ChannelConfig config;
    config.drift = 1.2;
    const LedWaveform out = apply_timing(wf, config);

    // Oracle: count i with floor(i / 1.2) < 144, i.e. i < 172.8.
    std::size_t expected = 0;
    while (static_cast<std::size_t>(std::floor(static_cast<double>(expected) / 1.2)) < wf.size())
    {
        ++expected;
    }
    CHECK(expected == 173);
    CHECK(out.size() == expected);
    // A bit covers output frames [14.4k, 14.4(k+1)): 14 or 15 of them.
    const auto runs = run_lengths(out.frames);
    REQUIRE(runs.size() == 11);
    for (std::size_t r = 0; r < runs.size(); ++r)
    {
        if (r == 1)
        {
            CHECK((runs[r] == 28 || runs[r] == 29));
        }
        else
        {
            CHECK((runs[r] == 14 || runs[r] == 15));
        }
    }

    config.drift = 0.9;
    CHECK(apply_timing(wf, config).size() == static_cast<std::size_t>(std::ceil(144 * 0.9)));
}

TEST_CASE("frame drops shorten the stream")
{
    const LedWaveform wf = encode_message_stream(full_payload_range());
    ChannelConfig config;
    config.drop_prob = 0.1;
    config.seed = 3;
    const LedWaveform out = apply_timing(wf, config);
    const double kept = static_cast<double>(out.size()) / static_cast<double>(wf.size());
    const double sigma = std::sqrt(0.1 * 0.9 / static_cast<double>(wf.size()));
    CHECK(std::abs(kept - 0.9) < 4 * sigma);
    CHECK(apply_timing(wf, config) == out);
}

TEST_CASE("flip channel extremes")
{
    const LedWaveform wf = packet_wave(0xA5);
    ChannelConfig config;
    config.score_model = FlipModel{0.0};
    const FrameScores clean = sample_scores(wf, config);
    REQUIRE(clean.size() == wf.size());
    REQUIRE(clean.truth.has_value());
    for (std::size_t i = 0; i < wf.size(); ++i)
    {
        CHECK(clean.scores[i] == (wf.frames[i] ? 1.0 : 0.0));
        CHECK((*clean.truth)[i] == wf.frames[i]);
    }

    config.score_model = FlipModel{1.0};
    const FrameScores inverted = sample_scores(wf, config);
    for (std::size_t i = 0; i < wf.size(); ++i)
    {
        CHECK(inverted.scores[i] == (wf.frames[i] ? 0.0 : 1.0));
    }
}

TEST_CASE("flip channel error rate concentrates at p")
{
    // 10^6 frames of alternating LED state.
    LedWaveform wf;
    wf.frames.resize(1'000'000);
    for (std::size_t i = 0; i < wf.frames.size(); ++i)
    {
        wf.frames[i] = (i / 12) % 2 == 0;
    }
    ChannelConfig config;
    config.score_model = FlipModel{0.049};
    config.seed = 11;
    const FrameScores scores = sample_scores(wf, config);
    const AccuracyResult acc = accuracy_at(scores.scores, *scores.truth, 0.5);

    const double n = 1e6;
    const double three_sigma = 3.0 * std::sqrt(0.049 * 0.951 / n);
    CHECK(std::abs((1.0 - acc.accuracy) - 0.049) < three_sigma);
    CHECK(std::abs(acc.accuracy - 0.951) <= 0.002);
}

TEST_CASE("sampling is reproducible from the seed")
{
    const LedWaveform wf = encode_message_stream(full_payload_range());
    ChannelConfig config;
    config.score_model = BetaModel{8.0, 2.0};
    config.drop_prob = 0.01;
    config.drift = 1.01;
    config.seed = 99;
    const FrameScores a = sample_scores(wf, config);
    const FrameScores b = sample_scores(wf, config);
    CHECK(a.scores == b.scores);
    CHECK(*a.truth == *b.truth);

    config.seed = 100;
    CHECK(sample_scores(wf, config).scores != a.scores);

    for (const double s : a.scores)
    {
        CHECK((s >= 0.0 && s <= 1.0));
    }
}

TEST_CASE("beta model closed forms agree with sampling")
{
    const BetaModel model{6.0, 2.0};
    const LabelledScores sample = draw_labelled_scores(model, 200'000, 5);
    const double empirical_acc = accuracy_at(sample.scores, sample.labels, 0.5).accuracy;
    const double empirical_auc = roc_auc(sample.scores, sample.labels).auc;
    CHECK(beta_accuracy(model) == doctest::Approx(empirical_acc).epsilon(0.003));
    CHECK(beta_auc(model) == doctest::Approx(empirical_auc).epsilon(0.003));

    // Uniform scores: chance level.
    CHECK(beta_auc(BetaModel{1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(beta_accuracy(BetaModel{1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-12));
    // Nearly separable.
    CHECK(beta_auc(BetaModel{400.0, 1.0}) > 0.9999);
}

TEST_CASE("label swap with score reflection leaves AUC unchanged")
{
    const LabelledScores sample = draw_labelled_scores(BetaModel{5.0, 1.5}, 20'000, 17);
    std::vector<double> reflected;
    std::vector<bool> swapped;
    for (std::size_t i = 0; i < sample.scores.size(); ++i)
    {
        reflected.push_back(1.0 - sample.scores[i]);
        swapped.push_back(!sample.labels[i]);
    }
    CHECK(roc_auc(reflected, swapped).auc == doctest::Approx(roc_auc(sample.scores, sample.labels).auc).epsilon(1e-12));
}

TEST_CASE("calibration hits the classifier targets")
{
    const CalibrationResult full = calibrate_score_model(0.9888, 0.951, 0.005);
    CHECK(std::abs(full.empirical_auc - 0.9888) <= 0.005);
    CHECK(std::abs(full.empirical_accuracy - 0.951) <= 0.005);
    CHECK(full.model.a_on > full.model.b_on);

    const CalibrationResult quantized = calibrate_score_model(0.9888 - 0.0009, 0.951, 0.005);
    CHECK(std::abs(quantized.empirical_auc - 0.9879) <= 0.005);

    // Deterministic search.
    const CalibrationResult again = calibrate_score_model(0.9888, 0.951, 0.005);
    CHECK(again.model.a_on == full.model.a_on);
    CHECK(again.model.b_on == full.model.b_on);
    CHECK(again.empirical_auc == full.empirical_auc);
}

TEST_CASE("calibration errors")
{
    CHECK_THROWS_AS(static_cast<void>(calibrate_score_model(0.9, 0.95, 0.005)), ConfigError);
    CHECK_THROWS_AS(static_cast<void>(calibrate_score_model(1.0, 0.95, 0.005)), ConfigError);
    CHECK_THROWS_AS(static_cast<void>(calibrate_score_model(0.9, 0.5, 0.005)), ConfigError);
    // The mirrored Beta pair cannot reach AUC 0.9888 at accuracy 0.951 this tightly.
    CHECK_THROWS_AS(static_cast<void>(calibrate_score_model(0.9888, 0.951, 1e-4)), CalibrationFailed);
}

TEST_CASE("channel config validation")
{
    ChannelConfig config;
    CHECK_NOTHROW(config.validate());
    config.drift = 1.2;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    CHECK_THROWS_AS(static_cast<void>(sample_scores(packet_wave(1), config)), ConfigError);
    config = {};
    config.drop_prob = 1.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.score_model = FlipModel{1.5};
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.score_model = BetaModel{0.0, 1.0};
    CHECK_THROWS_AS(config.validate(), ConfigError);
}
