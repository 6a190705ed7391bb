#include "blinklink/decoder.hpp"
#include "blinklink/metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace blinklink;

namespace {

// O(P*N) pair count, the definition of AUC.
double brute_force_auc(const std::vector<double>& scores, const std::vector<bool>& labels)
{
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
    {
        if (!labels[i])
        {
            continue;
        }
        for (std::size_t j = 0; j < scores.size(); ++j)
        {
            if (labels[j])
            {
                continue;
            }
            pairs += 1.0;
            wins += scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
        }
    }
    return wins / pairs;
}

DecodeReport ok_report(Payload p)
{
    DecodeReport r;
    r.status = DecodeStatus::ok;
    r.payload = p;
    const Packet packet = encode_packet(p);
    for (const bool b : packet.bits)
    {
        r.bits.push_back(BitDecision{b, b ? 1.0 : 0.0, 1.0});
    }
    return r;
}

}  // namespace

TEST_CASE("auc extremes")
{
    const std::vector<double> scores{0.1, 0.2, 0.3, 0.7, 0.8, 0.9};
    const std::vector<bool> labels{false, false, false, true, true, true};
    CHECK(roc_auc(scores, labels).auc == 1.0);

    std::vector<bool> inverted;
    for (const bool b : labels)
    {
        inverted.push_back(!b);
    }
    CHECK(roc_auc(scores, inverted).auc == 0.0);

    const std::vector<double> constant(6, 0.4);
    CHECK(roc_auc(constant, labels).auc == 0.5);
}

TEST_CASE("auc of random scores is near chance")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uniform;
    std::vector<double> scores;
    std::vector<bool> labels;
    for (int i = 0; i < 100'000; ++i)
    {
        scores.push_back(uniform(rng));
        labels.push_back(i % 2 == 0);
    }
    CHECK(std::abs(roc_auc(scores, labels).auc - 0.5) < 0.01);
}

TEST_CASE("auc equals the pair count on random instances")
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial)
    {
        const std::size_t n = 2 + rng() % 200;
        // Coarse scores force plenty of ties.
        const int levels = 1 + static_cast<int>(rng() % 20);
        std::vector<double> scores;
        std::vector<bool> labels;
        for (std::size_t i = 0; i < n; ++i)
        {
            scores.push_back(static_cast<double>(rng() % static_cast<unsigned>(levels)) / levels);
            labels.push_back(rng() % 2 == 0);
        }
        labels[0] = true;
        labels[1] = false;
        CHECK(roc_auc(scores, labels).auc == brute_force_auc(scores, labels));
    }
}

TEST_CASE("auc is invariant under strictly increasing transforms")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uniform;
    std::vector<double> scores;
    std::vector<double> transformed;
    std::vector<bool> labels;
    for (int i = 0; i < 500; ++i)
    {
        const bool label = rng() % 2 == 0;
        const double s = std::clamp(uniform(rng) + (label ? 0.2 : 0.0), 0.0, 1.0);
        scores.push_back(s);
        transformed.push_back(std::exp(3.0 * s) - 7.0);
        labels.push_back(label);
    }
    CHECK(roc_auc(scores, labels).auc == roc_auc(transformed, labels).auc);
}

TEST_CASE("roc curve shape")
{
    std::mt19937_64 rng(9);
    std::vector<double> scores;
    std::vector<bool> labels;
    for (int i = 0; i < 300; ++i)
    {
        const bool label = rng() % 3 == 0;
        scores.push_back(static_cast<double>(rng() % 50 + (label ? 15 : 0)) / 64.0);
        labels.push_back(label);
    }
    const RocCurve curve = roc_auc(scores, labels);
    REQUIRE(curve.points.size() >= 2);
    CHECK(curve.points.front().fpr == 0.0);
    CHECK(curve.points.front().tpr == 0.0);
    CHECK(curve.points.back().fpr == 1.0);
    CHECK(curve.points.back().tpr == 1.0);
    std::vector<double> distinct = scores;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    CHECK(curve.points.size() == distinct.size() + 1);

    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i)
    {
        CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
        CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
        area += (curve.points[i].fpr - curve.points[i - 1].fpr) *
                (curve.points[i].tpr + curve.points[i - 1].tpr) / 2.0;
    }
    CHECK(area == doctest::Approx(curve.auc).epsilon(1e-12));
}

TEST_CASE("auc input errors")
{
    const std::vector<double> scores{0.1, 0.9};
    CHECK_THROWS_AS(static_cast<void>(roc_auc(scores, {true, true})), DegenerateLabels);
    CHECK_THROWS_AS(static_cast<void>(roc_auc(scores, {false, false})), DegenerateLabels);
    CHECK_THROWS_AS(static_cast<void>(roc_auc(scores, {true})), ConfigError);
}

TEST_CASE("accuracy and confusion")
{
    const std::vector<double> scores{0.9, 0.6, 0.5, 0.4, 0.2, 0.7};
    const std::vector<bool> labels{true, false, true, true, false, true};
    const AccuracyResult r = accuracy_at(scores, labels, 0.5);
    CHECK(r.confusion.tp == 3);
    CHECK(r.confusion.fp == 1);
    CHECK(r.confusion.tn == 1);
    CHECK(r.confusion.fn == 1);
    CHECK(r.accuracy == doctest::Approx(4.0 / 6.0));
    CHECK(r.confusion.total() == 6);
    CHECK_THROWS_AS(static_cast<void>(accuracy_at(std::vector<double>{}, {}, 0.5)), EmptyInput);
}

TEST_CASE("link_stats on perfect and empty decodes")
{
    const std::vector<Payload> sent = full_payload_range();
    std::vector<DecodeReport> reports;
    for (const Payload p : sent)
    {
        reports.push_back(ok_report(p));
    }
    const LinkStats perfect = link_stats(sent, reports);
    CHECK(perfect.messages_ok == 256);
    CHECK(perfect.messages_total == 256);
    CHECK(perfect.message_success_rate == 1.0);
    CHECK(perfect.bit_errors == 0);
    CHECK(perfect.bits_total == 256 * 12);
    CHECK(perfect.ber == 0.0);

    const LinkStats none = link_stats(sent, std::vector<DecodeReport>{});
    CHECK(none.messages_ok == 0);
    CHECK(none.message_success_rate == 0.0);
    CHECK(none.bits_total == 0);
    CHECK(none.ber == 0.0);
}

TEST_CASE("link_stats counts a flipped payload bit")
{
    const std::vector<Payload> sent{Payload{0x10}, Payload{0x20}, Payload{0x30}};
    std::vector<DecodeReport> reports{ok_report(sent[0]), ok_report(Payload{0x21}), ok_report(sent[2])};
    const LinkStats s = link_stats(sent, reports);
    CHECK(s.messages_ok == 2);
    CHECK(s.bit_errors == 1);
    CHECK(s.bits_total == 36);
    CHECK(s.ber == doctest::Approx(1.0 / 36.0));
    CHECK(s.message_success_rate == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("link_stats aligns past missing and spurious reports")
{
    const std::vector<Payload> sent{Payload{1}, Payload{2}, Payload{3}, Payload{4}};
    // Packet 2 lost, spurious report inserted before packet 4.
    std::vector<DecodeReport> reports{ok_report(Payload{1}), ok_report(Payload{3}), ok_report(Payload{0x99}),
                                      ok_report(Payload{4})};
    const LinkStats s = link_stats(sent, reports);
    CHECK(s.messages_ok == 3);
    CHECK(s.messages_total == 4);
}

TEST_CASE("link_stats accumulates")
{
    LinkStats a;
    a.messages_ok = 3;
    a.messages_total = 4;
    a.bit_errors = 2;
    a.bits_total = 48;
    LinkStats b;
    b.messages_ok = 1;
    b.messages_total = 4;
    b.bits_total = 48;
    a += b;
    CHECK(a.messages_ok == 4);
    CHECK(a.messages_total == 8);
    CHECK(a.message_success_rate == 0.5);
    CHECK(a.ber == doctest::Approx(2.0 / 96.0));
}
