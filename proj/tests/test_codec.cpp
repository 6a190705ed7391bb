#include "blinklink/codec.hpp"
#include "blinklink/error.hpp"

#include <doctest.h>

#include <random>
#include <set>
#include <vector>

using namespace blinklink;

namespace {

std::vector<bool> bits_of(const Packet& packet)
{
    return std::vector<bool>(packet.bits.begin(), packet.bits.end());
}

}  // namespace

TEST_CASE("encode_packet lays out start, payload, stop")
{
    CHECK(bits_of(encode_packet(Payload{0x00})) == std::vector<bool>{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1});
    CHECK(bits_of(encode_packet(Payload{0xFF})) == std::vector<bool>{1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1});

    const Packet a5 = encode_packet(Payload{0xA5});
    CHECK(std::vector<bool>(a5.bits.begin() + 2, a5.bits.begin() + 10) ==
          std::vector<bool>{1, 0, 1, 0, 0, 1, 0, 1});

    LineCodeConfig lsb;
    lsb.bit_order = BitOrder::lsb_first;
    const Packet a5_lsb = encode_packet(Payload{0xA5}, lsb);
    CHECK(std::vector<bool>(a5_lsb.bits.begin() + 2, a5_lsb.bits.begin() + 10) ==
          std::vector<bool>{1, 0, 1, 0, 0, 1, 0, 1});
    const Packet x01_lsb = encode_packet(Payload{0x01}, lsb);
    CHECK(x01_lsb.bits[2]);
    CHECK_FALSE(x01_lsb.bits[9]);
}

TEST_CASE("decode_packet inverts encode and checks framing")
{
    const std::vector<bool> zero{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
    const std::array<bool, 12> zero_arr{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
    CHECK(decode_packet(zero_arr) == Payload{0x00});

    SUBCASE("bad start")
    {
        std::array<bool, 12> bits = zero_arr;
        bits[0] = false;
        try
        {
            static_cast<void>(decode_packet(bits));
            FAIL("expected FramingError");
        }
        catch (const FramingError& e)
        {
            CHECK(e.position() == FramingPosition::start);
        }
    }
    SUBCASE("bad stop")
    {
        std::array<bool, 12> bits = zero_arr;
        bits[11] = false;
        try
        {
            static_cast<void>(decode_packet(bits));
            FAIL("expected FramingError");
        }
        catch (const FramingError& e)
        {
            CHECK(e.position() == FramingPosition::stop);
        }
    }
    SUBCASE("wrong length")
    {
        const std::array<bool, 11> short_bits{};
        CHECK_THROWS_AS(static_cast<void>(decode_packet(short_bits)), LengthError);
        const std::array<bool, 13> long_bits{};
        CHECK_THROWS_AS(static_cast<void>(decode_packet(long_bits)), LengthError);
    }
}

TEST_CASE("round trip over every payload and randomly drawn valid line codes")
{
    std::mt19937 rng(20240611);
    const std::vector<BitPair> patterns{{true, false}, {false, true}, {true, true}};
    const std::vector<BitPair> stops{{false, true}, {true, false}, {true, true}, {false, false}};
    for (int trial = 0; trial < 50; ++trial)
    {
        LineCodeConfig config;
        config.start_pattern = patterns[rng() % patterns.size()];
        config.stop_pattern = stops[rng() % stops.size()];
        config.bit_order = rng() % 2 ? BitOrder::msb_first : BitOrder::lsb_first;
        REQUIRE_NOTHROW(config.validate());

        std::set<std::array<bool, 12>> seen;
        for (const Payload p : full_payload_range())
        {
            const Packet packet = encode_packet(p, config);
            CHECK(decode_packet(packet.bits, config) == p);
            seen.insert(packet.bits);
        }
        // Injective: 256 distinct packets.
        CHECK(seen.size() == 256);
    }
}

TEST_CASE("packet waveform timing")
{
    const LineCodeConfig defaults;
    const LedWaveform wf = packet_to_waveform(encode_packet(Payload{0x5A}), defaults);
    CHECK(wf.size() == 144);
    CHECK(wf.duration() == doctest::Approx(4.8));
    CHECK(defaults.bit_rate() == doctest::Approx(2.5));
    CHECK(defaults.bit_duration() == doctest::Approx(0.4));

    // Every bit held for exactly frames_per_bit frames.
    const Packet packet = encode_packet(Payload{0x5A});
    for (std::size_t i = 0; i < wf.size(); ++i)
    {
        CHECK(wf.frames[i] == packet.bits[i / 12]);
    }

    LineCodeConfig one;
    one.frames_per_bit = 1;
    const LedWaveform identity = packet_to_waveform(packet, one);
    CHECK(identity.frames == std::vector<bool>(packet.bits.begin(), packet.bits.end()));
}

TEST_CASE("message stream composition")
{
    const std::vector<Payload> one{Payload{0x42}};
    CHECK(encode_message_stream(one).size() == 192);

    const auto all = full_payload_range();
    const LedWaveform full = encode_message_stream(all);
    CHECK(full.size() == 24 + 256 * (144 + 24));

    LineCodeConfig packed;
    packed.idle_frames = 0;
    const std::vector<Payload> two{Payload{0x01}, Payload{0x02}};
    const LedWaveform back_to_back = encode_message_stream(two, packed);
    CHECK(back_to_back.size() == 288);
    const LedWaveform first = packet_to_waveform(encode_packet(two[0], packed), packed);
    CHECK(std::equal(first.frames.begin(), first.frames.end(), back_to_back.frames.begin()));

    CHECK_THROWS_AS(static_cast<void>(encode_message_stream(std::vector<Payload>{})), EmptyInput);
}

TEST_CASE("every packet boundary carries a rising edge out of idle")
{
    const auto all = full_payload_range();
    const LineCodeConfig config;
    const LedWaveform wf = encode_message_stream(all, config);
    for (std::size_t k = 0; k < all.size(); ++k)
    {
        const std::size_t start = 24 + k * 168;
        CHECK_FALSE(wf.frames[start - 1]);
        CHECK(wf.frames[start]);
    }
}

TEST_CASE("line code validation")
{
    LineCodeConfig config;
    CHECK_NOTHROW(config.validate());
    config.frames_per_bit = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.fps = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.start_pattern = {false, false};
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.idle_frames = -1;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("SOS constant")
{
    CHECK(kSosPayload.value == 0x53);
}
