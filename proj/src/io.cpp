#include "blinklink/io.hpp"

#include "blinklink/ecc.hpp"
#include "blinklink/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace blinklink {

namespace {

std::string trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
    {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

double parse_real(std::string_view text, std::string_view what)
{
    const std::string s = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    {
        throw ConfigError("invalid " + std::string(what) + ": '" + s + "'");
    }
    return value;
}

}  // namespace

std::string format_real(double value)
{
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

void write_waveform(std::ostream& out, const LedWaveform& waveform)
{
    out << "fps=" << format_real(waveform.fps) << '\n';
    for (const bool frame : waveform.frames)
    {
        out << (frame ? '1' : '0') << '\n';
    }
}

LedWaveform read_waveform(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
    {
        throw ConfigError("waveform input is empty");
    }
    line = trim(line);
    if (line.rfind("fps=", 0) != 0)
    {
        throw ConfigError("waveform must start with 'fps=<real>'");
    }
    LedWaveform waveform;
    waveform.fps = parse_real(std::string_view(line).substr(4), "fps");
    if (!(waveform.fps > 0.0))
    {
        throw ConfigError("fps must be > 0");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        line = trim(line);
        if (line.empty())
        {
            continue;
        }
        if (line != "0" && line != "1")
        {
            throw ConfigError("waveform line " + std::to_string(line_no) + " is not 0 or 1");
        }
        waveform.frames.push_back(line == "1");
    }
    return waveform;
}

void write_scores_csv(std::ostream& out, const FrameScores& scores)
{
    out << "frame_index,score,truth\n";
    for (std::size_t i = 0; i < scores.scores.size(); ++i)
    {
        out << i << ',' << format_real(scores.scores[i]) << ',';
        if (scores.truth)
        {
            out << ((*scores.truth)[i] ? '1' : '0');
        }
        out << '\n';
    }
}

FrameScores read_scores_csv(std::istream& in, double fps)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != "frame_index,score,truth")
    {
        throw ConfigError("score CSV must start with header 'frame_index,score,truth'");
    }
    FrameScores scores;
    scores.fps = fps;
    std::vector<bool> truth;
    bool any_truth = false;
    bool missing_truth = false;
    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (trim(line).empty())
        {
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
        {
            throw ConfigError("score CSV line " + std::to_string(line_no) + " needs 3 columns");
        }
        const double index = parse_real(std::string_view(line).substr(0, c1), "frame_index");
        if (index != static_cast<double>(scores.scores.size()))
        {
            throw ConfigError("score CSV line " + std::to_string(line_no) + " has out-of-order frame_index");
        }
        const double score = parse_real(std::string_view(line).substr(c1 + 1, c2 - c1 - 1), "score");
        if (!(score >= 0.0 && score <= 1.0))
        {
            throw ConfigError("score CSV line " + std::to_string(line_no) + " has score outside [0, 1]");
        }
        scores.scores.push_back(score);
        const std::string t = trim(std::string_view(line).substr(c2 + 1));
        if (t.empty())
        {
            missing_truth = true;
            truth.push_back(false);
        }
        else if (t == "0" || t == "1")
        {
            any_truth = true;
            truth.push_back(t == "1");
        }
        else
        {
            throw ConfigError("score CSV line " + std::to_string(line_no) + " has invalid truth");
        }
    }
    if (any_truth && missing_truth)
    {
        throw ConfigError("score CSV truth column is only partially filled");
    }
    if (any_truth)
    {
        scores.truth = std::move(truth);
    }
    return scores;
}

nlohmann::ordered_json report_to_json(const DecodeReport& report, bool ecc)
{
    nlohmann::ordered_json j;
    j["payload"] = report.payload ? nlohmann::ordered_json(report.payload->value) : nlohmann::ordered_json(nullptr);
    j["status"] = std::string(to_string(report.status));
    j["packet_start"] = report.clock.packet_start;
    j["frames_per_bit"] = report.clock.frames_per_bit;
    j["correlation"] = report.clock.correlation;
    auto bits = nlohmann::ordered_json::array();
    for (const BitDecision& bit : report.bits)
    {
        bits.push_back({{"value", bit.value ? 1 : 0}, {"mean", bit.mean_score}, {"confidence", bit.confidence}});
    }
    j["bits"] = std::move(bits);
    if (report.framing)
    {
        j["framing"] = *report.framing == FramingPosition::start ? "start" : "stop";
    }
    if (ecc)
    {
        if (report.payload)
        {
            const EccResult result = ecc_decode(report.payload->value);
            nlohmann::ordered_json e;
            e["data"] = result.data ? nlohmann::ordered_json(*result.data) : nlohmann::ordered_json(nullptr);
            e["status"] = to_string(result.status);
            if (result.bit_index)
            {
                e["bit_index"] = *result.bit_index;
            }
            j["ecc"] = std::move(e);
        }
        else
        {
            j["ecc"] = nullptr;
        }
    }
    return j;
}

void write_reports(std::ostream& out, std::span<const DecodeReport> reports, bool ecc)
{
    for (const DecodeReport& report : reports)
    {
        out << report_to_json(report, ecc).dump() << '\n';
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
    {
        throw IoError("failed reading '" + path.string() + "'");
    }
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << contents;
    out.flush();
    if (!out)
    {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

}  // namespace blinklink
