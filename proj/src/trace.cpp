#include "blinklink/trace.hpp"

#include "blinklink/error.hpp"
#include "blinklink/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace blinklink {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 320.0;
constexpr double kMarginX = 40.0;
constexpr double kPlotTop = 30.0;
constexpr double kPlotBottom = 270.0;

struct Role
{
    const char* name;
    const char* color;
};

Role role_of(std::size_t bit)
{
    if (bit < kStartBits)
    {
        return {"start", "#d62728"};
    }
    if (bit < kStartBits + kPayloadBits)
    {
        return {"payload", "#1f77b4"};
    }
    return {"stop", "#2ca02c"};
}

std::string num(double value)
{
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", value);
    return buffer;
}

}  // namespace

std::string render_trace_svg(const DecodeReport& report, const FrameScores& scores, const DecoderConfig& config)
{
    if (!report.has_clock())
    {
        throw NoSync("report has no bit clock to draw");
    }
    const double fpb = report.clock.frames_per_bit;
    const auto edge = [&](std::size_t bit) {
        return static_cast<std::size_t>(
            std::floor(static_cast<double>(report.clock.packet_start) + static_cast<double>(bit) * fpb + 0.5));
    };
    const std::size_t first = edge(0);
    const std::size_t last = edge(kPacketBits);
    const double span = static_cast<double>(last - first);
    const auto x_of = [&](double frame) {
        return kMarginX + (frame - static_cast<double>(first) + 0.5) / span * (kWidth - 2 * kMarginX);
    };
    const auto y_of = [&](double score) { return kPlotBottom - score * (kPlotBottom - kPlotTop); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    for (std::size_t k = 0; k < kPacketBits; ++k)
    {
        const double x0 = x_of(static_cast<double>(edge(k)) - 0.5);
        const double x1 = x_of(static_cast<double>(edge(k + 1)) - 0.5);
        svg << "<rect class=\"band\" x=\"" << num(x0) << "\" y=\"" << num(kPlotTop) << "\" width=\"" << num(x1 - x0)
            << "\" height=\"" << num(kPlotBottom - kPlotTop) << "\" fill=\"" << (k % 2 == 0 ? "#e8e8e8" : "#f8f8f8")
            << "\"/>\n";
    }

    const double threshold_y = y_of(config.threshold);
    svg << "<line class=\"threshold\" x1=\"" << num(kMarginX) << "\" y1=\"" << num(threshold_y) << "\" x2=\""
        << num(kWidth - kMarginX) << "\" y2=\"" << num(threshold_y)
        << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";

    for (std::size_t k = 0; k < kPacketBits; ++k)
    {
        const Role role = role_of(k);
        const std::size_t end = std::min(edge(k + 1), scores.scores.size());
        for (std::size_t i = edge(k); i < end; ++i)
        {
            svg << "<circle class=\"dot " << role.name << "\" cx=\"" << num(x_of(static_cast<double>(i)))
                << "\" cy=\"" << num(y_of(scores.scores[i])) << "\" r=\"2.5\" fill=\"" << role.color << "\"/>\n";
        }
        if (k < report.bits.size())
        {
            const BitDecision& bit = report.bits[k];
            const double x0 = x_of(static_cast<double>(edge(k)) - 0.5);
            const double x1 = x_of(static_cast<double>(edge(k + 1)) - 0.5);
            svg << "<line class=\"mean " << role.name << "\" x1=\"" << num(x0) << "\" y1=\""
                << num(y_of(bit.mean_score)) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y_of(bit.mean_score))
                << "\" stroke=\"" << role.color << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << num(0.5 * (x0 + x1)) << "\" y=\"" << num(kPlotBottom + 20.0)
                << "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" fill=\"" << role.color
                << "\">" << (bit.value ? '1' : '0') << "</text>\n";
        }
    }

    svg << "<text x=\"" << num(kMarginX) << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">status="
        << to_string(report.status);
    if (report.payload)
    {
        char hex[8];
        std::snprintf(hex, sizeof(hex), "0x%02X", report.payload->value);
        svg << " payload=" << hex;
    }
    svg << " frames_per_bit=" << format_real(fpb) << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void emit_trace(const DecodeReport& report, const FrameScores& scores, const std::filesystem::path& path,
                const DecoderConfig& config)
{
    const std::string svg = render_trace_svg(report, scores, config);
    write_file(path, svg);
}

}  // namespace blinklink
