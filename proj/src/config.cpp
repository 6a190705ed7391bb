#include "blinklink/config.hpp"

#include "blinklink/error.hpp"
#include "blinklink/io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace blinklink {

using nlohmann::json;

namespace {

/// Reads members of one JSON object and rejects any it did not consume.
class ObjectReader
{
public:
    ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path))
    {
        if (!object_.is_object())
        {
            throw ConfigError(where() + " must be a JSON object");
        }
    }

    template <class T>
    void read(const char* key, T& target)
    {
        seen_.insert(key);
        const auto it = object_.find(key);
        if (it == object_.end())
        {
            return;
        }
        try
        {
            target = it->template get<T>();
        }
        catch (const json::exception&)
        {
            throw ConfigError(where(key) + " has the wrong type");
        }
    }

    [[nodiscard]] const json* child(const char* key)
    {
        seen_.insert(key);
        const auto it = object_.find(key);
        return it == object_.end() ? nullptr : &*it;
    }

    [[nodiscard]] std::string where(const char* key = nullptr) const
    {
        const std::string base = path_.empty() ? "config" : path_;
        return key ? base + "." + key : base;
    }

    void finish() const
    {
        for (const auto& item : object_.items())
        {
            if (!seen_.contains(item.key()))
            {
                throw ConfigError("unknown key '" + where(item.key().c_str()) + "'");
            }
        }
    }

private:
    const json& object_;
    std::string path_;
    std::set<std::string> seen_;
};

BitPair read_pattern(const json& value, const std::string& where)
{
    if (!value.is_array() || value.size() != 2)
    {
        throw ConfigError(where + " must be a 2-element array of 0/1");
    }
    BitPair pattern{};
    for (std::size_t i = 0; i < 2; ++i)
    {
        if (!value[i].is_number_integer() || (value[i] != 0 && value[i] != 1))
        {
            throw ConfigError(where + " must contain only 0 or 1");
        }
        pattern[i] = value[i] == 1;
    }
    return pattern;
}

json pattern_json(const BitPair& pattern)
{
    return json::array({pattern[0] ? 1 : 0, pattern[1] ? 1 : 0});
}

LineCodeConfig read_line_code(const json& object)
{
    LineCodeConfig line_code;
    ObjectReader reader(object, "line_code");
    if (const json* start = reader.child("start_pattern"))
    {
        line_code.start_pattern = read_pattern(*start, "line_code.start_pattern");
    }
    if (const json* stop = reader.child("stop_pattern"))
    {
        line_code.stop_pattern = read_pattern(*stop, "line_code.stop_pattern");
    }
    std::string order = "msb_first";
    reader.read("bit_order", order);
    if (order == "msb_first")
    {
        line_code.bit_order = BitOrder::msb_first;
    }
    else if (order == "lsb_first")
    {
        line_code.bit_order = BitOrder::lsb_first;
    }
    else
    {
        throw ConfigError("line_code.bit_order must be 'msb_first' or 'lsb_first'");
    }
    reader.read("frames_per_bit", line_code.frames_per_bit);
    reader.read("fps", line_code.fps);
    reader.read("idle_frames", line_code.idle_frames);
    reader.finish();
    return line_code;
}

ScoreModel read_score_model(const json& object)
{
    ObjectReader reader(object, "channel.score_model");
    std::string kind = "flip";
    reader.read("kind", kind);
    if (kind == "flip")
    {
        FlipModel flip;
        reader.read("p", flip.p);
        reader.finish();
        return flip;
    }
    if (kind == "beta")
    {
        BetaModel beta;
        reader.read("a_on", beta.a_on);
        reader.read("b_on", beta.b_on);
        reader.finish();
        return beta;
    }
    throw ConfigError("channel.score_model.kind must be 'flip' or 'beta'");
}

ChannelConfig read_channel(const json& object)
{
    ChannelConfig channel;
    ObjectReader reader(object, "channel");
    if (const json* model = reader.child("score_model"))
    {
        channel.score_model = read_score_model(*model);
    }
    reader.read("drift", channel.drift);
    reader.read("drop_prob", channel.drop_prob);
    reader.read("lead_offset", channel.lead_offset);
    reader.read("seed", channel.seed);
    reader.finish();
    return channel;
}

DecoderConfig read_decoder(const json& object)
{
    DecoderConfig decoder;
    ObjectReader reader(object, "decoder");
    reader.read("threshold", decoder.threshold);
    reader.read("min_correlation", decoder.min_correlation);
    reader.read("search_step", decoder.search_step);
    reader.read("min_bit_confidence", decoder.min_bit_confidence);
    reader.read("rate_search", decoder.rate_search);
    reader.finish();
    return decoder;
}

PayloadSet read_payload_set(const json& object)
{
    PayloadSet set;
    ObjectReader reader(object, "payload_set");
    std::string kind = "range";
    reader.read("kind", kind);
    if (kind == "range")
    {
        set.kind = PayloadSet::Kind::range;
    }
    else if (kind == "list")
    {
        set.kind = PayloadSet::Kind::list;
        reader.read("values", set.values);
    }
    else if (kind == "sos")
    {
        set.kind = PayloadSet::Kind::sos;
        reader.read("count", set.count);
    }
    else
    {
        throw ConfigError("payload_set.kind must be 'range', 'list' or 'sos'");
    }
    reader.finish();
    return set;
}

json model_json(const ScoreModel& model)
{
    if (const auto* flip = std::get_if<FlipModel>(&model))
    {
        return {{"kind", "flip"}, {"p", flip->p}};
    }
    const auto& beta = std::get<BetaModel>(model);
    return {{"kind", "beta"}, {"a_on", beta.a_on}, {"b_on", beta.b_on}};
}

}  // namespace

std::vector<std::uint8_t> PayloadSet::expand(bool ecc) const
{
    std::vector<std::uint8_t> out;
    const int limit = ecc ? 15 : 255;
    switch (kind)
    {
    case Kind::range:
        for (int v = 0; v <= limit; ++v)
        {
            out.push_back(static_cast<std::uint8_t>(v));
        }
        break;
    case Kind::list:
        for (const int v : values)
        {
            if (v < 0 || v > limit)
            {
                throw ConfigError("payload value " + std::to_string(v) + " outside [0, " + std::to_string(limit) +
                                  "]");
            }
            out.push_back(static_cast<std::uint8_t>(v));
        }
        break;
    case Kind::sos:
        if (ecc)
        {
            throw ConfigError("the SOS payload is a raw byte and cannot be sent with ECC");
        }
        out.assign(static_cast<std::size_t>(std::max(count, 0)), kSosPayload.value);
        break;
    }
    if (out.empty())
    {
        throw ConfigError("payload_set is empty");
    }
    return out;
}

void ExperimentConfig::validate() const
{
    line_code.validate();
    channel.validate();
    decoder.validate();
    static_cast<void>(payload_set.expand(ecc));
    if (trials < 1)
    {
        throw ConfigError("trials must be >= 1");
    }
}

void SweepSpec::validate() const
{
    base.validate();
    if (grid.empty())
    {
        throw ConfigError("sweep grid is empty");
    }
    if (std::adjacent_find(grid.begin(), grid.end(), std::greater_equal<>()) != grid.end())
    {
        throw ConfigError("sweep grid must be strictly increasing");
    }
    if (parameter == SweepParameter::flip_p && !std::holds_alternative<FlipModel>(base.channel.score_model))
    {
        throw ConfigError("a flip_p sweep needs a flip score model");
    }
}

json to_json(const ExperimentConfig& config)
{
    const auto& lc = config.line_code;
    json line_code = {{"start_pattern", pattern_json(lc.start_pattern)},
                      {"stop_pattern", pattern_json(lc.stop_pattern)},
                      {"bit_order", lc.bit_order == BitOrder::msb_first ? "msb_first" : "lsb_first"},
                      {"frames_per_bit", lc.frames_per_bit},
                      {"fps", lc.fps},
                      {"idle_frames", lc.idle_frames}};
    const auto& ch = config.channel;
    json channel = {{"score_model", model_json(ch.score_model)},
                    {"drift", ch.drift},
                    {"drop_prob", ch.drop_prob},
                    {"lead_offset", ch.lead_offset},
                    {"seed", ch.seed}};
    const auto& dc = config.decoder;
    json decoder = {{"threshold", dc.threshold},
                    {"min_correlation", dc.min_correlation},
                    {"search_step", dc.search_step},
                    {"min_bit_confidence", dc.min_bit_confidence},
                    {"rate_search", dc.rate_search}};
    json payload_set;
    switch (config.payload_set.kind)
    {
    case PayloadSet::Kind::range:
        payload_set = {{"kind", "range"}};
        break;
    case PayloadSet::Kind::list:
        payload_set = {{"kind", "list"}, {"values", config.payload_set.values}};
        break;
    case PayloadSet::Kind::sos:
        payload_set = {{"kind", "sos"}, {"count", config.payload_set.count}};
        break;
    }
    return {{"line_code", line_code},     {"channel", channel},
            {"decoder", decoder},         {"payload_set", payload_set},
            {"trials", config.trials},    {"output_dir", config.output_dir.string()},
            {"ecc", config.ecc},          {"threads", config.threads}};
}

ExperimentConfig experiment_from_json(const json& document)
{
    ExperimentConfig config;
    ObjectReader reader(document, "");
    if (const json* lc = reader.child("line_code"))
    {
        config.line_code = read_line_code(*lc);
    }
    if (const json* ch = reader.child("channel"))
    {
        config.channel = read_channel(*ch);
    }
    if (const json* dc = reader.child("decoder"))
    {
        config.decoder = read_decoder(*dc);
    }
    if (const json* ps = reader.child("payload_set"))
    {
        config.payload_set = read_payload_set(*ps);
    }
    reader.read("trials", config.trials);
    std::string output_dir = config.output_dir.string();
    reader.read("output_dir", output_dir);
    config.output_dir = output_dir;
    reader.read("ecc", config.ecc);
    reader.read("threads", config.threads);
    // Consumed by sweep_from_json.
    static_cast<void>(reader.child("sweep"));
    reader.finish();

    config.decoder.line_code = config.line_code;
    config.validate();
    return config;
}

SweepSpec sweep_from_json(const json& document)
{
    SweepSpec spec;
    spec.base = experiment_from_json(document);
    const auto it = document.find("sweep");
    if (it == document.end())
    {
        throw ConfigError("config has no 'sweep' section");
    }
    ObjectReader reader(*it, "sweep");
    std::string parameter = "flip_p";
    reader.read("parameter", parameter);
    spec.parameter = parse_sweep_parameter(parameter);
    reader.read("grid", spec.grid);
    reader.finish();
    spec.validate();
    return spec;
}

void apply_override(json& document, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
    {
        throw ConfigError("override must look like 'path.to.key=value', got '" + assignment + "'");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json value = json::parse(text, nullptr, false);
    if (value.is_discarded())
    {
        value = text;
    }

    json* node = &document;
    std::istringstream parts(path);
    std::string key;
    std::vector<std::string> keys;
    while (std::getline(parts, key, '.'))
    {
        if (key.empty())
        {
            throw ConfigError("override path '" + path + "' has an empty component");
        }
        keys.push_back(key);
    }
    for (std::size_t i = 0; i + 1 < keys.size(); ++i)
    {
        if (!node->is_object())
        {
            throw ConfigError("override path '" + path + "' crosses a non-object value");
        }
        node = &(*node)[keys[i]];
        if (node->is_null())
        {
            *node = json::object();
        }
    }
    if (!node->is_object())
    {
        throw ConfigError("override path '" + path + "' crosses a non-object value");
    }
    (*node)[keys.back()] = std::move(value);
}

json load_json_file(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    json document = json::parse(text, nullptr, false);
    if (document.is_discarded())
    {
        throw ConfigError("'" + path.string() + "' is not valid JSON");
    }
    return document;
}

std::string to_string(SweepParameter parameter)
{
    switch (parameter)
    {
    case SweepParameter::flip_p:
        return "flip_p";
    case SweepParameter::drift:
        return "drift";
    case SweepParameter::drop_prob:
        return "drop_prob";
    }
    return "unknown";
}

SweepParameter parse_sweep_parameter(const std::string& name)
{
    if (name == "flip_p")
    {
        return SweepParameter::flip_p;
    }
    if (name == "drift")
    {
        return SweepParameter::drift;
    }
    if (name == "drop_prob")
    {
        return SweepParameter::drop_prob;
    }
    throw ConfigError("sweep parameter must be flip_p, drift or drop_prob, got '" + name + "'");
}

}  // namespace blinklink
