#include "blinklink/cli.hpp"

#include "blinklink/config.hpp"
#include "blinklink/ecc.hpp"
#include "blinklink/error.hpp"
#include "blinklink/harness.hpp"
#include "blinklink/io.hpp"
#include "blinklink/metrics.hpp"
#include "blinklink/trace.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace blinklink {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct CommonOptions
{
    std::string config_path;
    std::vector<std::string> overrides;
    std::string input;
    std::string output;
};

void add_config_options(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("-c,--config", opts.config_path, "Experiment config JSON");
    cmd->add_option("--set", opts.overrides, "Override a config field: path.to.key=value")->take_all();
}

nlohmann::json load_document(const CommonOptions& opts)
{
    nlohmann::json document = opts.config_path.empty() ? nlohmann::json::object() : load_json_file(opts.config_path);
    for (const std::string& assignment : opts.overrides)
    {
        apply_override(document, assignment);
    }
    return document;
}

std::string read_input(const std::string& path, std::istream& in)
{
    if (path.empty() || path == "-")
    {
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }
    return read_file(path);
}

void write_output(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-")
    {
        out << text;
        out.flush();
        if (!out)
        {
            throw IoError("failed writing to standard output");
        }
        return;
    }
    write_file(path, text);
}

int parse_byte(const std::string& text, int limit)
{
    std::size_t used = 0;
    int value = 0;
    try
    {
        value = std::stoi(text, &used, 0);
    }
    catch (const std::exception&)
    {
        throw ConfigError("invalid payload '" + text + "'");
    }
    if (used != text.size() || value < 0 || value > limit)
    {
        throw ConfigError("payload '" + text + "' outside [0, " + std::to_string(limit) + "]");
    }
    return value;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"LED blink link codec, channel simulator and decoder", "blinklink"};
    app.require_subcommand(1);

    // encode
    CommonOptions encode_opts;
    std::vector<std::string> encode_payloads;
    bool encode_range = false;
    int encode_sos = 0;
    bool encode_ecc = false;
    auto* encode = app.add_subcommand("encode", "Payloads to waveform text");
    add_config_options(encode, encode_opts);
    encode->add_option("-p,--payload", encode_payloads, "Payload byte (e.g. 0x53); repeatable");
    encode->add_flag("--range", encode_range, "All payloads 0x00..0xFF");
    encode->add_option("--sos", encode_sos, "Send the SOS payload N times");
    encode->add_flag("--ecc", encode_ecc, "Payloads are 4-bit data protected by SECDED");
    encode->add_option("-o,--out", encode_opts.output, "Output file (default stdout)");

    // simulate
    CommonOptions simulate_opts;
    std::optional<std::uint64_t> simulate_seed;
    auto* simulate = app.add_subcommand("simulate", "Waveform text to per-frame score CSV");
    add_config_options(simulate, simulate_opts);
    simulate->add_option("-i,--input", simulate_opts.input, "Waveform file (default stdin)");
    simulate->add_option("-o,--out", simulate_opts.output, "Output file (default stdout)");
    simulate->add_option("--seed", simulate_seed, "Channel seed");

    // decode
    CommonOptions decode_opts;
    bool decode_ecc = false;
    std::string trace_svg;
    std::size_t trace_index = 0;
    auto* decode = app.add_subcommand("decode", "Score CSV to one JSON report per packet");
    add_config_options(decode, decode_opts);
    decode->add_option("-i,--input", decode_opts.input, "Score CSV (default stdin)");
    decode->add_option("-o,--out", decode_opts.output, "Output file (default stdout)");
    decode->add_flag("--ecc", decode_ecc, "Interpret payloads as SECDED codewords");
    decode->add_option("--trace-svg", trace_svg, "Render a packet trace to this SVG file");
    decode->add_option("--trace-index", trace_index, "Which report to render (default 0)");

    // experiment
    CommonOptions experiment_opts;
    std::string experiment_dir;
    auto* experiment = app.add_subcommand("experiment", "Full encode/channel/decode run from a config");
    add_config_options(experiment, experiment_opts);
    experiment->add_option("--output-dir", experiment_dir, "Overrides output_dir");

    // sweep
    CommonOptions sweep_opts;
    std::string sweep_parameter;
    std::vector<double> sweep_grid;
    auto* sweep = app.add_subcommand("sweep", "Success rate and BER over a parameter grid");
    add_config_options(sweep, sweep_opts);
    sweep->add_option("--parameter", sweep_parameter, "flip_p, drift or drop_prob");
    sweep->add_option("--grid", sweep_grid, "Grid values, strictly increasing")->delimiter(',');
    sweep->add_option("-o,--out", sweep_opts.output, "Output CSV (default stdout)");

    // roc
    CommonOptions roc_opts;
    std::string roc_curve;
    double roc_threshold = 0.5;
    auto* roc = app.add_subcommand("roc", "ROC curve and AUC of a score CSV with truth");
    roc->add_option("-i,--input", roc_opts.input, "Score CSV (default stdin)");
    roc->add_option("--curve", roc_curve, "Write curve points (fpr,tpr) to this CSV");
    roc->add_option("--threshold", roc_threshold, "Threshold for the accuracy line");

    // calibrate
    double target_auc = 0.9888;
    double target_acc = 0.951;
    double tolerance = 0.005;
    CalibrationOptions calibration;
    auto* calibrate = app.add_subcommand("calibrate", "Fit the Beta score surrogate to AUC and accuracy");
    calibrate->add_option("--target-auc", target_auc, "Target AUC");
    calibrate->add_option("--target-acc", target_acc, "Target accuracy at threshold 0.5");
    calibrate->add_option("--tol", tolerance, "Tolerance on both targets");
    calibrate->add_option("--seed", calibration.seed, "Seed of the verification sample");
    calibrate->add_option("--samples", calibration.samples_per_class, "Verification samples per class");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    try
    {
        if (*encode)
        {
            nlohmann::json document = load_document(encode_opts);
            if (encode_ecc)
            {
                document["ecc"] = true;
            }
            const int modes = (encode_payloads.empty() ? 0 : 1) + (encode_range ? 1 : 0) + (encode_sos > 0 ? 1 : 0);
            if (modes > 1)
            {
                throw ConfigError("use only one of --payload, --range and --sos");
            }
            if (!encode_payloads.empty())
            {
                const int limit = document.value("ecc", false) ? 15 : 255;
                std::vector<int> values;
                for (const std::string& p : encode_payloads)
                {
                    values.push_back(parse_byte(p, limit));
                }
                document["payload_set"] = {{"kind", "list"}, {"values", values}};
            }
            else if (encode_range)
            {
                document["payload_set"] = {{"kind", "range"}};
            }
            else if (encode_sos > 0)
            {
                document["payload_set"] = {{"kind", "sos"}, {"count", encode_sos}};
            }
            const ExperimentConfig config = experiment_from_json(document);
            std::ostringstream text;
            write_waveform(text, encode_message_stream(transmitted_payloads(config), config.line_code));
            write_output(encode_opts.output, text.str(), out);
        }
        else if (*simulate)
        {
            nlohmann::json document = load_document(simulate_opts);
            const ExperimentConfig config = experiment_from_json(document);
            ChannelConfig channel = config.channel;
            if (simulate_seed)
            {
                channel.seed = *simulate_seed;
            }
            std::istringstream waveform_text(read_input(simulate_opts.input, in));
            const LedWaveform waveform = read_waveform(waveform_text);
            std::ostringstream text;
            write_scores_csv(text, sample_scores(waveform, channel));
            write_output(simulate_opts.output, text.str(), out);
        }
        else if (*decode)
        {
            nlohmann::json document = load_document(decode_opts);
            if (decode_ecc)
            {
                document["ecc"] = true;
            }
            const ExperimentConfig config = experiment_from_json(document);
            std::istringstream csv(read_input(decode_opts.input, in));
            const FrameScores scores = read_scores_csv(csv, config.line_code.fps);
            const std::vector<DecodeReport> reports = decode_stream(scores, config.decoder);
            if (!trace_svg.empty())
            {
                if (trace_index >= reports.size())
                {
                    throw NoSync("no decoded packet " + std::to_string(trace_index) + " to trace");
                }
                emit_trace(reports[trace_index], scores, trace_svg, config.decoder);
            }
            std::ostringstream text;
            write_reports(text, reports, config.ecc);
            write_output(decode_opts.output, text.str(), out);
        }
        else if (*experiment)
        {
            nlohmann::json document = load_document(experiment_opts);
            if (!experiment_dir.empty())
            {
                document["output_dir"] = experiment_dir;
            }
            const ExperimentConfig config = experiment_from_json(document);
            const ExperimentResult result = run_experiment(config);
            write_output("", stats_csv(config, result), out);
        }
        else if (*sweep)
        {
            nlohmann::json document = load_document(sweep_opts);
            if (!sweep_parameter.empty())
            {
                document["sweep"]["parameter"] = sweep_parameter;
            }
            if (!sweep_grid.empty())
            {
                document["sweep"]["grid"] = sweep_grid;
            }
            const SweepResult result = run_sweep(sweep_from_json(document));
            for (const std::string& warning : result.warnings)
            {
                err << "warning: " << warning << '\n';
            }
            write_output(sweep_opts.output, sweep_csv(result), out);
        }
        else if (*roc)
        {
            std::istringstream csv(read_input(roc_opts.input, in));
            const FrameScores scores = read_scores_csv(csv);
            if (!scores.truth)
            {
                throw ConfigError("roc needs a score CSV with a truth column");
            }
            const RocCurve curve = roc_auc(scores.scores, *scores.truth);
            const AccuracyResult acc = accuracy_at(scores.scores, *scores.truth, roc_threshold);
            if (!roc_curve.empty())
            {
                std::ostringstream points;
                points << "fpr,tpr\n";
                for (const RocPoint& p : curve.points)
                {
                    points << format_real(p.fpr) << ',' << format_real(p.tpr) << '\n';
                }
                write_file(roc_curve, points.str());
            }
            std::ostringstream text;
            text << "auc=" << format_real(curve.auc) << '\n'
                 << "accuracy=" << format_real(acc.accuracy) << '\n'
                 << "tp=" << acc.confusion.tp << " fp=" << acc.confusion.fp << " tn=" << acc.confusion.tn
                 << " fn=" << acc.confusion.fn << '\n';
            write_output("", text.str(), out);
        }
        else if (*calibrate)
        {
            const CalibrationResult result = calibrate_score_model(target_auc, target_acc, tolerance, calibration);
            nlohmann::ordered_json j;
            j["score_model"] = {{"kind", "beta"}, {"a_on", result.model.a_on}, {"b_on", result.model.b_on}};
            j["model_auc"] = result.model_auc;
            j["model_accuracy"] = result.model_accuracy;
            j["empirical_auc"] = result.empirical_auc;
            j["empirical_accuracy"] = result.empirical_accuracy;
            write_output("", j.dump(2) + "\n", out);
        }
    }
    catch (const IoError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    catch (const Error& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    catch (const nlohmann::json::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace blinklink
