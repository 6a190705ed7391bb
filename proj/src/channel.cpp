#include "blinklink/channel.hpp"

#include "blinklink/error.hpp"
#include "blinklink/metrics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/beta_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace blinklink {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_model(const ScoreModel& model)
{
    std::visit(Overloaded{
                   [](const FlipModel& flip) {
                       if (!(flip.p >= 0.0 && flip.p <= 1.0))
                       {
                           throw ConfigError("flip probability must lie in [0, 1]");
                       }
                   },
                   [](const BetaModel& beta) {
                       if (!(beta.a_on > 0.0 && beta.b_on > 0.0))
                       {
                           throw ConfigError("beta parameters must be positive");
                       }
                   },
               },
               model);
}

}  // namespace

void ChannelConfig::validate() const
{
    validate_model(score_model);
    if (!(drift >= 0.9 && drift <= 1.1))
    {
        throw ConfigError("drift must lie in [0.9, 1.1], got " + std::to_string(drift));
    }
    if (!(drop_prob >= 0.0 && drop_prob < 1.0))
    {
        throw ConfigError("drop_prob must lie in [0, 1)");
    }
    if (lead_offset < 0)
    {
        throw ConfigError("lead_offset must be >= 0");
    }
}

LedWaveform apply_timing(const LedWaveform& waveform, const ChannelConfig& config, ChannelEngine& engine)
{
    if (!(config.drift > 0.0))
    {
        throw ConfigError("drift must be positive");
    }
    const auto source_len = waveform.frames.size();

    std::vector<bool> resampled;
    if (config.drift == 1.0)
    {
        resampled = waveform.frames;
    }
    else
    {
        resampled.reserve(static_cast<std::size_t>(std::ceil(static_cast<double>(source_len) * config.drift)));
        for (std::size_t i = 0;; ++i)
        {
            const auto source = static_cast<std::size_t>(std::floor(static_cast<double>(i) / config.drift));
            if (source >= source_len)
            {
                break;
            }
            resampled.push_back(waveform.frames[source]);
        }
    }

    LedWaveform out;
    out.fps = waveform.fps;
    out.frames.reserve(static_cast<std::size_t>(config.lead_offset) + resampled.size());
    out.frames.insert(out.frames.end(), static_cast<std::size_t>(config.lead_offset), false);
    if (config.drop_prob > 0.0)
    {
        boost::random::bernoulli_distribution<double> drop(config.drop_prob);
        for (const bool frame : resampled)
        {
            if (!drop(engine))
            {
                out.frames.push_back(frame);
            }
        }
    }
    else
    {
        out.frames.insert(out.frames.end(), resampled.begin(), resampled.end());
    }
    return out;
}

LedWaveform apply_timing(const LedWaveform& waveform, const ChannelConfig& config)
{
    ChannelEngine engine(config.seed);
    return apply_timing(waveform, config, engine);
}

double draw_score(const ScoreModel& model, bool led_on, ChannelEngine& engine)
{
    return std::visit(Overloaded{
                          [&](const FlipModel& flip) {
                              boost::random::bernoulli_distribution<double> wrong(flip.p);
                              return (led_on != wrong(engine)) ? 1.0 : 0.0;
                          },
                          [&](const BetaModel& beta) {
                              boost::random::beta_distribution<double> dist(led_on ? beta.a_on : beta.b_on,
                                                                            led_on ? beta.b_on : beta.a_on);
                              return std::clamp(dist(engine), 0.0, 1.0);
                          },
                      },
                      model);
}

FrameScores sample_scores(const LedWaveform& waveform, const ChannelConfig& config)
{
    config.validate();
    ChannelEngine engine(config.seed);
    const LedWaveform received = apply_timing(waveform, config, engine);

    FrameScores out;
    out.fps = received.fps;
    out.scores.reserve(received.frames.size());
    for (const bool frame : received.frames)
    {
        out.scores.push_back(draw_score(config.score_model, frame, engine));
    }
    out.truth = received.frames;
    return out;
}

LabelledScores draw_labelled_scores(const ScoreModel& model, std::size_t per_class, std::uint64_t seed)
{
    validate_model(model);
    ChannelEngine engine(seed);
    LabelledScores out;
    out.scores.reserve(2 * per_class);
    out.labels.reserve(2 * per_class);
    for (const bool led_on : {true, false})
    {
        for (std::size_t i = 0; i < per_class; ++i)
        {
            out.scores.push_back(draw_score(model, led_on, engine));
            out.labels.push_back(led_on);
        }
    }
    return out;
}

double beta_accuracy(const BetaModel& model, double threshold)
{
    // On-frames are right above the threshold, off-frames below it.
    const double on_correct = boost::math::ibetac(model.a_on, model.b_on, threshold);
    const double off_correct = boost::math::ibeta(model.b_on, model.a_on, threshold);
    return 0.5 * (on_correct + off_correct);
}

double beta_auc(const BetaModel& model)
{
    // P(X_on > X_off) = integral of f_on(x) * F_off(x) over [0, 1].
    const auto integrand = [&](double x) {
        if (x <= 0.0 || x >= 1.0)
        {
            return 0.0;
        }
        return boost::math::ibeta_derivative(model.a_on, model.b_on, x) *
               boost::math::ibeta(model.b_on, model.a_on, x);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-12);
}

namespace {

struct Candidate
{
    BetaModel model;
    double auc = 0.0;
    double accuracy = 0.0;
};

/// For a fixed b, bisect a so that the accuracy at 0.5 equals target_acc.
/// Accuracy is increasing in a for a > b.
Candidate match_accuracy(double b_on, double target_acc)
{
    double lo = b_on;
    double hi = b_on * 2.0;
    while (beta_accuracy({hi, b_on}) < target_acc && hi < 1e6)
    {
        lo = hi;
        hi *= 2.0;
    }
    for (int iter = 0; iter < 80; ++iter)
    {
        const double mid = 0.5 * (lo + hi);
        (beta_accuracy({mid, b_on}) < target_acc ? lo : hi) = mid;
    }
    const BetaModel model{0.5 * (lo + hi), b_on};
    return {model, beta_auc(model), beta_accuracy(model)};
}

}  // namespace

CalibrationResult calibrate_score_model(double target_auc, double target_acc, double tol,
                                        const CalibrationOptions& options)
{
    if (!(0.5 < target_acc && target_acc <= target_auc && target_auc < 1.0))
    {
        throw ConfigError("calibration targets must satisfy 0.5 < acc <= auc < 1");
    }
    if (!(tol > 0.0))
    {
        throw ConfigError("calibration tolerance must be positive");
    }

    // Coarse geometric grid over b, each point pinned to the accuracy target.
    constexpr int kGridPoints = 29;
    std::vector<Candidate> grid;
    grid.reserve(kGridPoints);
    for (int k = 0; k < kGridPoints; ++k)
    {
        grid.push_back(match_accuracy(std::pow(2.0, k / 4.0), target_acc));
    }
    const auto auc_error = [&](const Candidate& c) { return std::abs(c.auc - target_auc); };
    const auto best_it = std::min_element(grid.begin(), grid.end(),
                                          [&](const Candidate& x, const Candidate& y) {
                                              return auc_error(x) < auc_error(y);
                                          });

    // Refine log2(b) between the neighbours of the best grid point.
    const auto best_index = static_cast<int>(best_it - grid.begin());
    double lo = std::max(0, best_index - 1) / 4.0;
    double hi = std::min(kGridPoints - 1, best_index + 1) / 4.0;
    Candidate best = *best_it;
    for (int iter = 0; iter < 30; ++iter)
    {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        const Candidate c1 = match_accuracy(std::pow(2.0, m1), target_acc);
        const Candidate c2 = match_accuracy(std::pow(2.0, m2), target_acc);
        if (auc_error(c1) <= auc_error(c2))
        {
            hi = m2;
        }
        else
        {
            lo = m1;
        }
        for (const Candidate& c : {c1, c2})
        {
            if (auc_error(c) < auc_error(best))
            {
                best = c;
            }
        }
    }

    if (auc_error(best) > tol || std::abs(best.accuracy - target_acc) > tol)
    {
        throw CalibrationFailed("closest Beta model reaches AUC " + std::to_string(best.auc) + " at accuracy " +
                                std::to_string(best.accuracy));
    }

    const LabelledScores sample = draw_labelled_scores(best.model, options.samples_per_class, options.seed);
    CalibrationResult result;
    result.model = best.model;
    result.model_auc = best.auc;
    result.model_accuracy = best.accuracy;
    result.empirical_auc = roc_auc(sample.scores, sample.labels).auc;
    result.empirical_accuracy = accuracy_at(sample.scores, sample.labels, 0.5).accuracy;
    if (std::abs(result.empirical_auc - target_auc) > tol || std::abs(result.empirical_accuracy - target_acc) > tol)
    {
        throw CalibrationFailed("empirical AUC " + std::to_string(result.empirical_auc) + " / accuracy " +
                                std::to_string(result.empirical_accuracy) + " outside tolerance");
    }
    return result;
}

}  // namespace blinklink
