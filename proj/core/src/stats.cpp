#include "vqclab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace vqclab {

double sample_mean(const std::vector<double>& samples) {
    if (samples.empty()) return 0.0;
    double acc = 0.0;
    for (double v : samples) acc += v;
    return acc / static_cast<double>(samples.size());
}

double sample_variance(const std::vector<double>& samples) {
    if (samples.size() < 2) return 0.0;
    if (std::all_of(samples.begin(), samples.end(), [&](double v) { return v == samples.front(); }))
        return 0.0;
    const double mean = sample_mean(samples);
    double acc = 0.0;
    for (double v : samples) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(samples.size() - 1);
}

MomentSummary summarize(const std::vector<double>& samples, const SeedSpec& bootstrap_seed,
                        int bootstrap_rounds) {
    MomentSummary out;
    out.count = samples.size();
    out.mean = sample_mean(samples);
    out.variance = sample_variance(samples);
    if (samples.size() < 2) return out;
    out.stderr_mean = std::sqrt(out.variance / static_cast<double>(samples.size()));

    Rng rng(bootstrap_seed);
    std::vector<double> replicate(samples.size());
    std::vector<double> variances(static_cast<std::size_t>(bootstrap_rounds));
    for (int b = 0; b < bootstrap_rounds; ++b) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const std::size_t pick = static_cast<std::size_t>(rng.next_u64() % samples.size());
            replicate[i] = samples[pick];
        }
        variances[static_cast<std::size_t>(b)] = sample_variance(replicate);
    }
    const double vm = sample_mean(variances);
    double acc = 0.0;
    for (double v : variances) acc += (v - vm) * (v - vm);
    out.stderr_variance = std::sqrt(acc / static_cast<double>(variances.size() - 1));
    return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw config_error("least_squares_slope: need two equal-length samples");
    const double mx = sample_mean(x);
    const double my = sample_mean(y);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    if (den == 0.0)
        throw config_error("least_squares_slope: degenerate x values");
    return num / den;
}

double max_pairwise_spread(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

} // namespace vqclab
