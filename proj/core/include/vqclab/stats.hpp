#pragma once

#include <functional>
#include <vector>

#include "vqclab/ensembles.hpp"

namespace vqclab {

/// Sample mean/variance with standard errors; variance stderr comes from a
/// deterministic bootstrap so reruns match bit for bit.
struct MomentSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double stderr_mean = 0.0;
    double stderr_variance = 0.0;
};

MomentSummary summarize(const std::vector<double>& samples, const SeedSpec& bootstrap_seed,
                        int bootstrap_rounds = 200);

double sample_mean(const std::vector<double>& samples);
/// Unbiased sample variance (divides by N-1); zero for N < 2.
double sample_variance(const std::vector<double>& samples);

/// Least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

double max_pairwise_spread(const std::vector<double>& values);

} // namespace vqclab
