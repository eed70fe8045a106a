#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vqclab/design.hpp"
#include "vqclab/gradients.hpp"
#include "vqclab/tensor_train.hpp"

namespace vqclab {

/// Flat configuration shared by all experiment drivers; per-experiment
/// defaults come from default_config(). Anything left at a default is still
/// echoed into the output manifest, so a run is reproducible from the
/// manifest alone.
struct ExperimentConfig {
    std::string experiment;

    int n = 12;       // single-size experiments (fig4)
    int n_min = 4;    // sweeps
    int n_max = 9;
    int depth = 6;         // fixed circuit depth (0 = use depth_factor * n)
    int depth_factor = 4;  // "deep" regime scaling
    int m = 32;            // spread dataset size
    std::vector<int> m_values{8, 16, 32, 64, 128, 256};
    int trials = 1000;
    int seeds = 10;
    int rank = 2;
    int tn_input_factor = 4;
    std::string entangler = "ring"; // CZ pattern for the naive/hea models
    std::vector<std::string> models;
    std::vector<double> epsilons{0.05, 0.1, 0.2, 0.4, 2.0};
    std::string observable = "Z0";

    // design diagnostics
    int purity_samples = 500;
    int frame_pairs = 300;
    int smd_samples = 5000;
    int smd_n_max = 4;
    int inner_layers = 3;
    int crossings = 1;

    std::uint64_t master_seed = 20250801;
    std::string out_dir = "out";
    std::string format = "csv";
    int jobs = 0;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig default_config(const std::string& experiment);

/// key = value lines, '#' comments; unknown keys are config errors.
ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base);
ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base);
std::string config_to_kv(const ExperimentConfig& config);

struct ResultRow {
    std::string experiment;
    int n = 0;
    int m = 0;
    std::string model;
    std::int64_t seed = -1; // -1 marks rows aggregated over seeds/trials
    std::string statistic;
    double value = 0.0;
    double stderr_value = 0.0;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::string manifest_json;
};

ResultTable run_fig4(const ExperimentConfig& config);
ResultTable run_output_concentration(const ExperimentConfig& config);
ResultTable run_tail_probability(const ExperimentConfig& config);
ResultTable run_spread_scan(const ExperimentConfig& config);
ResultTable run_gradient_scan(const ExperimentConfig& config);
ResultTable run_design_diagnostics(const ExperimentConfig& config);

/// Dispatch on config.experiment.
ResultTable run_experiment(const ExperimentConfig& config);

/// Header `experiment,n,m,model,seed,statistic,value,stderr`; doubles printed
/// with %.17g so reruns are byte-identical.
std::string table_to_csv(const ResultTable& table);
std::string table_to_json(const ResultTable& table);
std::string table_to_svg(const ResultTable& table, const std::string& experiment);

/// Writes <experiment>.<format> plus <experiment>_manifest.json under out_dir.
/// Returns the paths written.
std::vector<std::string> emit_outputs(const ResultTable& table, const ExperimentConfig& config);

} // namespace vqclab
