#include "vqclab/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "parallel.hpp"
#include "vqclab/version.hpp"

namespace vqclab {

namespace {

using json = nlohmann::json;

constexpr int kTensorScanDepth = 2; // fixed depth for tensor-structured sweeps

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_eps(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

Observable observable_from_spec(const std::string& spec, int n_qubits) {
    if (spec == "I") return Observable::identity(n_qubits);
    if (spec.size() >= 2 && spec[0] == 'Z') {
        const int q = std::stoi(spec.substr(1));
        if (q < 0 || q >= n_qubits)
            throw config_error("observable qubit out of range for n=" + std::to_string(n_qubits));
        return Observable::pauli_z_on(q, n_qubits);
    }
    throw config_error("unknown observable spec: " + spec);
}

double observable_trace(const Observable& obs) {
    const double local = obs.support_matrix().trace().real();
    return local * std::pow(2.0, obs.n_qubits() - static_cast<int>(obs.support().size()));
}

double observable_trace_sq(const Observable& obs) {
    const double local = (obs.support_matrix() * obs.support_matrix()).trace().real();
    return local * std::pow(2.0, obs.n_qubits() - static_cast<int>(obs.support().size()));
}

/// Var(<psi|O|psi>) for exact Haar states: Tr(O^2)/(d(d+1)) - Tr(O)^2/(d^2(d+1)).
double haar_output_variance(const Observable& obs) {
    const double d = std::pow(2.0, obs.n_qubits());
    const double t1 = observable_trace_sq(obs) / (d * (d + 1.0));
    const double t2 = observable_trace(obs) * observable_trace(obs) / (d * d * (d + 1.0));
    return t1 - t2;
}

std::vector<double> unit_normal_vector(int dim, Rng& rng) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    double norm2 = 0.0;
    for (double& v : x) {
        v = rng.normal();
        norm2 += v * v;
    }
    const double norm = std::sqrt(norm2);
    for (double& v : x) v /= norm;
    return x;
}

int resolve_depth(const ExperimentConfig& config, const std::string& model, int n) {
    const bool tensor = model == "tn-vqc" || model == "tensor-hyper";
    if (config.depth > 0) return config.depth;
    return tensor ? kTensorScanDepth : config.depth_factor * n;
}

Entangler entangler_from(const ExperimentConfig& config) {
    return config.entangler == "all-to-all" ? Entangler::AllToAll : Entangler::Ring;
}

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

json manifest_for(const ExperimentConfig& config) {
    json manifest;
    manifest["tool"] = "vqclab";
    manifest["version"] = kVersion;
    manifest["master_seed"] = config.master_seed;
    json echo;
    std::istringstream kv(config_to_kv(config));
    std::string line;
    while (std::getline(kv, line)) {
        const auto at = line.find(" = ");
        if (at != std::string::npos) echo[line.substr(0, at)] = line.substr(at + 3);
    }
    manifest["config"] = echo;
    // Modeling defaults echoed alongside the config so runs are comparable.
    manifest["artifact_defaults"] = {
        {"ansatz", "R_Y,R_Z rotations + CZ entangling block per layer"},
        {"entangler", config.entangler},
        {"rotation_convention", "exp(-i theta P / 2)"},
        {"observable", config.observable},
        {"tensor_activation", "pi*tanh"},
        {"tensor_scan_depth", kTensorScanDepth},
        {"inputs", "standard normal, normalized to unit norm"},
    };
    return manifest;
}

struct SeriesSpec {
    std::string statistic;  // rows to chart ("" = prefix match on exceedance_)
    bool x_is_m = false;    // otherwise x = n
    bool series_by_statistic = false;
};

SeriesSpec chart_spec(const std::string& experiment) {
    if (experiment == "fig4") return {"output_variance_mean", true, false};
    if (experiment == "tail") return {"exceedance_", false, true};
    if (experiment == "spread") return {"max_spread_mean", false, false};
    if (experiment == "design") return {"choi_purity_mean", false, false};
    if (experiment == "gradients") return {"variance", false, false};
    return {"variance", false, false};
}

} // namespace

ExperimentConfig default_config(const std::string& experiment) {
    ExperimentConfig config;
    config.experiment = experiment;
    if (experiment == "fig4") {
        config.n = 12;
        config.depth = 6;
        config.seeds = 10;
        config.models = {"naive", "tn-vqc", "tensor-hyper"};
        // At depth 6 only the all-to-all entangler puts the unstructured
        // model in its concentrating regime; the structured models keep the
        // ring.
        config.entangler = "all-to-all";
    } else if (experiment == "concentration") {
        config.n_min = 4;
        config.n_max = 9;
        config.depth = 0;
        config.trials = 1000;
        config.models = {"hea"};
    } else if (experiment == "tail") {
        config.n_min = 4;
        config.n_max = 9;
        config.trials = 5000;
        config.models = {"haar"};
    } else if (experiment == "spread") {
        config.n_min = 4;
        config.n_max = 10;
        config.m = 32;
        config.seeds = 20;
        config.depth = 0;
        config.models = {"hea"};
    } else if (experiment == "gradients") {
        config.n_min = 4;
        config.n_max = 9;
        config.depth = 0;
        config.trials = 1000;
        config.models = {"hea", "tn-vqc"};
    } else if (experiment == "design") {
        config.n_min = 3;
        config.n_max = 6;
        config.depth = 0;
        config.models = {"haar", "hea-deep", "hea-shallow", "bounded-cut"};
    } else {
        throw config_error("unknown experiment: " + experiment);
    }
    return config;
}

namespace {

std::vector<int> parse_int_list(const std::string& value) {
    std::vector<int> out;
    std::istringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& value) {
    std::vector<double> out;
    std::istringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

std::vector<std::string> parse_string_list(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

void apply_kv(ExperimentConfig& config, const std::string& key, const std::string& value) {
    try {
        if (key == "experiment") config.experiment = value;
        else if (key == "n") config.n = std::stoi(value);
        else if (key == "n_min") config.n_min = std::stoi(value);
        else if (key == "n_max") config.n_max = std::stoi(value);
        else if (key == "depth") config.depth = std::stoi(value);
        else if (key == "depth_factor") config.depth_factor = std::stoi(value);
        else if (key == "m") config.m = std::stoi(value);
        else if (key == "m_values") config.m_values = parse_int_list(value);
        else if (key == "trials") config.trials = std::stoi(value);
        else if (key == "seeds") config.seeds = std::stoi(value);
        else if (key == "rank") config.rank = std::stoi(value);
        else if (key == "tn_input_factor") config.tn_input_factor = std::stoi(value);
        else if (key == "entangler") config.entangler = value;
        else if (key == "models") config.models = parse_string_list(value);
        else if (key == "epsilons") config.epsilons = parse_double_list(value);
        else if (key == "observable") config.observable = value;
        else if (key == "purity_samples") config.purity_samples = std::stoi(value);
        else if (key == "frame_pairs") config.frame_pairs = std::stoi(value);
        else if (key == "smd_samples") config.smd_samples = std::stoi(value);
        else if (key == "smd_n_max") config.smd_n_max = std::stoi(value);
        else if (key == "inner_layers") config.inner_layers = std::stoi(value);
        else if (key == "crossings") config.crossings = std::stoi(value);
        else if (key == "master_seed") config.master_seed = std::stoull(value);
        else if (key == "out_dir") config.out_dir = value;
        else if (key == "format") config.format = value;
        else if (key == "jobs") config.jobs = std::stoi(value);
        else throw config_error("unknown config key: " + key);
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        throw config_error("bad value for config key " + key + ": " + value);
    }
}

void validate_config(const ExperimentConfig& config) {
    if (config.n < 1 || config.n_min < 1 || config.n_max < config.n_min)
        throw config_error("config: bad qubit counts");
    if (config.trials < 1 || config.seeds < 1 || config.rank < 1)
        throw config_error("config: counts must be positive");
    if (config.format != "csv" && config.format != "json" && config.format != "svg")
        throw config_error("config: format must be csv|json|svg");
    if (config.entangler != "ring" && config.entangler != "all-to-all")
        throw config_error("config: entangler must be ring|all-to-all");
    if (config.models.empty())
        throw config_error("config: no models selected");
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base) {
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
        apply_kv(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    validate_config(base);
    return base;
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), std::move(base));
}

std::string config_to_kv(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "experiment = " << c.experiment << '\n';
    out << "n = " << c.n << '\n';
    out << "n_min = " << c.n_min << '\n';
    out << "n_max = " << c.n_max << '\n';
    out << "depth = " << c.depth << '\n';
    out << "depth_factor = " << c.depth_factor << '\n';
    out << "m = " << c.m << '\n';
    std::vector<std::string> ms;
    for (int m : c.m_values) ms.push_back(std::to_string(m));
    out << "m_values = " << join(ms, ',') << '\n';
    out << "trials = " << c.trials << '\n';
    out << "seeds = " << c.seeds << '\n';
    out << "rank = " << c.rank << '\n';
    out << "tn_input_factor = " << c.tn_input_factor << '\n';
    out << "entangler = " << c.entangler << '\n';
    out << "models = " << join(c.models, ',') << '\n';
    std::vector<std::string> eps;
    for (double e : c.epsilons) eps.push_back(fmt_double(e));
    out << "epsilons = " << join(eps, ',') << '\n';
    out << "observable = " << c.observable << '\n';
    out << "purity_samples = " << c.purity_samples << '\n';
    out << "frame_pairs = " << c.frame_pairs << '\n';
    out << "smd_samples = " << c.smd_samples << '\n';
    out << "smd_n_max = " << c.smd_n_max << '\n';
    out << "inner_layers = " << c.inner_layers << '\n';
    out << "crossings = " << c.crossings << '\n';
    out << "master_seed = " << c.master_seed << '\n';
    out << "out_dir = " << c.out_dir << '\n';
    out << "format = " << c.format << '\n';
    out << "jobs = " << c.jobs << '\n';
    return out.str();
}

namespace {

/// One model evaluation bundle for the dataset-driven experiments.
struct DatasetOutputs {
    std::vector<double> values;
};

DatasetOutputs evaluate_dataset(const ExperimentConfig& config, const std::string& model, int n,
                                int m, const std::string& init_label, const std::string& data_label) {
    DatasetOutputs out;
    out.values.resize(static_cast<std::size_t>(m));
    const Observable obs = observable_from_spec(config.observable, n);
    const int depth = resolve_depth(config, model == "naive" ? "hea" : model, n);
    Rng init(stream_for(config.master_seed, init_label));
    Rng data(stream_for(config.master_seed, data_label));

    if (model == "naive" || model == "hea") {
        const CircuitLayout layout = build_hea(n, depth, entangler_from(config));
        const ParameterVector theta = sample_params(UniformDist{}, layout.param_count, init);
        const EncodingSpec encoding{EncodingKind::Angle, n};
        for (int i = 0; i < m; ++i)
            out.values[static_cast<std::size_t>(i)] =
                expectation(layout, theta, encoding, unit_normal_vector(n, data), obs);
    } else if (model == "tn-vqc") {
        const int input_dim = config.tn_input_factor * n;
        const TnVqcModel tn = make_tn_vqc(n, depth, config.rank, input_dim, init);
        const ParameterVector theta = sample_params(UniformDist{}, tn.circuit.param_count, init);
        for (int i = 0; i < m; ++i) {
            const std::vector<double> x = unit_normal_vector(input_dim, data);
            out.values[static_cast<std::size_t>(i)] = tn_vqc_forward(tn, x, theta, obs);
        }
    } else if (model == "tensor-hyper") {
        const TensorHyperModel hyper = make_tensor_hyper(n, depth, config.rank, init);
        std::vector<double> sigma(static_cast<std::size_t>(hyper.sigma_dim));
        for (double& s : sigma) s = init.normal();
        for (int i = 0; i < m; ++i) {
            const std::vector<double> x = unit_normal_vector(n, data);
            out.values[static_cast<std::size_t>(i)] = tensor_hyper_forward(hyper, x, sigma, obs);
        }
    } else {
        throw config_error("unknown model: " + model);
    }
    return out;
}

} // namespace

ResultTable run_fig4(const ExperimentConfig& config) {
    validate_config(config);
    ResultTable table;
    table.manifest_json = manifest_for(config).dump(2);

    struct Task {
        std::string model;
        int m = 0;
        int seed = 0;
    };
    std::vector<Task> tasks;
    for (const std::string& model : config.models)
        for (int m : config.m_values)
            for (int seed = 0; seed < config.seeds; ++seed) tasks.push_back({model, m, seed});

    std::vector<std::array<ResultRow, 2>> slot(tasks.size());
    parallel_for(config.jobs, tasks.size(), [&](std::size_t i) {
        const Task& task = tasks[i];
        // One initialization per (model, seed), shared across the m-sweep;
        // datasets are drawn per (model, seed, m).
        const std::string init_label =
            "fig4|" + task.model + "|n=" + std::to_string(config.n) + "|seed=" + std::to_string(task.seed) + "|init";
        const std::string data_label = "fig4|" + task.model + "|n=" + std::to_string(config.n) +
                                       "|m=" + std::to_string(task.m) +
                                       "|seed=" + std::to_string(task.seed) + "|data";
        const DatasetOutputs outputs =
            evaluate_dataset(config, task.model, config.n, task.m, init_label, data_label);
        const MomentSummary summary =
            summarize(outputs.values, stream_for(config.master_seed, data_label + "|boot"));
        slot[i][0] = ResultRow{config.experiment, config.n,     task.m,         task.model,
                               task.seed,         "output_variance", summary.variance, summary.stderr_variance};
        slot[i][1] = ResultRow{config.experiment, config.n, task.m,        task.model,
                               task.seed,         "output_mean", summary.mean, summary.stderr_mean};
    });
    for (const auto& rows : slot) {
        table.rows.push_back(rows[0]);
        table.rows.push_back(rows[1]);
    }

    for (const std::string& model : config.models)
        for (int m : config.m_values) {
            std::vector<double> variances;
            for (const auto& rows : slot)
                if (rows[0].model == model && rows[0].m == m) variances.push_back(rows[0].value);
            const double mean = sample_mean(variances);
            const double sd = std::sqrt(sample_variance(variances));
            table.rows.push_back(
                ResultRow{config.experiment, config.n, m, model, -1, "output_variance_mean", mean, sd});
        }
    return table;
}

ResultTable run_output_concentration(const ExperimentConfig& config) {
    validate_config(config);
    ResultTable table;
    table.manifest_json = manifest_for(config).dump(2);

    for (const std::string& model : config.models) {
        std::vector<double> log2_vars;
        std::vector<double> ns;
        for (int n = config.n_min; n <= config.n_max; ++n) {
            const Observable obs = observable_from_spec(config.observable, n);
            const std::string label =
                "concentration|" + model + "|n=" + std::to_string(n);
            std::vector<double> values(static_cast<std::size_t>(config.trials));

            if (model == "haar") {
                parallel_for(config.jobs, values.size(), [&](std::size_t t) {
                    Rng rng(stream_for(config.master_seed, label + "|t=" + std::to_string(t)));
                    values[t] = expectation_value(obs, sample_haar_state(n, rng));
                });
            } else if (model == "hea") {
                const int depth = resolve_depth(config, model, n);
                const CircuitLayout layout = build_hea(n, depth, entangler_from(config));
                const EncodingSpec encoding{EncodingKind::Angle, n};
                Rng xrng(stream_for(config.master_seed, label + "|x"));
                const std::vector<double> x = unit_normal_vector(n, xrng);
                parallel_for(config.jobs, values.size(), [&](std::size_t t) {
                    Rng rng(stream_for(config.master_seed, label + "|t=" + std::to_string(t)));
                    const ParameterVector theta = sample_params(UniformDist{}, layout.param_count, rng);
                    values[t] = expectation(layout, theta, encoding, x, obs);
                });
            } else {
                throw config_error("concentration: unknown model " + model);
            }

            const MomentSummary summary =
                summarize(values, stream_for(config.master_seed, label + "|boot"));
            table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1, "mean", summary.mean,
                                           summary.stderr_mean});
            table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1, "variance",
                                           summary.variance, summary.stderr_variance});
            table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1, "target_mean",
                                           observable_trace(obs) / std::pow(2.0, n), 0.0});
            table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1, "haar_variance_ref",
                                           haar_output_variance(obs), 0.0});
            if (summary.variance > 0.0) {
                log2_vars.push_back(std::log2(summary.variance));
                ns.push_back(static_cast<double>(n));
            }
        }
        if (ns.size() >= 2)
            table.rows.push_back(ResultRow{config.experiment, 0, 0, model, -1, "log2_variance_slope",
                                           least_squares_slope(ns, log2_vars), 0.0});
    }
    return table;
}

ResultTable run_tail_probability(const ExperimentConfig& config) {
    validate_config(config);
    ResultTable table;
    table.manifest_json = manifest_for(config).dump(2);

    for (const std::string& model : config.models) {
        for (int n = config.n_min; n <= config.n_max; ++n) {
            const Observable obs = observable_from_spec(config.observable, n);
            const double center = observable_trace(obs) / std::pow(2.0, n);
            const std::string label = "tail|" + model + "|n=" + std::to_string(n);
            std::vector<double> deviation(static_cast<std::size_t>(config.trials));

            if (model == "haar") {
                parallel_for(config.jobs, deviation.size(), [&](std::size_t t) {
                    Rng rng(stream_for(config.master_seed, label + "|t=" + std::to_string(t)));
                    deviation[t] = std::abs(expectation_value(obs, sample_haar_state(n, rng)) - center);
                });
            } else if (model == "hea") {
                const int depth = resolve_depth(config, model, n);
                const CircuitLayout layout = build_hea(n, depth, entangler_from(config));
                const EncodingSpec encoding{EncodingKind::Angle, n};
                Rng xrng(stream_for(config.master_seed, label + "|x"));
                const std::vector<double> x = unit_normal_vector(n, xrng);
                parallel_for(config.jobs, deviation.size(), [&](std::size_t t) {
                    Rng rng(stream_for(config.master_seed, label + "|t=" + std::to_string(t)));
                    const ParameterVector theta = sample_params(UniformDist{}, layout.param_count, rng);
                    deviation[t] = std::abs(expectation(layout, theta, encoding, x, obs) - center);
                });
            } else {
                throw config_error("tail: unknown model " + model);
            }

            for (double eps : config.epsilons) {
                std::size_t hits = 0;
                for (double dev : deviation)
                    if (dev > eps) ++hits;
                const double freq = static_cast<double>(hits) / static_cast<double>(config.trials);
                const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(config.trials));
                table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1,
                                               std::string("exceedance_eps") + fmt_eps(eps), freq, se});
            }
        }
    }
    return table;
}

ResultTable run_spread_scan(const ExperimentConfig& config) {
    validate_config(config);
    ResultTable table;
    table.manifest_json = manifest_for(config).dump(2);

    struct Task {
        std::string model;
        int n = 0;
        int seed = 0;
    };
    std::vector<Task> tasks;
    for (const std::string& model : config.models)
        for (int n = config.n_min; n <= config.n_max; ++n)
            for (int seed = 0; seed < config.seeds; ++seed) tasks.push_back({model, n, seed});

    std::vector<ResultRow> slot(tasks.size());
    parallel_for(config.jobs, tasks.size(), [&](std::size_t i) {
        const Task& task = tasks[i];
        const std::string label = "spread|" + task.model + "|n=" + std::to_string(task.n) +
                                  "|seed=" + std::to_string(task.seed);
        const std::string model = task.model == "hea" ? "naive" : task.model;
        const DatasetOutputs outputs =
            evaluate_dataset(config, model, task.n, config.m, label + "|init", label + "|data");
        slot[i] = ResultRow{config.experiment, task.n,       config.m,
                            task.model,        task.seed,    "max_spread",
                            max_pairwise_spread(outputs.values), 0.0};
    });
    table.rows = slot;

    for (const std::string& model : config.models)
        for (int n = config.n_min; n <= config.n_max; ++n) {
            std::vector<double> spreads;
            for (const ResultRow& row : slot)
                if (row.model == model && row.n == n) spreads.push_back(row.value);
            table.rows.push_back(ResultRow{config.experiment, n, config.m, model, -1, "max_spread_mean",
                                           sample_mean(spreads), std::sqrt(sample_variance(spreads))});
        }
    return table;
}

ResultTable run_gradient_scan(const ExperimentConfig& config) {
    validate_config(config);
    ResultTable table;
    table.manifest_json = manifest_for(config).dump(2);

    struct PerN {
        std::vector<ResultRow> rows;
        double log2_var = 0.0;
        bool has_var = false;
    };

    for (const std::string& model : config.models) {
        const int n_count = config.n_max - config.n_min + 1;
        std::vector<PerN> per_n(static_cast<std::size_t>(n_count));

        parallel_for(config.jobs, per_n.size(), [&](std::size_t idx) {
            const int n = config.n_min + static_cast<int>(idx);
            const Observable obs = observable_from_spec(config.observable, n);
            const int depth = resolve_depth(config, model, n);
            const std::string label = "gradients|" + model + "|n=" + std::to_string(n);
            const int slot_index = 0;
            std::vector<double> grads(static_cast<std::size_t>(config.trials));

            if (model == "hea") {
                const CircuitLayout layout = build_hea(n, depth, entangler_from(config));
                const EncodingSpec encoding{EncodingKind::Angle, n};
                Rng xrng(stream_for(config.master_seed, label + "|x"));
                const std::vector<double> x = unit_normal_vector(n, xrng);
                for (int t = 0; t < config.trials; ++t) {
                    Rng rng(stream_for(config.master_seed, label + "|t=" + std::to_string(t)));
                    const ParameterVector theta = sample_params(UniformDist{}, layout.param_count, rng);
                    grads[static_cast<std::size_t>(t)] =
                        parameter_shift_gradient(layout, theta, encoding, x, obs, slot_index);
                }
                // Generator trace diagnostic on a few (draw, slot) pairs while
                // the dense frame is affordable.
                if ((std::size_t{1} << n) <= dense_cap() && n <= 7) {
                    double max_trace = 0.0;
                    for (int t = 0; t < 3; ++t) {
                        Rng rng(stream_for(config.master_seed, label + "|gen|t=" + std::to_string(t)));
                        const ParameterVector theta =
                            sample_params(UniformDist{}, layout.param_count, rng);
                        for (int k : {0, layout.param_count / 3, layout.param_count / 2,
                                      layout.param_count - 1}) {
                            const GeneratorFrame frame =
                                generator_observable(layout, theta, encoding, x, obs, k);
                            max_trace = std::max(max_trace, std::abs(frame.generator.trace()));
                        }
                    }
                    per_n[idx].rows.push_back(ResultRow{config.experiment, n, 0, model, -1,
                                                        "generator_trace_max_abs", max_trace, 0.0});
                }
            } else if (model == "tn-vqc") {
                const int input_dim = config.tn_input_factor * n;
                Rng xrng(stream_for(config.master_seed, label + "|x"));
                const std::vector<double> x = unit_normal_vector(input_dim, xrng);
                const EncodingSpec encoding{EncodingKind::Angle, n};
                for (int t = 0; t < config.trials; ++t) {
                    Rng rng(stream_for(config.master_seed, label + "|t=" + std::to_string(t)));
                    const TnVqcModel tn = make_tn_vqc(n, depth, config.rank, input_dim, rng);
                    const ParameterVector theta =
                        sample_params(UniformDist{}, tn.circuit.param_count, rng);
                    const std::vector<double> angles = tt_contract(tn.encoder, x);
                    grads[static_cast<std::size_t>(t)] =
                        parameter_shift_gradient(tn.circuit, theta, encoding, angles, obs, slot_index);
                }
            } else {
                throw config_error("gradients: unknown model " + model);
            }

            const MomentSummary summary =
                summarize(grads, stream_for(config.master_seed, label + "|boot"));
            per_n[idx].rows.insert(per_n[idx].rows.begin(),
                                   {ResultRow{config.experiment, n, 0, model, -1, "mean", summary.mean,
                                              summary.stderr_mean},
                                    ResultRow{config.experiment, n, 0, model, -1, "variance",
                                              summary.variance, summary.stderr_variance}});
            if (summary.variance > 0.0) {
                per_n[idx].log2_var = std::log2(summary.variance);
                per_n[idx].has_var = true;
            }
        });

        std::vector<double> ns, log2_vars;
        for (std::size_t idx = 0; idx < per_n.size(); ++idx) {
            for (const ResultRow& row : per_n[idx].rows) table.rows.push_back(row);
            if (per_n[idx].has_var) {
                ns.push_back(static_cast<double>(config.n_min + static_cast<int>(idx)));
                log2_vars.push_back(per_n[idx].log2_var);
            }
        }
        if (ns.size() >= 2)
            table.rows.push_back(ResultRow{config.experiment, 0, 0, model, -1, "log2_variance_slope",
                                           least_squares_slope(ns, log2_vars), 0.0});
    }
    return table;
}

ResultTable run_design_diagnostics(const ExperimentConfig& config) {
    validate_config(config);
    ResultTable table;
    table.manifest_json = manifest_for(config).dump(2);

    for (const std::string& model : config.models) {
        for (int n = config.n_min; n <= config.n_max; ++n) {
            const std::string label = "design|" + model + "|n=" + std::to_string(n);

            UnitaryEnsemble unitaries{"", nullptr};
            if (model == "haar") {
                unitaries = haar_unitary_ensemble(n);
            } else if (model == "hea-deep") {
                unitaries = circuit_unitary_ensemble(
                    build_hea(n, config.depth_factor * n, entangler_from(config)), UniformDist{});
            } else if (model == "hea-shallow") {
                unitaries =
                    circuit_unitary_ensemble(build_hea(n, 1, entangler_from(config)), UniformDist{});
            } else if (model == "bounded-cut") {
                unitaries = bounded_cut_unitary_ensemble(n, config.inner_layers, config.crossings);
            } else {
                throw config_error("design: unknown ensemble " + model);
            }

            const FramePotentialEstimate fp = frame_potential(
                unitaries, 2, config.frame_pairs, stream_for(config.master_seed, label + "|fp"));
            table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1, "frame_potential_2",
                                           fp.value, fp.stderr_value});
            table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1,
                                           "frame_potential_haar_ref", fp.haar_value, 0.0});

            const Bipartition cut = Bipartition::balanced(n);
            std::vector<double> purities(static_cast<std::size_t>(config.purity_samples));
            std::vector<int> osr(purities.size());
            parallel_for(config.jobs, purities.size(), [&](std::size_t s) {
                Rng rng(stream_for(config.master_seed, label + "|purity|s=" + std::to_string(s)));
                const ComplexMatrix u = unitaries.sample(rng);
                purities[s] = choi_purity(u, cut);
                osr[s] = operator_schmidt_rank(u, cut);
            });
            const MomentSummary purity =
                summarize(purities, stream_for(config.master_seed, label + "|boot"));
            table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1, "choi_purity_mean",
                                           purity.mean, purity.stderr_mean});
            table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1, "choi_purity_min",
                                           *std::min_element(purities.begin(), purities.end()), 0.0});
            table.rows.push_back(
                ResultRow{config.experiment, n, 0, model, -1, "choi_purity_haar_ref",
                          haar_choi_purity_mean(n, static_cast<int>(cut.block_a.size())), 0.0});
            table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1, "osr_max",
                                           static_cast<double>(*std::max_element(osr.begin(), osr.end())),
                                           0.0});

            if (n <= config.smd_n_max) {
                StateEnsemble states{"", nullptr};
                if (model == "haar") {
                    states = haar_state_ensemble(n);
                } else {
                    auto sampler = unitaries.sample;
                    states = StateEnsemble{model, [n, sampler](Rng& rng) {
                                               const ComplexMatrix u = sampler(rng);
                                               ComplexVector amps = u.col(0);
                                               return StateVector(n, std::move(amps));
                                           }};
                }
                const SecondMomentReport smd = second_moment_distance(
                    states, config.smd_samples, stream_for(config.master_seed, label + "|smd"));
                table.rows.push_back(ResultRow{config.experiment, n, 0, model, -1,
                                               "second_moment_distance", smd.distance, smd.max_stderr});
            }
        }
    }
    return table;
}

ResultTable run_experiment(const ExperimentConfig& config) {
    if (config.experiment == "fig4") return run_fig4(config);
    if (config.experiment == "concentration") return run_output_concentration(config);
    if (config.experiment == "tail") return run_tail_probability(config);
    if (config.experiment == "spread") return run_spread_scan(config);
    if (config.experiment == "gradients") return run_gradient_scan(config);
    if (config.experiment == "design") return run_design_diagnostics(config);
    throw config_error("unknown experiment: " + config.experiment);
}

std::string table_to_csv(const ResultTable& table) {
    std::string out = "experiment,n,m,model,seed,statistic,value,stderr\n";
    for (const ResultRow& row : table.rows) {
        out += row.experiment;
        out += ',';
        out += std::to_string(row.n);
        out += ',';
        out += std::to_string(row.m);
        out += ',';
        out += row.model;
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += row.statistic;
        out += ',';
        out += fmt_double(row.value);
        out += ',';
        out += fmt_double(row.stderr_value);
        out += '\n';
    }
    return out;
}

std::string table_to_json(const ResultTable& table) {
    json doc;
    doc["manifest"] = table.manifest_json.empty() ? json::object() : json::parse(table.manifest_json);
    json rows = json::array();
    for (const ResultRow& row : table.rows) {
        rows.push_back({{"experiment", row.experiment},
                        {"n", row.n},
                        {"m", row.m},
                        {"model", row.model},
                        {"seed", row.seed},
                        {"statistic", row.statistic},
                        {"value", row.value},
                        {"stderr", row.stderr_value}});
    }
    doc["rows"] = rows;
    return doc.dump(2);
}

namespace {

struct SvgPoint {
    double x = 0.0;
    double y = 0.0;
    double err = 0.0;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string svg_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string table_to_svg(const ResultTable& table, const std::string& experiment) {
    const SeriesSpec spec = chart_spec(experiment);

    std::map<std::string, std::vector<SvgPoint>> series;
    for (const ResultRow& row : table.rows) {
        bool match;
        std::string key;
        if (spec.series_by_statistic) {
            match = row.statistic.rfind(spec.statistic, 0) == 0;
            key = row.statistic;
        } else {
            match = row.statistic == spec.statistic;
            key = row.model;
        }
        if (!match) continue;
        SvgPoint p;
        p.x = spec.x_is_m ? static_cast<double>(row.m) : static_cast<double>(row.n);
        p.y = row.value;
        p.err = row.stderr_value;
        series[key].push_back(p);
    }

    const double width = 720, height = 480;
    const double left = 80, right = width - 170, top = 30, bottom = height - 60;

    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (auto& [key, pts] : series) {
        std::sort(pts.begin(), pts.end(), [](const SvgPoint& a, const SvgPoint& b) { return a.x < b.x; });
        for (const SvgPoint& p : pts) {
            x_lo = std::min(x_lo, p.x);
            x_hi = std::max(x_hi, p.x);
            if (p.y > 0.0) {
                const double lower = (p.y - p.err > 0.0) ? p.y - p.err : p.y;
                y_lo = std::min(y_lo, std::log10(lower));
                y_hi = std::max(y_hi, std::log10(p.y + p.err));
            }
        }
    }
    if (series.empty() || x_hi <= x_lo) {
        x_lo = 0.0;
        x_hi = 1.0;
    }
    if (y_hi <= y_lo) {
        y_lo = -1.0;
        y_hi = 0.0;
    }
    y_lo = std::floor(y_lo);
    y_hi = std::ceil(y_hi);

    auto sx = [&](double x) {
        const double t = spec.x_is_m ? (std::log2(x) - std::log2(x_lo)) / (std::log2(x_hi) - std::log2(x_lo))
                                     : (x - x_lo) / (x_hi - x_lo);
        return left + t * (right - left);
    };
    auto sy = [&](double y) {
        const double ly = std::log10(std::max(1e-300, y));
        return bottom - (ly - y_lo) / (y_hi - y_lo) * (bottom - top);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_number(width) + "\" height=\"" +
           svg_number(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + svg_number(left) + "\" y1=\"" + svg_number(bottom) + "\" x2=\"" +
           svg_number(right) + "\" y2=\"" + svg_number(bottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + svg_number(left) + "\" y1=\"" + svg_number(top) + "\" x2=\"" + svg_number(left) +
           "\" y2=\"" + svg_number(bottom) + "\" stroke=\"black\"/>\n";

    // y decade ticks
    for (double dec = y_lo; dec <= y_hi + 0.5; dec += 1.0) {
        const double y = bottom - (dec - y_lo) / (y_hi - y_lo) * (bottom - top);
        svg += "<line x1=\"" + svg_number(left - 4) + "\" y1=\"" + svg_number(y) + "\" x2=\"" +
               svg_number(left) + "\" y2=\"" + svg_number(y) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + svg_number(left - 8) + "\" y=\"" + svg_number(y + 4) +
               "\" text-anchor=\"end\">1e" + svg_number(dec) + "</text>\n";
    }
    // x ticks at data points
    std::set<double> xs;
    for (const auto& [key, pts] : series)
        for (const SvgPoint& p : pts) xs.insert(p.x);
    for (double x : xs) {
        svg += "<line x1=\"" + svg_number(sx(x)) + "\" y1=\"" + svg_number(bottom) + "\" x2=\"" +
               svg_number(sx(x)) + "\" y2=\"" + svg_number(bottom + 4) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + svg_number(sx(x)) + "\" y=\"" + svg_number(bottom + 18) +
               "\" text-anchor=\"middle\">" + svg_number(x) + "</text>\n";
    }
    svg += "<text x=\"" + svg_number((left + right) / 2) + "\" y=\"" + svg_number(height - 16) +
           "\" text-anchor=\"middle\">" + (spec.x_is_m ? "dataset size m" : "qubits n") + "</text>\n";
    svg += "<text x=\"18\" y=\"" + svg_number((top + bottom) / 2) + "\" transform=\"rotate(-90 18 " +
           svg_number((top + bottom) / 2) + ")\" text-anchor=\"middle\">" + spec.statistic + "</text>\n";

    int color = 0;
    for (const auto& [key, pts] : series) {
        const std::string stroke = kPalette[color % 6];
        std::string path;
        for (const SvgPoint& p : pts) {
            if (p.y <= 0.0) continue;
            path += path.empty() ? "M" : " L";
            path += svg_number(sx(p.x)) + "," + svg_number(sy(p.y));
        }
        if (!path.empty())
            svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"1.5\"/>\n";
        for (const SvgPoint& p : pts) {
            if (p.y <= 0.0) continue;
            svg += "<circle cx=\"" + svg_number(sx(p.x)) + "\" cy=\"" + svg_number(sy(p.y)) +
                   "\" r=\"3\" fill=\"" + stroke + "\"/>\n";
            if (p.err > 0.0 && p.y - p.err > 0.0) {
                svg += "<line x1=\"" + svg_number(sx(p.x)) + "\" y1=\"" + svg_number(sy(p.y - p.err)) +
                       "\" x2=\"" + svg_number(sx(p.x)) + "\" y2=\"" + svg_number(sy(p.y + p.err)) +
                       "\" stroke=\"" + stroke + "\"/>\n";
            }
        }
        const double ly = top + 18.0 * color;
        svg += "<rect x=\"" + svg_number(right + 10) + "\" y=\"" + svg_number(ly - 9) +
               "\" width=\"12\" height=\"12\" fill=\"" + stroke + "\"/>\n";
        svg += "<text x=\"" + svg_number(right + 28) + "\" y=\"" + svg_number(ly + 1) + "\">" + key +
               "</text>\n";
        ++color;
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<std::string> emit_outputs(const ResultTable& table, const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec)
        throw config_error("cannot create output directory: " + config.out_dir);

    auto write_file = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(config.out_dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw config_error("cannot write output file: " + path);
        out << content;
        return path;
    };

    std::vector<std::string> written;
    if (config.format == "csv") {
        written.push_back(write_file(config.experiment + ".csv", table_to_csv(table)));
    } else if (config.format == "json") {
        written.push_back(write_file(config.experiment + ".json", table_to_json(table)));
    } else if (config.format == "svg") {
        written.push_back(write_file(config.experiment + ".csv", table_to_csv(table)));
        written.push_back(write_file(config.experiment + ".svg", table_to_svg(table, config.experiment)));
    } else {
        throw config_error("unknown output format: " + config.format);
    }
    written.push_back(write_file(config.experiment + "_manifest.json", table.manifest_json + "\n"));
    return written;
}

} // namespace vqclab
