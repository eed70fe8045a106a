#include "vqclab/tensor_train.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace vqclab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

int TensorTrain::max_rank() const {
    int r = 1;
    for (const TTCore& core : cores) r = std::max({r, core.r_left, core.r_right});
    return r;
}

std::size_t TensorTrain::parameter_count() const {
    std::size_t count = 0;
    for (const TTCore& core : cores) count += core.data.size();
    return count;
}

void validate_train(const TensorTrain& train, int rank_cap) {
    if (train.cores.empty())
        throw config_error("tensor train: no cores");
    if (train.cores.front().r_left != 1 || train.cores.back().r_right != 1)
        throw config_error("tensor train: boundary ranks must be 1");
    for (std::size_t k = 0; k + 1 < train.cores.size(); ++k)
        if (train.cores[k].r_right != train.cores[k + 1].r_left)
            throw config_error("tensor train: adjacent ranks do not match");
    for (const TTCore& core : train.cores) {
        const std::size_t expected = static_cast<std::size_t>(core.r_left) * core.in_dim * core.out_dim * core.r_right;
        if (core.data.size() != expected)
            throw config_error("tensor train: core data size mismatch");
    }
    if (train.max_rank() > rank_cap)
        throw config_error("tensor train: rank exceeds cap");
}

std::vector<int> factor_modes(int dim) {
    if (dim < 1)
        throw config_error("factor_modes: dimension must be positive");
    // Smallest 2^a * 3^b >= dim; modes emitted 3s first, then 2s.
    int best = -1;
    int best_a = 0, best_b = 0;
    for (int b = 0, p3 = 1; p3 < 4 * dim; ++b, p3 *= 3) {
        int a = 0, p = p3;
        while (p < dim) {
            p *= 2;
            ++a;
        }
        if (best < 0 || p < best) {
            best = p;
            best_a = a;
            best_b = b;
        }
    }
    std::vector<int> modes;
    modes.insert(modes.end(), static_cast<std::size_t>(best_b), 3);
    modes.insert(modes.end(), static_cast<std::size_t>(best_a), 2);
    if (modes.empty()) modes.push_back(1);
    return modes;
}

ModePlan plan_modes(int in_dim, int out_dim) {
    ModePlan plan;
    plan.in_dim = in_dim;
    plan.out_dim = out_dim;
    plan.in_modes = factor_modes(in_dim);
    plan.out_modes = factor_modes(out_dim);
    while (plan.in_modes.size() < plan.out_modes.size()) plan.in_modes.push_back(1);
    while (plan.out_modes.size() < plan.in_modes.size()) plan.out_modes.push_back(1);
    plan.padded_in = 1;
    for (int m : plan.in_modes) plan.padded_in *= m;
    plan.padded_out = 1;
    for (int m : plan.out_modes) plan.padded_out *= m;
    return plan;
}

double apply_activation(Activation activation, double z) {
    switch (activation) {
        case Activation::ScaledTanh: return kPi * std::tanh(z);
        case Activation::Identity: return z;
    }
    return z;
}

TTMatrixMap make_tt_map(int in_dim, int out_dim, int rank, Activation activation, Rng& rng) {
    if (rank < 1)
        throw config_error("make_tt_map: rank must be >= 1");
    TTMatrixMap map;
    map.plan = plan_modes(in_dim, out_dim);
    map.activation = activation;
    map.rank_cap = rank;
    const std::size_t n_modes = map.plan.in_modes.size();
    for (std::size_t k = 0; k < n_modes; ++k) {
        TTCore core;
        core.r_left = (k == 0) ? 1 : rank;
        core.r_right = (k + 1 == n_modes) ? 1 : rank;
        core.in_dim = map.plan.in_modes[k];
        core.out_dim = map.plan.out_modes[k];
        core.data.resize(static_cast<std::size_t>(core.r_left) * core.in_dim * core.out_dim * core.r_right);
        const double stddev = 1.0 / std::sqrt(static_cast<double>(rank) * core.in_dim);
        for (double& w : core.data) w = rng.normal(0.0, stddev);
        map.train.cores.push_back(std::move(core));
    }
    validate_train(map.train, rank);
    return map;
}

TTMatrixMap identity_tt_map(int dim, Activation activation) {
    TTMatrixMap map;
    map.plan = plan_modes(dim, dim);
    map.activation = activation;
    map.rank_cap = 1;
    for (std::size_t k = 0; k < map.plan.in_modes.size(); ++k) {
        TTCore core;
        core.r_left = 1;
        core.r_right = 1;
        core.in_dim = map.plan.in_modes[k];
        core.out_dim = map.plan.out_modes[k];
        core.data.assign(static_cast<std::size_t>(core.in_dim) * core.out_dim, 0.0);
        for (int i = 0; i < core.in_dim; ++i) core.at(0, i, i, 0) = 1.0;
        map.train.cores.push_back(std::move(core));
    }
    validate_train(map.train, 1);
    return map;
}

std::vector<double> tt_contract(const TTMatrixMap& map, std::span<const double> v) {
    if (static_cast<int>(v.size()) != map.plan.in_dim)
        throw config_error("tt_contract: input length mismatch");

    // Carry tensor T[a][J][I]: rank index, emitted output prefix, pending
    // input suffix. Starts as the zero-padded input, ends as the padded
    // output.
    std::vector<double> carry(static_cast<std::size_t>(map.plan.padded_in), 0.0);
    std::copy(v.begin(), v.end(), carry.begin());
    int rank = 1;
    int out_prefix = 1;
    int in_suffix = map.plan.padded_in;

    for (const TTCore& core : map.train.cores) {
        const int in_suffix_new = in_suffix / core.in_dim;
        const int out_prefix_new = out_prefix * core.out_dim;
        std::vector<double> next(static_cast<std::size_t>(core.r_right) * out_prefix_new * in_suffix_new, 0.0);
        for (int a = 0; a < rank; ++a)
            for (int jj = 0; jj < out_prefix; ++jj)
                for (int i = 0; i < core.in_dim; ++i)
                    for (int ii = 0; ii < in_suffix_new; ++ii) {
                        const double src =
                            carry[(static_cast<std::size_t>(a) * out_prefix + jj) * in_suffix +
                                  static_cast<std::size_t>(i) * in_suffix_new + ii];
                        if (src == 0.0) continue;
                        for (int j = 0; j < core.out_dim; ++j)
                            for (int ar = 0; ar < core.r_right; ++ar)
                                next[(static_cast<std::size_t>(ar) * out_prefix_new + jj * core.out_dim + j) *
                                         in_suffix_new +
                                     ii] += core.at(a, i, j, ar) * src;
                    }
        carry = std::move(next);
        rank = core.r_right;
        out_prefix = out_prefix_new;
        in_suffix = in_suffix_new;
    }

    std::vector<double> out(static_cast<std::size_t>(map.plan.out_dim));
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = apply_activation(map.activation, carry[j]);
    return out;
}

Eigen::MatrixXd tt_densify(const TTMatrixMap& map) {
    const std::size_t rows = static_cast<std::size_t>(map.plan.padded_out);
    const std::size_t cols = static_cast<std::size_t>(map.plan.padded_in);
    if (rows > dense_cap() || cols > dense_cap())
        throw config_error("tt_densify: dense dimensions exceed cap");
    // Build by Kronecker-structured accumulation: dense[(j...),(i...)] =
    // product over cores of G_k[a_{k-1}, i_k, j_k, a_k].
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(1, 1);
    dense(0, 0) = 1.0;
    int rank = 1;
    for (const TTCore& core : map.train.cores) {
        const Eigen::Index r_new = static_cast<Eigen::Index>(dense.rows()) * core.out_dim;
        const Eigen::Index c_new = static_cast<Eigen::Index>(dense.cols() / rank) * core.in_dim * core.r_right;
        // dense currently maps (out-prefix) x (in-prefix * rank); absorb one
        // more core into both factors.
        const Eigen::Index in_prefix = dense.cols() / rank;
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(r_new, c_new);
        for (Eigen::Index jp = 0; jp < dense.rows(); ++jp)
            for (Eigen::Index ip = 0; ip < in_prefix; ++ip)
                for (int a = 0; a < rank; ++a) {
                    const double base = dense(jp, ip * rank + a);
                    if (base == 0.0) continue;
                    for (int j = 0; j < core.out_dim; ++j)
                        for (int i = 0; i < core.in_dim; ++i)
                            for (int ar = 0; ar < core.r_right; ++ar)
                                next(jp * core.out_dim + j,
                                     (ip * core.in_dim + i) * core.r_right + ar) += base * core.at(a, i, j, ar);
                }
        dense = std::move(next);
        rank = core.r_right;
    }
    return dense;
}

TnVqcModel make_tn_vqc(int n_qubits, int depth, int rank, int input_dim, Rng& rng) {
    TnVqcModel model;
    model.encoder = make_tt_map(input_dim, n_qubits, rank, Activation::ScaledTanh, rng);
    model.circuit = build_hea(n_qubits, depth);
    return model;
}

TensorHyperModel make_tensor_hyper(int n_qubits, int depth, int rank, Rng& rng) {
    TensorHyperModel model;
    model.circuit = build_hea(n_qubits, depth);
    const int p = model.circuit.param_count;
    ModePlan sigma_plan = plan_modes(p, p);
    model.sigma_dim = sigma_plan.padded_in;
    model.generator = make_tt_map(model.sigma_dim, p, rank, Activation::ScaledTanh, rng);
    return model;
}

double tn_vqc_forward(const TnVqcModel& model, std::span<const double> x,
                      const ParameterVector& theta, const Observable& obs) {
    const std::vector<double> angles = tt_contract(model.encoder, x);
    const EncodingSpec encoding{EncodingKind::Angle, model.circuit.n_qubits};
    return expectation(model.circuit, theta, encoding, angles, obs);
}

double tensor_hyper_forward(const TensorHyperModel& model, std::span<const double> x,
                            std::span<const double> sigma, const Observable& obs) {
    if (static_cast<int>(sigma.size()) != model.sigma_dim)
        throw config_error("tensor_hyper_forward: sigma length mismatch");
    const ParameterVector theta = tt_contract(model.generator, sigma);
    const EncodingSpec encoding{EncodingKind::Angle, model.circuit.n_qubits};
    return expectation(model.circuit, theta, encoding, std::vector<double>(x.begin(), x.end()), obs);
}

std::string model_to_json(const TensorStructuredModel& model) {
    using json = nlohmann::json;
    json doc;
    auto describe_map = [](const TTMatrixMap& map) {
        return json{{"in_dim", map.plan.in_dim},
                    {"out_dim", map.plan.out_dim},
                    {"in_modes", map.plan.in_modes},
                    {"out_modes", map.plan.out_modes},
                    {"rank", map.rank_cap},
                    {"activation", map.activation == Activation::ScaledTanh ? "pi_tanh" : "identity"},
                    {"parameter_count", map.train.parameter_count()}};
    };
    if (const auto* tn = std::get_if<TnVqcModel>(&model)) {
        doc["kind"] = "tn-vqc";
        doc["encoder"] = describe_map(tn->encoder);
        doc["circuit"] = nlohmann::json::parse(layout_to_json(tn->circuit));
    } else {
        const auto& hyper = std::get<TensorHyperModel>(model);
        doc["kind"] = "tensor-hyper";
        doc["generator"] = describe_map(hyper.generator);
        doc["sigma_dim"] = hyper.sigma_dim;
        doc["circuit"] = nlohmann::json::parse(layout_to_json(hyper.circuit));
    }
    return doc.dump(2);
}

namespace {

std::vector<double> fixed_unit_input(int dim, std::uint64_t master_seed, const std::string& label) {
    Rng rng(stream_for(master_seed, label));
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

} // namespace

std::vector<VarianceScanRow> anti_concentration_scan(const ScanSettings& settings, int n_min, int n_max,
                                                     std::uint64_t master_seed, const std::string& label) {
    if (settings.trials < 1)
        throw config_error("anti_concentration_scan: trials must be positive");
    std::vector<VarianceScanRow> table;
    for (int n = n_min; n <= n_max; ++n) {
        const Observable obs = Observable::pauli_z_on(0, n);
        const int depth = settings.depth_scales_with_n ? settings.depth * n : settings.depth;
        std::vector<double> outputs(static_cast<std::size_t>(settings.trials));

        if (settings.family == ModelFamily::Hea) {
            const std::vector<double> x =
                fixed_unit_input(n, master_seed, label + "|x|n=" + std::to_string(n));
            const EncodingSpec encoding{EncodingKind::Angle, n};
            if (depth == 0) {
                // No parameterized gates at all: the output is a constant.
                StateVector state = StateVector::zero_state(n);
                state = apply_encoding(encoding, x, std::move(state));
                std::fill(outputs.begin(), outputs.end(), expectation_value(obs, state));
            } else {
                const CircuitLayout layout = build_hea(n, depth);
                for (int t = 0; t < settings.trials; ++t) {
                    Rng rng(stream_for(master_seed,
                                       label + "|hea|n=" + std::to_string(n) + "|t=" + std::to_string(t)));
                    const ParameterVector theta = sample_params(UniformDist{}, layout.param_count, rng);
                    outputs[static_cast<std::size_t>(t)] = expectation(layout, theta, encoding, x, obs);
                }
            }
        } else if (settings.family == ModelFamily::TnVqc) {
            const int input_dim = settings.input_factor * n;
            const std::vector<double> x =
                fixed_unit_input(input_dim, master_seed, label + "|x|n=" + std::to_string(n));
            for (int t = 0; t < settings.trials; ++t) {
                Rng rng(stream_for(master_seed,
                                   label + "|tn|n=" + std::to_string(n) + "|t=" + std::to_string(t)));
                const TnVqcModel model = make_tn_vqc(n, depth, settings.rank, input_dim, rng);
                const ParameterVector theta = sample_params(UniformDist{}, model.circuit.param_count, rng);
                outputs[static_cast<std::size_t>(t)] = tn_vqc_forward(model, x, theta, obs);
            }
        } else {
            const std::vector<double> x =
                fixed_unit_input(n, master_seed, label + "|x|n=" + std::to_string(n));
            for (int t = 0; t < settings.trials; ++t) {
                Rng rng(stream_for(master_seed,
                                   label + "|hyper|n=" + std::to_string(n) + "|t=" + std::to_string(t)));
                const TensorHyperModel model = make_tensor_hyper(n, depth, settings.rank, rng);
                std::vector<double> sigma(static_cast<std::size_t>(model.sigma_dim));
                for (double& s : sigma) s = rng.normal();
                outputs[static_cast<std::size_t>(t)] = tensor_hyper_forward(model, x, sigma, obs);
            }
        }
        VarianceScanRow row;
        row.n = n;
        row.outputs = summarize(outputs, stream_for(master_seed, label + "|boot|n=" + std::to_string(n)));
        table.push_back(std::move(row));
    }
    return table;
}

std::vector<CoreGradientRow> hyper_core_gradient_scan(int n_qubits, int depth, int rank, int trials,
                                                      std::uint64_t master_seed, const std::string& label,
                                                      int max_probes) {
    const Observable obs = Observable::pauli_z_on(0, n_qubits);
    const std::vector<double> x =
        fixed_unit_input(n_qubits, master_seed, label + "|x|n=" + std::to_string(n_qubits));
    const double h = 1e-4;

    // Probe entries chosen deterministically from the model shape.
    Rng shape_rng(stream_for(master_seed, label + "|shape"));
    const TensorHyperModel shape = make_tensor_hyper(n_qubits, depth, rank, shape_rng);
    std::vector<std::pair<int, std::size_t>> probes;
    for (std::size_t k = 0; k < shape.generator.train.cores.size(); ++k) {
        const std::size_t size = shape.generator.train.cores[k].data.size();
        probes.emplace_back(static_cast<int>(k), std::size_t{0});
        if (size > 1) probes.emplace_back(static_cast<int>(k), size / 2);
    }
    if (static_cast<int>(probes.size()) > max_probes) probes.resize(static_cast<std::size_t>(max_probes));

    std::vector<std::vector<double>> grads(probes.size(),
                                           std::vector<double>(static_cast<std::size_t>(trials)));
    for (int t = 0; t < trials; ++t) {
        Rng rng(stream_for(master_seed, label + "|n=" + std::to_string(n_qubits) + "|t=" + std::to_string(t)));
        TensorHyperModel model = make_tensor_hyper(n_qubits, depth, rank, rng);
        std::vector<double> sigma(static_cast<std::size_t>(model.sigma_dim));
        for (double& s : sigma) s = rng.normal();
        for (std::size_t p = 0; p < probes.size(); ++p) {
            auto& entry = model.generator.train.cores[static_cast<std::size_t>(probes[p].first)]
                              .data[probes[p].second];
            const double saved = entry;
            entry = saved + h;
            const double plus = tensor_hyper_forward(model, x, sigma, obs);
            entry = saved - h;
            const double minus = tensor_hyper_forward(model, x, sigma, obs);
            entry = saved;
            grads[p][static_cast<std::size_t>(t)] = (plus - minus) / (2.0 * h);
        }
    }

    std::vector<CoreGradientRow> rows;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        CoreGradientRow row;
        row.n = n_qubits;
        row.core_index = probes[p].first;
        row.entry_index = probes[p].second;
        row.gradient_variance = sample_variance(grads[p]);
        rows.push_back(row);
    }
    return rows;
}

} // namespace vqclab
