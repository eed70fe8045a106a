#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vqclab/ensembles.hpp"
#include "vqclab/stats.hpp"

namespace vqclab {

/// One tensor-train matrix core, shape (r_left, in_dim, out_dim, r_right),
/// row-major over (l, i, j, r).
struct TTCore {
    int r_left = 1;
    int in_dim = 1;
    int out_dim = 1;
    int r_right = 1;
    std::vector<double> data;

    double& at(int l, int i, int j, int r) {
        return data[static_cast<std::size_t>(((l * in_dim + i) * out_dim + j) * r_right + r)];
    }
    double at(int l, int i, int j, int r) const {
        return data[static_cast<std::size_t>(((l * in_dim + i) * out_dim + j) * r_right + r)];
    }
};

/// Bounded-rank core chain; boundary ranks are 1 and adjacent ranks match.
struct TensorTrain {
    std::vector<TTCore> cores;

    int max_rank() const;
    std::size_t parameter_count() const;
};

void validate_train(const TensorTrain& train, int rank_cap);

/// Deterministic mode factorization: the smallest product of 2s and 3s that
/// covers each dimension (inputs are zero-padded, outputs truncated back),
/// with the shorter mode list padded by 1s so every core carries one
/// (input, output) mode pair.
struct ModePlan {
    int in_dim = 0;
    int out_dim = 0;
    int padded_in = 0;
    int padded_out = 0;
    std::vector<int> in_modes;
    std::vector<int> out_modes;
};

std::vector<int> factor_modes(int dim);
ModePlan plan_modes(int in_dim, int out_dim);

enum class Activation { ScaledTanh, Identity };

/// TT-matrix linear map followed by an elementwise odd bounded activation
/// (pi * tanh by default, so outputs land in (-pi, pi)).
struct TTMatrixMap {
    ModePlan plan;
    TensorTrain train;
    Activation activation = Activation::ScaledTanh;
    int rank_cap = 1;
};

/// Random map with cores i.i.d. gaussian(0, 1/sqrt(r * input-mode-dim)).
TTMatrixMap make_tt_map(int in_dim, int out_dim, int rank, Activation activation, Rng& rng);

/// Rank-1 cores realizing the identity on the padded dimensions; requires
/// in_dim == out_dim.
TTMatrixMap identity_tt_map(int dim, Activation activation = Activation::Identity);

/// Exact TT-matrix * vector product, then activation; cost polynomial in the
/// mode dimensions and r^2.
std::vector<double> tt_contract(const TTMatrixMap& map, std::span<const double> v);

/// Dense padded_out x padded_in matrix of the linear part; oracle companion
/// to tt_contract, only valid below the dense cap.
Eigen::MatrixXd tt_densify(const TTMatrixMap& map);

double apply_activation(Activation activation, double z);

/// TN-VQC: bounded-rank encoder T(x; phi) feeding the angle encoding of a
/// circuit W(theta) whose depth is fixed independent of n.
struct TnVqcModel {
    TTMatrixMap encoder;
    CircuitLayout circuit;
};

/// TensorHyper-VQC: bounded-rank hypernetwork T(sigma; phi) generating all
/// circuit parameters from a Gaussian seed vector; data encoding stays plain.
struct TensorHyperModel {
    TTMatrixMap generator;
    int sigma_dim = 0;
    CircuitLayout circuit;
};

using TensorStructuredModel = std::variant<TnVqcModel, TensorHyperModel>;

TnVqcModel make_tn_vqc(int n_qubits, int depth, int rank, int input_dim, Rng& rng);
TensorHyperModel make_tensor_hyper(int n_qubits, int depth, int rank, Rng& rng);

double tn_vqc_forward(const TnVqcModel& model, std::span<const double> x,
                      const ParameterVector& theta, const Observable& obs);
double tensor_hyper_forward(const TensorHyperModel& model, std::span<const double> x,
                            std::span<const double> sigma, const Observable& obs);

std::string model_to_json(const TensorStructuredModel& model);

enum class ModelFamily { TnVqc, TensorHyper, Hea };

struct ScanSettings {
    ModelFamily family = ModelFamily::TnVqc;
    int rank = 2;
    int depth = 2;              // fixed depth for tensor-structured families
    bool depth_scales_with_n = false; // depth = depth * n for the HEA contrast
    int input_factor = 4;       // TN-VQC input dim = input_factor * n
    int trials = 300;
};

struct VarianceScanRow {
    int n = 0;
    MomentSummary outputs;
};

/// Output variance per n over fresh (phi, theta) / (phi, sigma) / theta draws
/// at a fixed input, for the anti-concentration measurements.
std::vector<VarianceScanRow> anti_concentration_scan(const ScanSettings& settings, int n_min, int n_max,
                                                     std::uint64_t master_seed, const std::string& label);

struct CoreGradientRow {
    int n = 0;
    int core_index = 0;
    std::size_t entry_index = 0;
    double gradient_variance = 0.0;
};

/// Var over (phi, sigma) draws of d f / d phi_j by central differences, for a
/// deterministic probe set of hypernetwork core entries; one row per probe,
/// per n. The non-degeneracy checks take the max over probes.
std::vector<CoreGradientRow> hyper_core_gradient_scan(int n_qubits, int depth, int rank, int trials,
                                                      std::uint64_t master_seed, const std::string& label,
                                                      int max_probes = 12);

} // namespace vqclab
