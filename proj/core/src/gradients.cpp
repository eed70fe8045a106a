#include "vqclab/gradients.hpp"

#include <cmath>

namespace vqclab {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

std::size_t find_unique_rotation(const CircuitLayout& layout, int slot) {
    std::size_t found = layout.gates.size();
    for (std::size_t g = 0; g < layout.gates.size(); ++g) {
        const auto* rot = std::get_if<RotationGate>(&layout.gates[g]);
        if (!rot || rot->slot != slot) continue;
        if (found != layout.gates.size())
            throw config_error("gradient: slot drives more than one gate");
        found = g;
    }
    if (found == layout.gates.size())
        throw config_error("gradient: slot drives no rotation gate");
    return found;
}

ComplexMatrix pauli_for(RotationAxis axis) {
    switch (axis) {
        case RotationAxis::X: return pauli_x();
        case RotationAxis::Y: return pauli_y();
        case RotationAxis::Z: return pauli_z();
    }
    throw config_error("gradient: unknown axis");
}

} // namespace

double parameter_shift_gradient(const CircuitLayout& layout, const ParameterVector& params,
                                const EncodingSpec& encoding, const std::vector<double>& x,
                                const Observable& obs, int slot) {
    find_unique_rotation(layout, slot);
    ParameterVector shifted = params;
    shifted[static_cast<std::size_t>(slot)] = params[static_cast<std::size_t>(slot)] + kHalfPi;
    const double plus = expectation(layout, shifted, encoding, x, obs);
    shifted[static_cast<std::size_t>(slot)] = params[static_cast<std::size_t>(slot)] - kHalfPi;
    const double minus = expectation(layout, shifted, encoding, x, obs);
    return (plus - minus) / 2.0;
}

double finite_difference_gradient(const CircuitLayout& layout, const ParameterVector& params,
                                  const EncodingSpec& encoding, const std::vector<double>& x,
                                  const Observable& obs, int slot, double h) {
    if (h < 1e-6 || h > 1e-2)
        throw config_error("finite_difference_gradient: h outside [1e-6, 1e-2]");
    ParameterVector shifted = params;
    shifted[static_cast<std::size_t>(slot)] = params[static_cast<std::size_t>(slot)] + h;
    const double plus = expectation(layout, shifted, encoding, x, obs);
    shifted[static_cast<std::size_t>(slot)] = params[static_cast<std::size_t>(slot)] - h;
    const double minus = expectation(layout, shifted, encoding, x, obs);
    return (plus - minus) / (2.0 * h);
}

GeneratorFrame generator_observable(const CircuitLayout& layout, const ParameterVector& params,
                                    const EncodingSpec& encoding, const std::vector<double>& x,
                                    const Observable& obs, int slot) {
    const std::size_t gate_index = find_unique_rotation(layout, slot);
    const std::size_t d = std::size_t{1} << layout.n_qubits;
    if (d > dense_cap())
        throw config_error("generator_observable: dimension exceeds dense cap");

    CircuitLayout prefix{layout.n_qubits, {}, layout.param_count};
    CircuitLayout suffix{layout.n_qubits, {}, layout.param_count};
    for (std::size_t g = 0; g < layout.gates.size(); ++g)
        (g <= gate_index ? prefix : suffix).gates.push_back(layout.gates[g]);
    // Slot-usage validation does not apply to these fragments; parameters are
    // addressed by the original slots.

    StateVector chi = StateVector::zero_state(layout.n_qubits);
    chi = apply_encoding(encoding, x, std::move(chi));
    chi = apply_circuit(prefix, params, std::move(chi));

    const ComplexMatrix b = circuit_unitary(suffix, params);
    const ComplexMatrix conjugated = b.adjoint() * obs.full_matrix() * b;
    const auto& rot = std::get<RotationGate>(layout.gates[gate_index]);
    const ComplexMatrix p = embed_operator(pauli_for(rot.axis), {rot.target}, layout.n_qubits);
    const ComplexMatrix generator = Complex(0, 0.5) * (p * conjugated - conjugated * p);
    return GeneratorFrame{generator, std::move(chi)};
}

MomentSummary gradient_statistics(const CircuitLayout& layout, const EncodingSpec& encoding,
                                  const std::vector<double>& x, const Observable& obs, int slot,
                                  const ParamDist& dist, int trials, const SeedSpec& seed) {
    if (trials < 30)
        throw config_error("gradient_statistics: need at least 30 trials");
    std::vector<double> grads(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        Rng rng(SeedSpec{seed.master_seed, seed.stream_id + static_cast<std::uint64_t>(t)});
        const ParameterVector params = sample_params(dist, layout.param_count, rng);
        grads[static_cast<std::size_t>(t)] = parameter_shift_gradient(layout, params, encoding, x, obs, slot);
    }
    return summarize(grads, SeedSpec{seed.master_seed, seed.stream_id ^ 0x626f6f74ULL});
}

} // namespace vqclab
