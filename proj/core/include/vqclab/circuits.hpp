#pragma once

#include <string>
#include <variant>
#include <vector>

#include "vqclab/state.hpp"

namespace vqclab {

enum class RotationAxis { X, Y, Z };

/// Parameterized rotation exp(-i theta P / 2); the angle lives in a
/// ParameterVector slot.
struct RotationGate {
    RotationAxis axis;
    int target;
    int slot;
};

struct ControlledZGate {
    int control;
    int target;
};

/// Fixed k-qubit unitary on the given targets (targets[0] most significant).
struct FixedUnitaryGate {
    ComplexMatrix matrix;
    std::vector<int> targets;
};

using Gate = std::variant<RotationGate, ControlledZGate, FixedUnitaryGate>;

using ParameterVector = std::vector<double>;

struct CircuitLayout {
    int n_qubits = 0;
    std::vector<Gate> gates;
    int param_count = 0;
};

/// Throws unless qubit indices are valid, every slot index is in range and
/// every slot in [0, param_count) is used at least once, and fixed-unitary
/// matrices are unitary within 1e-10.
void validate_layout(const CircuitLayout& layout);

enum class EncodingKind { Angle, ComposedFeatureMap };

/// Angle encoding applies R_Y(x_i) on qubit i; the composed variant is owned
/// by the tensor-structured models, which feed their transformed features
/// into the angle path.
struct EncodingSpec {
    EncodingKind kind = EncodingKind::Angle;
    int input_dim = 0;
};

enum class Entangler { Ring, AllToAll };

/// Hardware-efficient ansatz: `depth` layers of per-qubit R_Y then R_Z (two
/// fresh slots per qubit per layer) followed by a CZ entangling block, the
/// ring (i, i+1 mod n) by default. param_count = 2 * n * depth either way.
/// The all-to-all variant scrambles at much lower depth; the ring at fixed
/// depth keeps a bounded cut width.
CircuitLayout build_hea(int n_qubits, int depth, Entangler entangler = Entangler::Ring);

CircuitLayout concat(const CircuitLayout& first, const CircuitLayout& second);

StateVector apply_circuit(const CircuitLayout& layout, const ParameterVector& params, StateVector state);

StateVector apply_encoding(const EncodingSpec& spec, const std::vector<double>& x, StateVector state);

/// Dense circuit unitary (n small enough for the dense cap); oracle path for
/// the gate-by-gate simulator.
ComplexMatrix circuit_unitary(const CircuitLayout& layout, const ParameterVector& params);

ComplexMatrix encoding_unitary(const EncodingSpec& spec, const std::vector<double>& x, int n_qubits);

/// Eq-style end-to-end expectation: <0| U(x)^ W(theta)^ O W(theta) U(x) |0>.
double expectation(const CircuitLayout& layout, const ParameterVector& params,
                   const EncodingSpec& encoding, const std::vector<double>& x,
                   const Observable& obs);

/// JSON manifest form (schema: n_qubits, param_count, gate list with
/// kind/targets/slot). Round-trips exactly.
std::string layout_to_json(const CircuitLayout& layout);
CircuitLayout layout_from_json(const std::string& text);

} // namespace vqclab
