#include "vqclab/circuits.hpp"

#include <json.hpp>

#include <cmath>

namespace vqclab {

namespace {

using json = nlohmann::json;

void apply_single_qubit(ComplexVector& amps, int n, int target, const Eigen::Matrix2cd& u) {
    const std::size_t d = amps.size();
    const std::size_t bit = std::size_t{1} << (n - 1 - target);
    for (std::size_t i = 0; i < d; ++i) {
        if (i & bit) continue;
        const Complex a0 = amps(static_cast<Eigen::Index>(i));
        const Complex a1 = amps(static_cast<Eigen::Index>(i | bit));
        amps(static_cast<Eigen::Index>(i)) = u(0, 0) * a0 + u(0, 1) * a1;
        amps(static_cast<Eigen::Index>(i | bit)) = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

Eigen::Matrix2cd rotation_matrix(RotationAxis axis, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Eigen::Matrix2cd u;
    switch (axis) {
        case RotationAxis::X:
            u << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
            break;
        case RotationAxis::Y:
            u << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
            break;
        case RotationAxis::Z:
            u << Complex(c, -s), Complex(0, 0), Complex(0, 0), Complex(c, s);
            break;
    }
    return u;
}

void apply_cz(ComplexVector& amps, int n, int control, int target) {
    const std::size_t cbit = std::size_t{1} << (n - 1 - control);
    const std::size_t tbit = std::size_t{1} << (n - 1 - target);
    const std::size_t both = cbit | tbit;
    const std::size_t d = amps.size();
    for (std::size_t i = 0; i < d; ++i)
        if ((i & both) == both) amps(static_cast<Eigen::Index>(i)) = -amps(static_cast<Eigen::Index>(i));
}

void apply_fixed(ComplexVector& amps, int n, const FixedUnitaryGate& gate) {
    const int k = static_cast<int>(gate.targets.size());
    const Eigen::Index sub_d = Eigen::Index{1} << k;
    std::vector<std::size_t> bit(gate.targets.size());
    std::size_t mask = 0;
    for (std::size_t i = 0; i < gate.targets.size(); ++i) {
        bit[i] = std::size_t{1} << (n - 1 - gate.targets[i]);
        mask |= bit[i];
    }
    const std::size_t d = amps.size();
    ComplexVector sub(sub_d);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(sub_d));
    for (std::size_t base = 0; base < d; ++base) {
        if (base & mask) continue;
        for (Eigen::Index s = 0; s < sub_d; ++s) {
            std::size_t full = base;
            for (int i = 0; i < k; ++i)
                if ((s >> (k - 1 - i)) & 1) full |= bit[static_cast<std::size_t>(i)];
            idx[static_cast<std::size_t>(s)] = static_cast<Eigen::Index>(full);
            sub(s) = amps(idx[static_cast<std::size_t>(s)]);
        }
        sub = gate.matrix * sub;
        for (Eigen::Index s = 0; s < sub_d; ++s)
            amps(idx[static_cast<std::size_t>(s)]) = sub(s);
    }
}

double slot_angle(const ParameterVector& params, int slot) {
    if (slot < 0 || static_cast<std::size_t>(slot) >= params.size())
        throw config_error("apply_circuit: parameter slot out of range");
    return params[static_cast<std::size_t>(slot)];
}

std::string axis_name(RotationAxis axis) {
    switch (axis) {
        case RotationAxis::X: return "X";
        case RotationAxis::Y: return "Y";
        case RotationAxis::Z: return "Z";
    }
    return "?";
}

RotationAxis axis_from_name(const std::string& name) {
    if (name == "X") return RotationAxis::X;
    if (name == "Y") return RotationAxis::Y;
    if (name == "Z") return RotationAxis::Z;
    throw config_error("layout_from_json: unknown rotation axis " + name);
}

} // namespace

void validate_layout(const CircuitLayout& layout) {
    if (layout.n_qubits < 1)
        throw config_error("layout: need at least one qubit");
    std::vector<bool> used(static_cast<std::size_t>(layout.param_count), false);
    auto check_qubit = [&](int q) {
        if (q < 0 || q >= layout.n_qubits)
            throw config_error("layout: qubit index out of range");
    };
    for (const Gate& gate : layout.gates) {
        if (const auto* rot = std::get_if<RotationGate>(&gate)) {
            check_qubit(rot->target);
            if (rot->slot < 0 || rot->slot >= layout.param_count)
                throw config_error("layout: rotation slot out of range");
            used[static_cast<std::size_t>(rot->slot)] = true;
        } else if (const auto* cz = std::get_if<ControlledZGate>(&gate)) {
            check_qubit(cz->control);
            check_qubit(cz->target);
            if (cz->control == cz->target)
                throw config_error("layout: CZ control equals target");
        } else {
            const auto& fixed = std::get<FixedUnitaryGate>(gate);
            for (int q : fixed.targets) check_qubit(q);
            if (fixed.matrix.rows() != (Eigen::Index{1} << fixed.targets.size()))
                throw config_error("layout: fixed-unitary dimension mismatch");
            if (!is_unitary(fixed.matrix, kConstructTol))
                throw numeric_error("layout: fixed-unitary matrix not unitary within 1e-10");
        }
    }
    for (int s = 0; s < layout.param_count; ++s)
        if (!used[static_cast<std::size_t>(s)])
            throw config_error("layout: parameter slot never used");
}

CircuitLayout build_hea(int n_qubits, int depth, Entangler entangler) {
    if (n_qubits < 2)
        throw config_error("build_hea: need n >= 2");
    if (depth < 1)
        throw config_error("build_hea: need depth >= 1");
    CircuitLayout layout;
    layout.n_qubits = n_qubits;
    layout.param_count = 2 * n_qubits * depth;
    for (int layer = 0; layer < depth; ++layer) {
        const int base = 2 * n_qubits * layer;
        for (int q = 0; q < n_qubits; ++q) {
            layout.gates.push_back(RotationGate{RotationAxis::Y, q, base + 2 * q});
            layout.gates.push_back(RotationGate{RotationAxis::Z, q, base + 2 * q + 1});
        }
        if (entangler == Entangler::Ring) {
            for (int q = 0; q < n_qubits; ++q)
                layout.gates.push_back(ControlledZGate{q, (q + 1) % n_qubits});
        } else {
            for (int a = 0; a < n_qubits; ++a)
                for (int b = a + 1; b < n_qubits; ++b)
                    layout.gates.push_back(ControlledZGate{a, b});
        }
    }
    return layout;
}

CircuitLayout concat(const CircuitLayout& first, const CircuitLayout& second) {
    if (first.n_qubits != second.n_qubits)
        throw config_error("concat: qubit count mismatch");
    CircuitLayout out = first;
    out.param_count = first.param_count + second.param_count;
    for (Gate gate : second.gates) {
        if (auto* rot = std::get_if<RotationGate>(&gate)) rot->slot += first.param_count;
        out.gates.push_back(std::move(gate));
    }
    return out;
}

StateVector apply_circuit(const CircuitLayout& layout, const ParameterVector& params, StateVector state) {
    if (state.n_qubits() != layout.n_qubits)
        throw config_error("apply_circuit: state/layout qubit mismatch");
    if (static_cast<int>(params.size()) != layout.param_count)
        throw config_error("apply_circuit: parameter count mismatch");
    ComplexVector& amps = state.mutable_amplitudes();
    const int n = layout.n_qubits;
    for (const Gate& gate : layout.gates) {
        if (const auto* rot = std::get_if<RotationGate>(&gate)) {
            apply_single_qubit(amps, n, rot->target, rotation_matrix(rot->axis, slot_angle(params, rot->slot)));
        } else if (const auto* cz = std::get_if<ControlledZGate>(&gate)) {
            apply_cz(amps, n, cz->control, cz->target);
        } else {
            apply_fixed(amps, n, std::get<FixedUnitaryGate>(gate));
        }
    }
    return StateVector(n, std::move(state.mutable_amplitudes()));
}

StateVector apply_encoding(const EncodingSpec& spec, const std::vector<double>& x, StateVector state) {
    if (spec.kind != EncodingKind::Angle)
        throw config_error("apply_encoding: composed encodings are applied through their model");
    if (static_cast<int>(x.size()) != spec.input_dim)
        throw config_error("apply_encoding: input dimension mismatch");
    if (spec.input_dim != state.n_qubits())
        throw config_error("apply_encoding: angle encoding requires input_dim = n_qubits");
    ComplexVector& amps = state.mutable_amplitudes();
    const int n = state.n_qubits();
    for (int q = 0; q < n; ++q)
        apply_single_qubit(amps, n, q, rotation_matrix(RotationAxis::Y, x[static_cast<std::size_t>(q)]));
    return StateVector(n, std::move(state.mutable_amplitudes()));
}

ComplexMatrix circuit_unitary(const CircuitLayout& layout, const ParameterVector& params) {
    const std::size_t d = std::size_t{1} << layout.n_qubits;
    if (d > dense_cap())
        throw config_error("circuit_unitary: dimension exceeds dense cap");
    if (static_cast<int>(params.size()) != layout.param_count)
        throw config_error("circuit_unitary: parameter count mismatch");
    const int n = layout.n_qubits;
    // Column j is the circuit applied to basis state |j>, via the gate-by-gate
    // path (much cheaper than chained dense products).
    ComplexMatrix u(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    ComplexVector column(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
        column.setZero();
        column(static_cast<Eigen::Index>(j)) = 1.0;
        for (const Gate& gate : layout.gates) {
            if (const auto* rot = std::get_if<RotationGate>(&gate)) {
                apply_single_qubit(column, n, rot->target,
                                   rotation_matrix(rot->axis, slot_angle(params, rot->slot)));
            } else if (const auto* cz = std::get_if<ControlledZGate>(&gate)) {
                apply_cz(column, n, cz->control, cz->target);
            } else {
                apply_fixed(column, n, std::get<FixedUnitaryGate>(gate));
            }
        }
        u.col(static_cast<Eigen::Index>(j)) = column;
    }
    return u;
}

ComplexMatrix encoding_unitary(const EncodingSpec& spec, const std::vector<double>& x, int n_qubits) {
    if (spec.kind != EncodingKind::Angle)
        throw config_error("encoding_unitary: composed encodings are applied through their model");
    CircuitLayout enc;
    enc.n_qubits = n_qubits;
    enc.param_count = n_qubits;
    for (int q = 0; q < n_qubits; ++q)
        enc.gates.push_back(RotationGate{RotationAxis::Y, q, q});
    return circuit_unitary(enc, x);
}

double expectation(const CircuitLayout& layout, const ParameterVector& params,
                   const EncodingSpec& encoding, const std::vector<double>& x,
                   const Observable& obs) {
    if (obs.n_qubits() != layout.n_qubits)
        throw config_error("expectation: observable qubit mismatch");
    StateVector state = StateVector::zero_state(layout.n_qubits);
    state = apply_encoding(encoding, x, std::move(state));
    state = apply_circuit(layout, params, std::move(state));
    return expectation_value(obs, state);
}

std::string layout_to_json(const CircuitLayout& layout) {
    json gates = json::array();
    for (const Gate& gate : layout.gates) {
        if (const auto* rot = std::get_if<RotationGate>(&gate)) {
            gates.push_back({{"kind", "rotation"},
                             {"axis", axis_name(rot->axis)},
                             {"target", rot->target},
                             {"slot", rot->slot}});
        } else if (const auto* cz = std::get_if<ControlledZGate>(&gate)) {
            gates.push_back({{"kind", "cz"}, {"control", cz->control}, {"target", cz->target}});
        } else {
            const auto& fixed = std::get<FixedUnitaryGate>(gate);
            json entries = json::array();
            for (Eigen::Index r = 0; r < fixed.matrix.rows(); ++r)
                for (Eigen::Index c = 0; c < fixed.matrix.cols(); ++c)
                    entries.push_back({fixed.matrix(r, c).real(), fixed.matrix(r, c).imag()});
            gates.push_back({{"kind", "fixed_unitary"}, {"targets", fixed.targets}, {"entries", entries}});
        }
    }
    json doc = {{"n_qubits", layout.n_qubits}, {"param_count", layout.param_count}, {"gates", gates}};
    return doc.dump(2);
}

CircuitLayout layout_from_json(const std::string& text) {
    json doc = json::parse(text);
    CircuitLayout layout;
    layout.n_qubits = doc.at("n_qubits").get<int>();
    layout.param_count = doc.at("param_count").get<int>();
    for (const json& g : doc.at("gates")) {
        const std::string kind = g.at("kind").get<std::string>();
        if (kind == "rotation") {
            layout.gates.push_back(RotationGate{axis_from_name(g.at("axis").get<std::string>()),
                                                g.at("target").get<int>(), g.at("slot").get<int>()});
        } else if (kind == "cz") {
            layout.gates.push_back(ControlledZGate{g.at("control").get<int>(), g.at("target").get<int>()});
        } else if (kind == "fixed_unitary") {
            FixedUnitaryGate fixed;
            fixed.targets = g.at("targets").get<std::vector<int>>();
            const Eigen::Index d = Eigen::Index{1} << fixed.targets.size();
            fixed.matrix.resize(d, d);
            const json& entries = g.at("entries");
            for (Eigen::Index r = 0; r < d; ++r)
                for (Eigen::Index c = 0; c < d; ++c) {
                    const json& e = entries.at(static_cast<std::size_t>(r * d + c));
                    fixed.matrix(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
                }
            layout.gates.push_back(std::move(fixed));
        } else {
            throw config_error("layout_from_json: unknown gate kind " + kind);
        }
    }
    validate_layout(layout);
    return layout;
}

} // namespace vqclab
