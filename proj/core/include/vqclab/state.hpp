#pragma once

#include <vector>

#include "vqclab/linalg.hpp"

namespace vqclab {

/// Normalized pure state on n qubits, 2^n amplitudes, qubit 0 = MSB.
class StateVector {
  public:
    StateVector(int n_qubits, ComplexVector amplitudes);

    static StateVector zero_state(int n_qubits);
    static StateVector basis_state(int n_qubits, std::size_t index);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    const ComplexVector& amplitudes() const { return amplitudes_; }
    ComplexVector& mutable_amplitudes() { return amplitudes_; }

    double norm() const { return amplitudes_.norm(); }

  private:
    int n_qubits_;
    ComplexVector amplitudes_;
};

/// Bipartition A|B of {0..n-1}; both blocks nonempty, disjoint, covering.
struct Bipartition {
    std::vector<int> block_a;
    std::vector<int> block_b;

    Bipartition(std::vector<int> a, int n_qubits);

    /// Contiguous balanced cut {0..floor(n/2)-1} | rest.
    static Bipartition balanced(int n_qubits);
};

/// Hermitian observable with spectral norm <= 1, stored as its action on the
/// support qubits (dim 2^k); the full operator is I on the rest. The dense
/// full matrix is materialized on demand and only below the dense cap.
class Observable {
  public:
    Observable(ComplexMatrix support_matrix, std::vector<int> support, int n_qubits);

    /// Pauli-Z on one qubit; the default observable in every experiment.
    static Observable pauli_z_on(int qubit, int n_qubits);
    static Observable identity(int n_qubits);

    const ComplexMatrix& support_matrix() const { return matrix_; }
    const std::vector<int>& support() const { return support_; }
    int n_qubits() const { return n_qubits_; }

    ComplexMatrix full_matrix() const;

  private:
    ComplexMatrix matrix_;
    std::vector<int> support_;
    int n_qubits_;
};

/// <psi|O|psi>, computed on the support without materializing the full
/// operator. Always real for Hermitian O; checked to 1e-9.
double expectation_value(const Observable& obs, const StateVector& state);

/// Reduced density matrix over `keep` (sorted qubit indices, MSB first in the
/// output indexing). Hermitian, PSD, unit trace.
ComplexMatrix partial_trace(const StateVector& state, const std::vector<int>& keep);

/// Schmidt coefficients (descending singular values) of the state reshaped
/// across block | complement. Squares sum to 1 for a normalized state.
RealVector schmidt_values(const StateVector& state, const std::vector<int>& block);

} // namespace vqclab
