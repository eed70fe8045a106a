#pragma once

#include "vqclab/ensembles.hpp"
#include "vqclab/state.hpp"

namespace vqclab {

/// Choi-Jamiolkowski state |U> = (U (x) I)|Phi> on 2n qubits: qubits 0..n-1
/// carry the row index of U, qubits n..2n-1 the column index, so
/// amplitude[(i << n) | z] = U(i, z) / 2^{n/2}.
struct ChoiState {
    int n_qubits; // of U; the state lives on 2n qubits
    StateVector state;
};

ChoiState choi_state(const ComplexMatrix& u);

/// Doubled-cut qubit set AA' = A union (A + n) in the 2n-qubit Choi register.
std::vector<int> doubled_cut(const Bipartition& cut, int n_qubits);

/// Tr(rho_AA'^2) from the squared Schmidt coefficients of |U> across AA'|BB'.
double choi_purity(const ComplexMatrix& u, const Bipartition& cut);

/// Exact Haar average of choi_purity for |A| = block_size out of n qubits:
/// (d_A^2 + d_B^2 - 2) / (d^2 - 1); equals 2/(2^n + 1) at a balanced cut.
double haar_choi_purity_mean(int n_qubits, int block_size);

/// Operator Schmidt coefficients: singular values of U reshaped across the
/// cut (descending; squares sum to 2^n for a unitary).
RealVector operator_schmidt_values(const ComplexMatrix& u, const Bipartition& cut);

/// Number of operator Schmidt coefficients above rel_tol times the largest.
int operator_schmidt_rank(const ComplexMatrix& u, const Bipartition& cut, double rel_tol = 1e-10);

struct FramePotentialEstimate {
    double value = 0.0;
    double stderr_value = 0.0;
    double haar_value = 0.0; // t!
    int pairs = 0;
};

/// Mean of |Tr(U^ V)|^{2t} over independent ensemble pairs; Haar minimizes
/// this at t!.
FramePotentialEstimate frame_potential(const UnitaryEnsemble& ensemble, int t, int pairs,
                                       const SeedSpec& seed);

struct SecondMomentReport {
    double distance = 0.0;   // max-entry |MC estimate - (I+F)/(d(d+1))|
    double max_stderr = 0.0; // max per-entry standard error of the estimate
    int samples = 0;
};

SecondMomentReport second_moment_distance(const StateEnsemble& ensemble, int samples,
                                          const SeedSpec& seed);

/// Bounded-cut-width brickwork: Haar two-qubit gates confined to the blocks
/// of the balanced cut, plus `crossings` gates across the boundary, so the
/// operator Schmidt rank across the cut is at most 4^crossings regardless of
/// depth or n.
CircuitLayout bounded_cut_layout(int n_qubits, int inner_layers, int crossings, Rng& rng);

UnitaryEnsemble bounded_cut_unitary_ensemble(int n_qubits, int inner_layers, int crossings);

/// Summary diagnostics for one ensemble at one size, with Haar references.
struct DesignReport {
    std::string ensemble;
    int n_qubits = 0;
    double frame_potential_2 = 0.0;
    double frame_potential_stderr = 0.0;
    double frame_potential_haar = 2.0;
    double second_moment_dist = 0.0;
    double second_moment_max_stderr = 0.0;
    double avg_choi_purity = 0.0;
    double choi_purity_stderr = 0.0;
    double choi_purity_haar = 0.0;
    int max_osr = 0;
};

} // namespace vqclab
