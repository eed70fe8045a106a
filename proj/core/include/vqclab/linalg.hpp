#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

#include "vqclab/errors.hpp"

// Dense complex linear algebra substrate. Bit convention used everywhere in
// this project: qubit 0 is the MOST significant bit of an amplitude or matrix
// index, so kron(A, B) puts A on the lower-numbered qubits.

namespace vqclab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerance hierarchy: construction checks 1e-10, equality-style assertions
// 1e-9, statistical assertions are stated per test.
inline constexpr double kConstructTol = 1e-10;
inline constexpr double kEqualityTol = 1e-9;

/// Per-axis cap on dense matrix dimensions. Operations that would materialize
/// anything larger throw config_error (the signal that n is too large for
/// dense mode).
std::size_t dense_cap();
void set_dense_cap(std::size_t cap);

/// Kronecker product with qubit-0-most-significant ordering.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Swap operator F on C^d (x) C^d: F(u (x) v) = v (x) u. F^2 = I, Tr F = d.
ComplexMatrix swap_operator(Eigen::Index d);

/// Singular values in descending order.
RealVector svd_values(const ComplexMatrix& m);

/// Unitary Q from the QR decomposition of a full-rank square matrix, with the
/// R-diagonal phases normalized to positive reals (Mezzadri correction) so
/// that Ginibre input yields Haar-distributed Q.
ComplexMatrix qr_unitary(const ComplexMatrix& g);

ComplexMatrix identity_matrix(Eigen::Index d);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

bool is_unitary(const ComplexMatrix& m, double tol = kConstructTol);
bool is_hermitian(const ComplexMatrix& m, double tol = kConstructTol);

/// Embed a k-qubit operator acting on the given qubits (targets[0] most
/// significant for the small matrix) into the full 2^n-dimensional space.
ComplexMatrix embed_operator(const ComplexMatrix& op, const std::vector<int>& targets, int n_qubits);

} // namespace vqclab
