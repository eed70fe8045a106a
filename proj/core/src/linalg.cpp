#include "vqclab/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>

namespace vqclab {

namespace {
std::atomic<std::size_t> g_dense_cap{std::size_t{1} << 14};
}

std::size_t dense_cap() { return g_dense_cap.load(); }
void set_dense_cap(std::size_t cap) { g_dense_cap.store(cap); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.allFinite() || !b.allFinite())
        throw numeric_error("kron: non-finite entries");
    const std::size_t rows = static_cast<std::size_t>(a.rows()) * b.rows();
    const std::size_t cols = static_cast<std::size_t>(a.cols()) * b.cols();
    if (rows > dense_cap() || cols > dense_cap())
        throw config_error("kron: result exceeds dense dimension cap");
    ComplexMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix swap_operator(Eigen::Index d) {
    if (d < 1)
        throw config_error("swap_operator: d must be >= 1");
    if (static_cast<std::size_t>(d) * d > dense_cap() * dense_cap())
        throw config_error("swap_operator: result exceeds dense dimension cap");
    ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            f(j * d + i, i * d + j) = 1.0;
    return f;
}

RealVector svd_values(const ComplexMatrix& m) {
    if (!m.allFinite())
        throw numeric_error("svd_values: non-finite entries");
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    if (svd.info() != Eigen::Success)
        throw numeric_error("svd_values: SVD did not converge");
    return svd.singularValues();
}

ComplexMatrix qr_unitary(const ComplexMatrix& g) {
    if (g.rows() != g.cols())
        throw config_error("qr_unitary: matrix must be square");
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix& r = qr.matrixQR();
    for (Eigen::Index i = 0; i < g.cols(); ++i) {
        const double mag = std::abs(r(i, i));
        if (mag < 1e-300)
            throw numeric_error("qr_unitary: rank-deficient input");
        q.col(i) *= r(i, i) / mag;
    }
    return q;
}

ComplexMatrix identity_matrix(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

double spectral_norm(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    ComplexMatrix delta = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
    return delta.cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix embed_operator(const ComplexMatrix& op, const std::vector<int>& targets, int n_qubits) {
    const int k = static_cast<int>(targets.size());
    const Eigen::Index small_d = Eigen::Index{1} << k;
    if (op.rows() != small_d || op.cols() != small_d)
        throw config_error("embed_operator: matrix dimension does not match target count");
    const std::size_t d = std::size_t{1} << n_qubits;
    if (d > dense_cap())
        throw config_error("embed_operator: full dimension exceeds dense cap");
    for (int t : targets)
        if (t < 0 || t >= n_qubits)
            throw config_error("embed_operator: target out of range");

    // Row/column index bit for qubit q is (idx >> (n-1-q)) & 1.
    ComplexMatrix full = ComplexMatrix::Zero(d, d);
    std::vector<std::size_t> target_bit(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        target_bit[i] = std::size_t{1} << (n_qubits - 1 - targets[i]);

    std::size_t target_mask = 0;
    for (std::size_t b : target_bit) target_mask |= b;

    for (std::size_t base = 0; base < d; ++base) {
        if (base & target_mask) continue;
        for (Eigen::Index rs = 0; rs < small_d; ++rs) {
            std::size_t row = base;
            for (int i = 0; i < k; ++i)
                if ((rs >> (k - 1 - i)) & 1) row |= target_bit[i];
            for (Eigen::Index cs = 0; cs < small_d; ++cs) {
                if (op(rs, cs) == Complex(0, 0)) continue;
                std::size_t col = base;
                for (int i = 0; i < k; ++i)
                    if ((cs >> (k - 1 - i)) & 1) col |= target_bit[i];
                full(row, col) = op(rs, cs);
            }
        }
    }
    return full;
}

} // namespace vqclab
