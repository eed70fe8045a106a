#include "vqclab/state.hpp"

#include <algorithm>
#include <cmath>

namespace vqclab {

StateVector::StateVector(int n_qubits, ComplexVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits < 1)
        throw config_error("StateVector: need at least one qubit");
    if (amplitudes_.size() != (Eigen::Index{1} << n_qubits))
        throw config_error("StateVector: amplitude count != 2^n");
    if (!amplitudes_.allFinite())
        throw numeric_error("StateVector: non-finite amplitude");
    if (std::abs(amplitudes_.norm() - 1.0) > kConstructTol)
        throw numeric_error("StateVector: norm deviates from 1 beyond 1e-10");
}

StateVector StateVector::zero_state(int n_qubits) { return basis_state(n_qubits, 0); }

StateVector StateVector::basis_state(int n_qubits, std::size_t index) {
    if (n_qubits < 1 || index >= (std::size_t{1} << n_qubits))
        throw config_error("basis_state: index out of range");
    ComplexVector amps = ComplexVector::Zero(Eigen::Index{1} << n_qubits);
    amps(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(n_qubits, std::move(amps));
}

Bipartition::Bipartition(std::vector<int> a, int n_qubits) : block_a(std::move(a)) {
    std::sort(block_a.begin(), block_a.end());
    if (block_a.empty() || static_cast<int>(block_a.size()) >= n_qubits)
        throw config_error("Bipartition: both blocks must be nonempty");
    if (std::adjacent_find(block_a.begin(), block_a.end()) != block_a.end())
        throw config_error("Bipartition: duplicate qubit index");
    if (block_a.front() < 0 || block_a.back() >= n_qubits)
        throw config_error("Bipartition: qubit index out of range");
    for (int q = 0; q < n_qubits; ++q)
        if (!std::binary_search(block_a.begin(), block_a.end(), q))
            block_b.push_back(q);
}

Bipartition Bipartition::balanced(int n_qubits) {
    std::vector<int> a(static_cast<std::size_t>(n_qubits / 2));
    for (int q = 0; q < n_qubits / 2; ++q) a[static_cast<std::size_t>(q)] = q;
    return Bipartition(std::move(a), n_qubits);
}

Observable::Observable(ComplexMatrix support_matrix, std::vector<int> support, int n_qubits)
    : matrix_(std::move(support_matrix)), support_(std::move(support)), n_qubits_(n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << support_.size();
    if (matrix_.rows() != d || matrix_.cols() != d)
        throw config_error("Observable: matrix dimension != 2^|support|");
    for (int q : support_)
        if (q < 0 || q >= n_qubits_)
            throw config_error("Observable: support qubit out of range");
    if (!is_hermitian(matrix_, kConstructTol))
        throw numeric_error("Observable: matrix not Hermitian within 1e-10");
    if (spectral_norm(matrix_) > 1.0 + 1e-9)
        throw numeric_error("Observable: spectral norm exceeds 1");
}

Observable Observable::pauli_z_on(int qubit, int n_qubits) {
    return Observable(pauli_z(), {qubit}, n_qubits);
}

Observable Observable::identity(int n_qubits) {
    return Observable(ComplexMatrix::Identity(2, 2), {0}, n_qubits);
}

ComplexMatrix Observable::full_matrix() const {
    return embed_operator(matrix_, support_, n_qubits_);
}

double expectation_value(const Observable& obs, const StateVector& state) {
    if (obs.n_qubits() != state.n_qubits())
        throw config_error("expectation_value: qubit count mismatch");
    const int n = state.n_qubits();
    const auto& support = obs.support();
    const int k = static_cast<int>(support.size());
    const Eigen::Index sub_d = Eigen::Index{1} << k;
    const std::size_t d = std::size_t{1} << n;

    std::vector<std::size_t> bit(support.size());
    std::size_t mask = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        bit[i] = std::size_t{1} << (n - 1 - support[i]);
        mask |= bit[i];
    }

    const auto& amps = state.amplitudes();
    const auto& m = obs.support_matrix();
    Complex acc(0, 0);
    ComplexVector sub(sub_d);
    for (std::size_t base = 0; base < d; ++base) {
        if (base & mask) continue;
        for (Eigen::Index s = 0; s < sub_d; ++s) {
            std::size_t idx = base;
            for (int i = 0; i < k; ++i)
                if ((s >> (k - 1 - i)) & 1) idx |= bit[i];
            sub(s) = amps(static_cast<Eigen::Index>(idx));
        }
        acc += sub.dot(m * sub); // Eigen dot conjugates the left argument
    }
    if (std::abs(acc.imag()) > kEqualityTol)
        throw numeric_error("expectation_value: nonreal expectation for Hermitian observable");
    return acc.real();
}

ComplexMatrix partial_trace(const StateVector& state, const std::vector<int>& keep_in) {
    if (keep_in.empty())
        throw config_error("partial_trace: empty keep set");
    std::vector<int> keep = keep_in;
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw config_error("partial_trace: duplicate qubit index");
    const int n = state.n_qubits();
    if (keep.front() < 0 || keep.back() >= n)
        throw config_error("partial_trace: qubit index out of range");

    const int nk = static_cast<int>(keep.size());
    const int nt = n - nk;
    std::vector<std::size_t> keep_bit(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        keep_bit[i] = std::size_t{1} << (n - 1 - keep[i]);
    std::vector<std::size_t> traced_bit;
    traced_bit.reserve(static_cast<std::size_t>(nt));
    std::size_t keep_mask = 0;
    for (std::size_t b : keep_bit) keep_mask |= b;
    for (int q = 0; q < n; ++q) {
        std::size_t b = std::size_t{1} << (n - 1 - q);
        if (!(b & keep_mask)) traced_bit.push_back(b);
    }

    const Eigen::Index dk = Eigen::Index{1} << nk;
    const std::size_t dt = std::size_t{1} << nt;
    const auto& amps = state.amplitudes();

    auto compose = [&](std::size_t kept, std::size_t traced) {
        std::size_t idx = 0;
        for (int i = 0; i < nk; ++i)
            if ((kept >> (nk - 1 - i)) & 1) idx |= keep_bit[static_cast<std::size_t>(i)];
        for (int i = 0; i < nt; ++i)
            if ((traced >> (nt - 1 - i)) & 1) idx |= traced_bit[static_cast<std::size_t>(i)];
        return static_cast<Eigen::Index>(idx);
    };

    ComplexMatrix rho = ComplexMatrix::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) {
            Complex acc(0, 0);
            for (std::size_t e = 0; e < dt; ++e)
                acc += amps(compose(static_cast<std::size_t>(a), e)) *
                       std::conj(amps(compose(static_cast<std::size_t>(b), e)));
            rho(a, b) = acc;
            rho(b, a) = std::conj(acc);
        }
    return rho;
}

RealVector schmidt_values(const StateVector& state, const std::vector<int>& block_in) {
    std::vector<int> block = block_in;
    std::sort(block.begin(), block.end());
    const int n = state.n_qubits();
    if (block.empty() || static_cast<int>(block.size()) >= n)
        throw config_error("schmidt_values: block must be a proper nonempty subset");

    const int na = static_cast<int>(block.size());
    const int nb = n - na;
    std::vector<std::size_t> a_bit(block.size());
    std::size_t a_mask = 0;
    for (std::size_t i = 0; i < block.size(); ++i) {
        a_bit[i] = std::size_t{1} << (n - 1 - block[i]);
        a_mask |= a_bit[i];
    }
    std::vector<std::size_t> b_bit;
    for (int q = 0; q < n; ++q) {
        std::size_t b = std::size_t{1} << (n - 1 - q);
        if (!(b & a_mask)) b_bit.push_back(b);
    }

    const Eigen::Index da = Eigen::Index{1} << na;
    const Eigen::Index db = Eigen::Index{1} << nb;
    ComplexMatrix m(da, db);
    const auto& amps = state.amplitudes();
    for (Eigen::Index ia = 0; ia < da; ++ia) {
        std::size_t row = 0;
        for (int i = 0; i < na; ++i)
            if ((static_cast<std::size_t>(ia) >> (na - 1 - i)) & 1) row |= a_bit[static_cast<std::size_t>(i)];
        for (Eigen::Index ib = 0; ib < db; ++ib) {
            std::size_t idx = row;
            for (int i = 0; i < nb; ++i)
                if ((static_cast<std::size_t>(ib) >> (nb - 1 - i)) & 1) idx |= b_bit[static_cast<std::size_t>(i)];
            m(ia, ib) = amps(static_cast<Eigen::Index>(idx));
        }
    }
    return svd_values(m);
}

} // namespace vqclab
