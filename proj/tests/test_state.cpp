#include <doctest.h>

#include "vqclab/ensembles.hpp"
#include "vqclab/state.hpp"

using namespace vqclab;

namespace {

// Independent partial-trace oracle: dense rho = psi psi^ then a direct
// double sum over the traced index, with its own bit bookkeeping.
ComplexMatrix partial_trace_oracle(const StateVector& state, const std::vector<int>& keep) {
    const int n = state.n_qubits();
    const ComplexMatrix rho_full = state.amplitudes() * state.amplitudes().adjoint();
    std::vector<int> traced;
    for (int q = 0; q < n; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

    const int nk = static_cast<int>(keep.size());
    const int nt = static_cast<int>(traced.size());
    const Eigen::Index dk = Eigen::Index{1} << nk;
    const Eigen::Index dt = Eigen::Index{1} << nt;

    auto full_index = [&](Eigen::Index kept_part, Eigen::Index traced_part) {
        std::size_t idx = 0;
        for (int i = 0; i < nk; ++i)
            if ((kept_part >> (nk - 1 - i)) & 1) idx |= std::size_t{1} << (n - 1 - keep[static_cast<std::size_t>(i)]);
        for (int i = 0; i < nt; ++i)
            if ((traced_part >> (nt - 1 - i)) & 1)
                idx |= std::size_t{1} << (n - 1 - traced[static_cast<std::size_t>(i)]);
        return static_cast<Eigen::Index>(idx);
    };

    ComplexMatrix rho = ComplexMatrix::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a)
        for (Eigen::Index b = 0; b < dk; ++b)
            for (Eigen::Index e = 0; e < dt; ++e)
                rho(a, b) += rho_full(full_index(a, e), full_index(b, e));
    return rho;
}

} // namespace

TEST_CASE("StateVector validates norm and shape") {
    CHECK_THROWS_AS(StateVector(2, ComplexVector::Zero(4)), numeric_error);
    CHECK_THROWS_AS(StateVector(2, ComplexVector::Ones(3)), config_error);
    const StateVector zero = StateVector::zero_state(3);
    CHECK(zero.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partial trace of product and Bell states") {
    const StateVector zz = StateVector::zero_state(2);
    const ComplexMatrix rho0 = partial_trace(zz, {0});
    CHECK(rho0(0, 0) == Complex(1, 0));
    CHECK(std::abs(rho0(1, 1)) == 0.0);

    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = 1 / std::sqrt(2.0);
    bell(3) = 1 / std::sqrt(2.0);
    const ComplexMatrix half = partial_trace(StateVector(2, bell), {0});
    CHECK((half - 0.5 * identity_matrix(2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("partial trace matches the brute-force oracle on random states") {
    Rng rng(SeedSpec{21, 0});
    for (int rep = 0; rep < 10; ++rep) {
        const StateVector psi = sample_haar_state(3, rng);
        for (const std::vector<int>& keep :
             {std::vector<int>{0, 2}, std::vector<int>{1}, std::vector<int>{0, 1}}) {
            const ComplexMatrix fast = partial_trace(psi, keep);
            const ComplexMatrix slow = partial_trace_oracle(psi, keep);
            CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("partial trace output is Hermitian, PSD, unit trace") {
    Rng rng(SeedSpec{22, 0});
    for (int rep = 0; rep < 10; ++rep) {
        const StateVector psi = sample_haar_state(4, rng);
        const ComplexMatrix rho = partial_trace(psi, {1, 3});
        CHECK(is_hermitian(rho, 1e-10));
        CHECK(std::abs(rho.trace() - Complex(1, 0)) <= 1e-10);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
    CHECK_THROWS_AS(partial_trace(StateVector::zero_state(2), {}), config_error);
}

TEST_CASE("schmidt values of a normalized state square-sum to 1") {
    Rng rng(SeedSpec{23, 0});
    for (int rep = 0; rep < 5; ++rep) {
        const StateVector psi = sample_haar_state(4, rng);
        const RealVector vals = schmidt_values(psi, {0, 2});
        CHECK(vals.squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("schmidt values agree with partial-trace spectrum") {
    Rng rng(SeedSpec{24, 0});
    const StateVector psi = sample_haar_state(4, rng);
    const RealVector vals = schmidt_values(psi, {1, 2});
    const ComplexMatrix rho = partial_trace(psi, {1, 2});
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho);
    RealVector spectrum = eig.eigenvalues().reverse();
    for (int i = 0; i < vals.size(); ++i)
        CHECK(vals(i) * vals(i) == doctest::Approx(spectrum(i)).epsilon(1e-9));
}

TEST_CASE("Observable enforces Hermiticity and the spectral bound") {
    ComplexMatrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(Observable(bad, {0}, 2), numeric_error);
    CHECK_THROWS_AS(Observable(2.0 * pauli_z(), {0}, 2), numeric_error);

    const Observable z0 = Observable::pauli_z_on(0, 3);
    CHECK(expectation_value(z0, StateVector::zero_state(3)) == doctest::Approx(1.0));
    CHECK(expectation_value(z0, StateVector::basis_state(3, 0b100)) == doctest::Approx(-1.0));
    CHECK(expectation_value(z0, StateVector::basis_state(3, 0b010)) == doctest::Approx(1.0));
}

TEST_CASE("expectation_value matches the dense full operator") {
    Rng rng(SeedSpec{25, 0});
    const Observable z1 = Observable::pauli_z_on(1, 3);
    for (int rep = 0; rep < 10; ++rep) {
        const StateVector psi = sample_haar_state(3, rng);
        const double fast = expectation_value(z1, psi);
        const double dense =
            (psi.amplitudes().adjoint() * z1.full_matrix() * psi.amplitudes()).value().real();
        CHECK(fast == doctest::Approx(dense).epsilon(1e-10));
    }
}

TEST_CASE("Bipartition validation and balanced cut") {
    const Bipartition cut = Bipartition::balanced(5);
    CHECK(cut.block_a == std::vector<int>{0, 1});
    CHECK(cut.block_b == std::vector<int>{2, 3, 4});
    CHECK_THROWS_AS(Bipartition({}, 3), config_error);
    CHECK_THROWS_AS(Bipartition({0, 1, 2}, 3), config_error);
    CHECK_THROWS_AS(Bipartition({0, 0}, 3), config_error);
}
