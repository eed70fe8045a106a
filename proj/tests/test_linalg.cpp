#include <doctest.h>

#include "vqclab/ensembles.hpp"
#include "vqclab/linalg.hpp"

using namespace vqclab;

namespace {

ComplexMatrix random_hermitian(int d, Rng& rng) {
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            g(i, j) = Complex(rng.normal(), rng.normal());
    return (g + g.adjoint().eval()) / 2.0;
}

} // namespace

TEST_CASE("kron identity cases") {
    const ComplexMatrix i2 = identity_matrix(2);
    CHECK((kron(i2, i2) - identity_matrix(4)).cwiseAbs().maxCoeff() == 0.0);

    const ComplexMatrix zi = kron(pauli_z(), i2);
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = 1;
    expected(1, 1) = 1;
    expected(2, 2) = -1;
    expected(3, 3) = -1;
    CHECK((zi - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kron X (x) Z expands to anti-diagonal +-Z blocks") {
    // 4x4 hand expansion: X on the more significant qubit swaps the blocks.
    const ComplexMatrix xz = kron(pauli_x(), pauli_z());
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected.block(0, 2, 2, 2) = pauli_z();
    expected.block(2, 0, 2, 2) = pauli_z();
    CHECK((xz - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kron respects the dense cap") {
    const std::size_t saved = dense_cap();
    set_dense_cap(8);
    CHECK_THROWS_AS(kron(identity_matrix(4), identity_matrix(4)), config_error);
    set_dense_cap(saved);
}

TEST_CASE("swap operator defining properties") {
    CHECK(swap_operator(1)(0, 0) == Complex(1, 0));

    const ComplexMatrix f2 = swap_operator(2);
    // fixes |00>, |11>; swaps |01> <-> |10>
    CHECK(f2(0, 0) == Complex(1, 0));
    CHECK(f2(3, 3) == Complex(1, 0));
    CHECK(f2(1, 2) == Complex(1, 0));
    CHECK(f2(2, 1) == Complex(1, 0));
    CHECK(f2(1, 1) == Complex(0, 0));

    const ComplexMatrix f4 = swap_operator(4);
    CHECK(std::abs(f4.trace() - Complex(4, 0)) == 0.0);
    CHECK(((f4 * f4) - identity_matrix(16)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("swap operator contracts Tr((O (x) O) F) = Tr(O^2)") {
    Rng rng(SeedSpec{11, 0});
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 3);
        const ComplexMatrix o = random_hermitian(d, rng);
        const ComplexMatrix f = swap_operator(d);
        const Complex lhs = (kron(o, o) * f).trace();
        const Complex rhs = (o * o).trace();
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("svd_values basics") {
    const RealVector identity_vals = svd_values(identity_matrix(2));
    CHECK(identity_vals(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(identity_vals(1) == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(SeedSpec{12, 0});
    ComplexVector u(3), v(3);
    for (int i = 0; i < 3; ++i) {
        u(i) = Complex(rng.normal(), rng.normal());
        v(i) = Complex(rng.normal(), rng.normal());
    }
    u /= u.norm();
    v /= v.norm();
    const RealVector rank1 = svd_values(u * v.adjoint());
    CHECK(rank1(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rank1(1) == doctest::Approx(0.0).epsilon(1e-10));

    // reshaped Bell state (|00> + |11>)/sqrt(2) as a 2x2 matrix
    ComplexMatrix bell(2, 2);
    bell << Complex(1 / std::sqrt(2.0), 0), 0, 0, Complex(1 / std::sqrt(2.0), 0);
    const RealVector schmidt = svd_values(bell);
    CHECK(schmidt(0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(schmidt(1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("svd_values are descending and Frobenius-consistent") {
    Rng rng(SeedSpec{13, 0});
    for (int rep = 0; rep < 10; ++rep) {
        ComplexMatrix g(4, 5);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 5; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
        const RealVector s = svd_values(g);
        double sum_sq = 0.0;
        for (int i = 0; i < s.size(); ++i) {
            CHECK(s(i) >= 0.0);
            if (i) CHECK(s(i) <= s(i - 1) + 1e-15);
            sum_sq += s(i) * s(i);
        }
        CHECK(sum_sq == doctest::Approx(g.squaredNorm()).epsilon(1e-9));
    }
}

TEST_CASE("qr_unitary") {
    CHECK((qr_unitary(identity_matrix(3)) - identity_matrix(3)).cwiseAbs().maxCoeff() <= 1e-12);

    Rng rng(SeedSpec{14, 0});
    const ComplexMatrix u = sample_haar_unitary(2, rng);
    const ComplexMatrix q = qr_unitary(u);
    CHECK((q.adjoint() * q - identity_matrix(4)).cwiseAbs().maxCoeff() <= 1e-10);
    // unitary input is recovered up to column phases
    for (int c = 0; c < 4; ++c) {
        const Complex overlap = u.col(c).dot(q.col(c));
        CHECK(std::abs(std::abs(overlap) - 1.0) <= 1e-10);
    }

    ComplexMatrix ginibre(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ginibre(i, j) = Complex(rng.normal(), rng.normal());
    CHECK(is_unitary(qr_unitary(ginibre), 1e-10));

    ComplexMatrix singular = ComplexMatrix::Zero(3, 3);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(qr_unitary(singular), numeric_error);
}

TEST_CASE("embed_operator places single-qubit operators with qubit-0 MSB") {
    const ComplexMatrix z0 = embed_operator(pauli_z(), {0}, 2);
    CHECK((z0 - kron(pauli_z(), identity_matrix(2))).cwiseAbs().maxCoeff() == 0.0);
    const ComplexMatrix z1 = embed_operator(pauli_z(), {1}, 2);
    CHECK((z1 - kron(identity_matrix(2), pauli_z())).cwiseAbs().maxCoeff() == 0.0);

    // two-qubit operator on reversed targets = swap-conjugated
    Rng rng(SeedSpec{15, 0});
    const ComplexMatrix u = sample_haar_unitary(2, rng);
    const ComplexMatrix direct = embed_operator(u, {0, 1}, 2);
    const ComplexMatrix reversed = embed_operator(u, {1, 0}, 2);
    const ComplexMatrix f = swap_operator(2);
    CHECK((reversed - f * direct * f).cwiseAbs().maxCoeff() <= 1e-12);
}
