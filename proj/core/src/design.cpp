#include "vqclab/design.hpp"

#include <cmath>

#include "vqclab/stats.hpp"

namespace vqclab {

ChoiState choi_state(const ComplexMatrix& u) {
    if (!is_unitary(u, kConstructTol))
        throw numeric_error("choi_state: input not unitary within 1e-10");
    const Eigen::Index d = u.rows();
    int n = 0;
    while ((Eigen::Index{1} << n) < d) ++n;
    if ((Eigen::Index{1} << n) != d)
        throw config_error("choi_state: dimension not a power of two");
    if (static_cast<std::size_t>(d) * d > dense_cap())
        throw config_error("choi_state: doubled dimension exceeds dense cap");

    ComplexVector amps(d * d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index z = 0; z < d; ++z)
            amps(i * d + z) = u(i, z) * scale;
    return ChoiState{n, StateVector(2 * n, std::move(amps))};
}

std::vector<int> doubled_cut(const Bipartition& cut, int n_qubits) {
    std::vector<int> block;
    block.reserve(cut.block_a.size() * 2);
    for (int q : cut.block_a) block.push_back(q);
    for (int q : cut.block_a) block.push_back(q + n_qubits);
    return block;
}

double choi_purity(const ComplexMatrix& u, const Bipartition& cut) {
    const ChoiState choi = choi_state(u);
    const RealVector lambdas = schmidt_values(choi.state, doubled_cut(cut, choi.n_qubits));
    double purity = 0.0;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        purity += std::pow(lambdas(i), 4);
    return purity;
}

double haar_choi_purity_mean(int n_qubits, int block_size) {
    const double da = std::pow(2.0, block_size);
    const double db = std::pow(2.0, n_qubits - block_size);
    const double d = da * db;
    return (da * da + db * db - 2.0) / (d * d - 1.0);
}

RealVector operator_schmidt_values(const ComplexMatrix& u, const Bipartition& cut) {
    const Eigen::Index d = u.rows();
    int n = 0;
    while ((Eigen::Index{1} << n) < d) ++n;
    if ((Eigen::Index{1} << n) != d || u.cols() != d)
        throw config_error("operator_schmidt_values: bad dimensions");

    const int na = static_cast<int>(cut.block_a.size());
    const int nb = n - na;
    std::vector<std::size_t> a_bit, b_bit;
    for (int q : cut.block_a) a_bit.push_back(std::size_t{1} << (n - 1 - q));
    for (int q : cut.block_b) b_bit.push_back(std::size_t{1} << (n - 1 - q));

    auto split = [&](std::size_t idx, const std::vector<std::size_t>& bits) {
        std::size_t part = 0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (idx & bits[i]) part |= std::size_t{1} << (bits.size() - 1 - i);
        return part;
    };

    const Eigen::Index da = Eigen::Index{1} << na;
    const Eigen::Index db = Eigen::Index{1} << nb;
    ComplexMatrix m(da * da, db * db);
    for (Eigen::Index r = 0; r < d; ++r) {
        const std::size_t ra = split(static_cast<std::size_t>(r), a_bit);
        const std::size_t rb = split(static_cast<std::size_t>(r), b_bit);
        for (Eigen::Index c = 0; c < d; ++c) {
            const std::size_t ca = split(static_cast<std::size_t>(c), a_bit);
            const std::size_t cb = split(static_cast<std::size_t>(c), b_bit);
            m(static_cast<Eigen::Index>(ra * static_cast<std::size_t>(da) + ca),
              static_cast<Eigen::Index>(rb * static_cast<std::size_t>(db) + cb)) = u(r, c);
        }
    }
    return svd_values(m);
}

int operator_schmidt_rank(const ComplexMatrix& u, const Bipartition& cut, double rel_tol) {
    const RealVector values = operator_schmidt_values(u, cut);
    if (values.size() == 0) return 0;
    const double cutoff = rel_tol * values(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values(i) > cutoff) ++rank;
    return rank;
}

FramePotentialEstimate frame_potential(const UnitaryEnsemble& ensemble, int t, int pairs,
                                       const SeedSpec& seed) {
    if (pairs < 100)
        throw config_error("frame_potential: need at least 100 pairs");
    if (t < 1)
        throw config_error("frame_potential: t must be >= 1");
    std::vector<double> values(static_cast<std::size_t>(pairs));
    for (int p = 0; p < pairs; ++p) {
        Rng rng(SeedSpec{seed.master_seed, seed.stream_id + static_cast<std::uint64_t>(p)});
        const ComplexMatrix u = ensemble.sample(rng);
        const ComplexMatrix v = ensemble.sample(rng);
        const double overlap = std::abs((u.adjoint() * v).trace());
        values[static_cast<std::size_t>(p)] = std::pow(overlap, 2.0 * t);
    }
    FramePotentialEstimate est;
    est.pairs = pairs;
    est.value = sample_mean(values);
    est.stderr_value = std::sqrt(sample_variance(values) / static_cast<double>(pairs));
    est.haar_value = 1.0;
    for (int i = 2; i <= t; ++i) est.haar_value *= i;
    return est;
}

SecondMomentReport second_moment_distance(const StateEnsemble& ensemble, int samples,
                                          const SeedSpec& seed) {
    if (samples < 2)
        throw config_error("second_moment_distance: need at least 2 samples");
    Rng probe_rng(seed);
    const StateVector probe = ensemble.sample(probe_rng);
    const Eigen::Index d = probe.dim();
    if (static_cast<std::size_t>(d) * d > dense_cap())
        throw config_error("second_moment_distance: d^2 exceeds dense cap");
    const Eigen::Index d2 = d * d;

    ComplexMatrix sum = ComplexMatrix::Zero(d2, d2);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(d2, d2);
    ComplexVector w(d2);
    ComplexMatrix term(d2, d2);
    for (int s = 0; s < samples; ++s) {
        Rng rng(SeedSpec{seed.master_seed, seed.stream_id + 1 + static_cast<std::uint64_t>(s)});
        const StateVector psi = ensemble.sample(rng);
        const auto& amps = psi.amplitudes();
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                w(i * d + j) = amps(i) * amps(j);
        term.noalias() = w * w.adjoint();
        sum += term;
        sum_sq += term.cwiseAbs2();
    }

    const ComplexMatrix mean = sum / static_cast<double>(samples);
    ComplexMatrix ref = ComplexMatrix::Identity(d2, d2) + swap_operator(d);
    ref /= static_cast<double>(d) * (static_cast<double>(d) + 1.0);

    SecondMomentReport report;
    report.samples = samples;
    report.distance = (mean - ref).cwiseAbs().maxCoeff();
    // Per-entry stderr from Var(T_ij) = E|T_ij|^2 - |E T_ij|^2.
    double max_se = 0.0;
    for (Eigen::Index i = 0; i < d2; ++i)
        for (Eigen::Index j = 0; j < d2; ++j) {
            const double second = sum_sq(i, j) / static_cast<double>(samples);
            const double var = std::max(0.0, second - std::norm(mean(i, j)));
            max_se = std::max(max_se, std::sqrt(var / static_cast<double>(samples)));
        }
    report.max_stderr = max_se;
    return report;
}

CircuitLayout bounded_cut_layout(int n_qubits, int inner_layers, int crossings, Rng& rng) {
    if (n_qubits < 2)
        throw config_error("bounded_cut_layout: need n >= 2");
    if (crossings < 0 || inner_layers < 0)
        throw config_error("bounded_cut_layout: negative counts");
    const int half = n_qubits / 2;
    CircuitLayout layout;
    layout.n_qubits = n_qubits;
    layout.param_count = 0;

    auto add_block_layer = [&](int start, int size, int parity) {
        for (int q = start + parity; q + 1 < start + size; q += 2)
            layout.gates.push_back(FixedUnitaryGate{sample_haar_unitary(2, rng), {q, q + 1}});
    };
    auto add_block_layers = [&] {
        for (int layer = 0; layer < inner_layers; ++layer) {
            add_block_layer(0, half, layer % 2);
            add_block_layer(half, n_qubits - half, layer % 2);
        }
    };

    add_block_layers();
    for (int c = 0; c < crossings; ++c)
        layout.gates.push_back(FixedUnitaryGate{sample_haar_unitary(2, rng), {half - 1, half}});
    add_block_layers();
    return layout;
}

UnitaryEnsemble bounded_cut_unitary_ensemble(int n_qubits, int inner_layers, int crossings) {
    auto sample = [n_qubits, inner_layers, crossings](Rng& rng) {
        const CircuitLayout layout = bounded_cut_layout(n_qubits, inner_layers, crossings, rng);
        return circuit_unitary(layout, {});
    };
    return UnitaryEnsemble{"bounded-cut", std::move(sample)};
}

} // namespace vqclab
