#include "vqclab/ensembles.hpp"

#include <cmath>

namespace vqclab {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

std::uint64_t stream_hash(const std::string& label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SeedSpec stream_for(std::uint64_t master_seed, const std::string& label) {
    return SeedSpec{master_seed, stream_hash(label)};
}

Rng::Rng(const SeedSpec& seed) {
    std::uint64_t mix = seed.master_seed ^ (seed.stream_id * 0x9e3779b97f4a7c15ULL);
    for (auto& word : s_) word = splitmix64(mix);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

StateVector sample_haar_state(int n_qubits, Rng& rng) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    ComplexVector amps(d);
    for (Eigen::Index i = 0; i < d; ++i)
        amps(i) = Complex(rng.normal(), rng.normal());
    amps /= amps.norm();
    return StateVector(n_qubits, std::move(amps));
}

ComplexMatrix sample_haar_unitary(int n_qubits, Rng& rng) {
    const std::size_t d = std::size_t{1} << n_qubits;
    if (d > dense_cap())
        throw config_error("sample_haar_unitary: dimension exceeds dense cap");
    ComplexMatrix ginibre(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < ginibre.rows(); ++i)
        for (Eigen::Index j = 0; j < ginibre.cols(); ++j)
            ginibre(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
    return qr_unitary(ginibre);
}

ParameterVector sample_params(const ParamDist& dist, int count, Rng& rng) {
    if (count < 0)
        throw config_error("sample_params: negative count");
    ParameterVector params(static_cast<std::size_t>(count));
    if (const auto* u = std::get_if<UniformDist>(&dist)) {
        for (double& p : params) p = rng.uniform(u->lo, u->hi);
    } else {
        const auto& g = std::get<GaussianDist>(dist);
        if (g.stddev <= 0.0)
            throw config_error("sample_params: stddev must be positive");
        for (double& p : params) p = rng.normal(g.mean, g.stddev);
    }
    return params;
}

StateEnsemble haar_state_ensemble(int n_qubits) {
    return StateEnsemble{"haar-state", [n_qubits](Rng& rng) { return sample_haar_state(n_qubits, rng); }};
}

UnitaryEnsemble haar_unitary_ensemble(int n_qubits) {
    return UnitaryEnsemble{"haar-unitary", [n_qubits](Rng& rng) { return sample_haar_unitary(n_qubits, rng); }};
}

StateEnsemble circuit_state_ensemble(CircuitLayout layout, EncodingSpec encoding,
                                     std::vector<double> x, ParamDist dist) {
    auto sample = [layout = std::move(layout), encoding, x = std::move(x), dist](Rng& rng) {
        ParameterVector params = sample_params(dist, layout.param_count, rng);
        StateVector state = StateVector::zero_state(layout.n_qubits);
        state = apply_encoding(encoding, x, std::move(state));
        return apply_circuit(layout, params, std::move(state));
    };
    return StateEnsemble{"circuit-state", std::move(sample)};
}

UnitaryEnsemble circuit_unitary_ensemble(CircuitLayout layout, ParamDist dist) {
    auto sample = [layout = std::move(layout), dist](Rng& rng) {
        ParameterVector params = sample_params(dist, layout.param_count, rng);
        return circuit_unitary(layout, params);
    };
    return UnitaryEnsemble{"circuit-unitary", std::move(sample)};
}

} // namespace vqclab
