#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "vqclab/circuits.hpp"

namespace vqclab {

/// Deterministic stream: (master_seed, stream_id) fully determines every draw.
/// Distinct stream ids give statistically independent streams.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

/// FNV-1a hash of a stream label such as "fig4|dataset|n=12|m=8|seed=3".
std::uint64_t stream_hash(const std::string& label);

/// Convenience: SeedSpec for hash(experiment name, trial index) streams.
SeedSpec stream_for(std::uint64_t master_seed, const std::string& label);

/// xoshiro256** seeded through splitmix64. Self-contained so reruns are
/// byte-identical regardless of the standard library.
class Rng {
  public:
    explicit Rng(const SeedSpec& seed);

    std::uint64_t next_u64();
    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal (Box-Muller).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct UniformDist {
    double lo = -3.14159265358979323846;
    double hi = 3.14159265358979323846;
};
struct GaussianDist {
    double mean = 0.0;
    double stddev = 1.0;
};
using ParamDist = std::variant<UniformDist, GaussianDist>;

/// Haar-random pure state, sampled directly as a normalized complex Gaussian
/// vector (O(d), distribution identical to U|0> for Haar U).
StateVector sample_haar_state(int n_qubits, Rng& rng);

/// Haar-random unitary: phase-corrected QR of a complex Ginibre matrix.
ComplexMatrix sample_haar_unitary(int n_qubits, Rng& rng);

/// i.i.d. parameter vector from the named distribution.
ParameterVector sample_params(const ParamDist& dist, int count, Rng& rng);

/// Samplable distributions handed to diagnostics; the label lands in result
/// manifests.
struct StateEnsemble {
    std::string label;
    std::function<StateVector(Rng&)> sample;
};
struct UnitaryEnsemble {
    std::string label;
    std::function<ComplexMatrix(Rng&)> sample;
};

StateEnsemble haar_state_ensemble(int n_qubits);
UnitaryEnsemble haar_unitary_ensemble(int n_qubits);

/// States W(theta) U(x) |0> with theta resampled per draw.
StateEnsemble circuit_state_ensemble(CircuitLayout layout, EncodingSpec encoding,
                                     std::vector<double> x, ParamDist dist);

/// Dense unitaries W(theta) with theta resampled per draw (n within cap).
UnitaryEnsemble circuit_unitary_ensemble(CircuitLayout layout, ParamDist dist);

} // namespace vqclab
