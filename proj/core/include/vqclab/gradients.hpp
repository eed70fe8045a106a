#pragma once

#include "vqclab/stats.hpp"

namespace vqclab {

/// d f / d theta_k by the two-point shift rule, exact for exp(-i theta P/2)
/// rotations: [f(theta_k + pi/2) - f(theta_k - pi/2)] / 2. Slot k must drive
/// exactly one rotation gate.
double parameter_shift_gradient(const CircuitLayout& layout, const ParameterVector& params,
                                const EncodingSpec& encoding, const std::vector<double>& x,
                                const Observable& obs, int slot);

/// Central difference oracle, O(h^2); h restricted to [1e-6, 1e-2].
double finite_difference_gradient(const CircuitLayout& layout, const ParameterVector& params,
                                  const EncodingSpec& encoding, const std::vector<double>& x,
                                  const Observable& obs, int slot, double h = 1e-4);

/// The gradient written as an expectation: <chi| G |chi> with |chi> the state
/// just after the slot's rotation gate and G = (i/2)[P, B^ O B], B the
/// sub-circuit after that gate. Tr(G) = 0 and ||G||_2 <= ||O||_2.
struct GeneratorFrame {
    ComplexMatrix generator;
    StateVector frame_state;
};

GeneratorFrame generator_observable(const CircuitLayout& layout, const ParameterVector& params,
                                    const EncodingSpec& encoding, const std::vector<double>& x,
                                    const Observable& obs, int slot);

/// Mean/variance of the slot-k gradient over `trials` independent full
/// resamplings of theta from `dist`, with bootstrap standard errors.
MomentSummary gradient_statistics(const CircuitLayout& layout, const EncodingSpec& encoding,
                                  const std::vector<double>& x, const Observable& obs, int slot,
                                  const ParamDist& dist, int trials, const SeedSpec& seed);

} // namespace vqclab
