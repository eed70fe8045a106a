#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "vqclab/ensembles.hpp"
#include "vqclab/state.hpp"

using namespace vqclab;

namespace {

// Two-sample Kolmogorov-Smirnov with the asymptotic p-value series.
double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

} // namespace

TEST_CASE("haar states: unit norm and first moment of <Z>") {
    const int samples = 20000;
    Rng rng(stream_for(7, "haar-state-1q"));
    const Observable z = Observable::pauli_z_on(0, 1);
    double sum = 0.0;
    for (int s = 0; s < samples; ++s) {
        const StateVector psi = sample_haar_state(1, rng);
        CHECK(std::abs(psi.norm() - 1.0) <= 1e-12);
        sum += expectation_value(z, psi);
    }
    const double mean = sum / samples;
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(samples)));
}

TEST_CASE("haar states: E[psi psi^] is close to I/d at n=3") {
    const int samples = 20000;
    const int d = 8;
    Rng rng(stream_for(8, "haar-state-3q"));
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(d, d);
    for (int s = 0; s < samples; ++s) {
        const StateVector psi = sample_haar_state(3, rng);
        const ComplexMatrix term = psi.amplitudes() * psi.amplitudes().adjoint();
        sum += term;
        sum_sq += term.cwiseAbs2();
    }
    const ComplexMatrix mean = sum / samples;
    double max_dev_in_se = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double ref = (i == j) ? 1.0 / d : 0.0;
            const double var = std::max(1e-30, sum_sq(i, j) / samples - std::norm(mean(i, j)));
            const double se = std::sqrt(var / samples);
            max_dev_in_se = std::max(max_dev_in_se, std::abs(mean(i, j) - Complex(ref, 0)) / se);
        }
    CHECK(max_dev_in_se <= 5.0);
}

TEST_CASE("haar unitaries: unitary to 1e-10 and first moment I/d") {
    const int samples = 20000;
    const int d = 4;
    Rng rng(stream_for(9, "haar-unitary-2q"));
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (int s = 0; s < samples; ++s) {
        const ComplexMatrix u = sample_haar_unitary(2, rng);
        if (s < 50)
            CHECK((u.adjoint() * u - identity_matrix(d)).cwiseAbs().maxCoeff() <= 1e-10);
        sum += u.col(0) * u.col(0).adjoint();
    }
    const ComplexMatrix mean = sum / samples;
    // entries concentrate as O(1/sqrt(samples)); 5 sigma with var <= 1/d^2
    CHECK((mean - identity_matrix(d) / d).cwiseAbs().maxCoeff() <= 5.0 / std::sqrt(samples / 4.0));
}

TEST_CASE("sample_params moments and determinism") {
    Rng rng_u(stream_for(10, "uniform"));
    const ParameterVector uniform = sample_params(UniformDist{}, 100000, rng_u);
    double mean = 0.0;
    for (double v : uniform) mean += v;
    mean /= static_cast<double>(uniform.size());
    CHECK(std::abs(mean) <= 0.02);

    Rng rng_g(stream_for(10, "gaussian"));
    const ParameterVector gaussian = sample_params(GaussianDist{0.0, 1.0}, 100000, rng_g);
    double var = 0.0;
    for (double v : gaussian) var += v * v;
    var /= static_cast<double>(gaussian.size());
    CHECK(std::abs(var - 1.0) <= 0.02);

    Rng rng_a(stream_for(42, "twice"));
    Rng rng_b(stream_for(42, "twice"));
    const ParameterVector first = sample_params(UniformDist{}, 100, rng_a);
    const ParameterVector second = sample_params(UniformDist{}, 100, rng_b);
    CHECK(first == second);
}

TEST_CASE("distinct streams are effectively uncorrelated") {
    const int draws = 10000;
    Rng a(SeedSpec{1234, 0});
    Rng b(SeedSpec{1234, 1});
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (int i = 0; i < draws; ++i) {
        const double x = a.uniform();
        const double y = b.uniform();
        sa += x;
        sb += y;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    const double cov = sab / draws - (sa / draws) * (sb / draws);
    const double corr = cov / std::sqrt((saa / draws - (sa / draws) * (sa / draws)) *
                                        (sbb / draws - (sb / draws) * (sb / draws)));
    CHECK(std::abs(corr) <= 0.05);
}

TEST_CASE("haar invariance: V psi has the same <Z0> statistics as psi") {
    const int samples = 4000;
    Rng vrng(stream_for(11, "fixed-v"));
    const ComplexMatrix v = sample_haar_unitary(2, vrng);
    const Observable z0 = Observable::pauli_z_on(0, 2);

    std::vector<double> plain(samples), rotated(samples);
    Rng rng_plain(stream_for(11, "invariance-plain"));
    Rng rng_rot(stream_for(11, "invariance-rotated"));
    for (int s = 0; s < samples; ++s) {
        plain[static_cast<std::size_t>(s)] = expectation_value(z0, sample_haar_state(2, rng_plain));
        const StateVector psi = sample_haar_state(2, rng_rot);
        ComplexVector amps = v * psi.amplitudes();
        rotated[static_cast<std::size_t>(s)] = expectation_value(z0, StateVector(2, std::move(amps)));
    }
    CHECK(ks_two_sample_p(plain, rotated) > 0.01);
}
