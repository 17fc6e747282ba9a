// tsallis.hpp
//
// Tsallis composition entropies S_q^(N), their characteristic speeds, the
// phase-splitting recursion, and the Euler-Poisson-Darboux residual.
#pragma once

#include <cstddef>
#include <utility>

#include "phaseflow/hydro.hpp"
#include "phaseflow/numcore.hpp"

namespace phaseflow::tsallis {

/// S_q^(N) = q^(N-1) (prod_k(1/q + theta^k) - 1/q^N) for q != 0 and
/// sum_k theta^k for q = 0. Evaluated through the equivalent expansion
/// sum_{m>=1} q^(m-1) e_m(theta), which carries no 1/q^N cancellation.
double entropy(double q, const OrderParameterPoint& theta);

/// Characteristic speed mu_(q)^k = dS_q^(N)/dtheta^k
///   = q^(N-1) prod_{j != k}(1/q + theta^j),
/// independent of theta^k (linear degeneracy); equals 1 at q = 0.
double speed(double q, const OrderParameterPoint& theta, std::size_t k);

/// Two-phase composition rule s1 + s2 + q s1 s2.
double binary_compose(double q, double s1, double s2);

/// Replaces theta^j by the two parts (which must binary_compose back to
/// theta^j within 1e-12, else CompositionMismatchError), growing the system
/// from N to N+1 phases. The entropy is invariant under the split.
OrderParameterPoint split_phase(double q, const OrderParameterPoint& theta,
                                std::size_t j,
                                std::pair<double, double> parts);

/// Euler-Poisson-Darboux residual
///   d_i d_j f - (d_j f - d_i f)/(theta^i - theta^j),
/// zero for every S_q at every q. Coincident theta^i, theta^j raise
/// PoleError.
double epd_residual(const ScalarField& field, const OrderParameterPoint& theta,
                    std::size_t i, std::size_t j);

/// S_q^(N) packaged with analytic gradient and Hessian.
struct TsallisEntropy {
    double q = 0.0;
    std::size_t phases = 2;

    ScalarField field() const;
};

/// Flows (T, tau_q): row 0 is the T-translation, row 1 the speeds of the
/// flow generated by S_q^(N) (state function Lambda_q = -S_q^(N)).
hydro::SpeedFamily speed_family(double q, std::size_t N);

} // namespace phaseflow::tsallis
