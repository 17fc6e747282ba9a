// hydro.hpp
//
// Integrability machinery for diagonal hydrodynamic-type systems
//   dtheta^k/dtau^i = mu_(i)^k(theta) dtheta^k/dT:
// semi-Hamiltonian test, symmetry/conservation residuals, Lax relation,
// linear-degeneracy detection, the weakly nonlinear symmetry basis and the
// quadrature construction of general symmetries from it.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "phaseflow/numcore.hpp"

namespace phaseflow::hydro {

/// Characteristic speeds mu_(i)^k for flows i = 0..M over N phases.
/// Flow 0 is the T-translation, mu_(0)^k = 1.
struct SpeedFamily {
    std::size_t phases = 0;                      // N
    std::vector<std::vector<ScalarField>> flows; // flows[i][k], i = 0..M

    std::size_t flow_count() const { // M
        return flows.empty() ? 0 : flows.size() - 1;
    }
    const ScalarField& mu(std::size_t flow, std::size_t k) const;
    double speed(std::size_t flow, std::size_t k,
                 const OrderParameterPoint& p) const;
    /// d mu_(flow)^k / d theta^l
    double dspeed(std::size_t flow, std::size_t k, std::size_t l,
                  const OrderParameterPoint& p) const;
    bool analytic() const;
};

/// Characteristic speeds lambda^k of a commuting flow.
struct SymmetryField {
    std::vector<ScalarField> lambda;

    std::size_t phases() const { return lambda.size(); }
    double value(std::size_t k, const OrderParameterPoint& p) const;
    double dvalue(std::size_t k, std::size_t l,
                  const OrderParameterPoint& p) const;
    bool analytic() const;
};

/// Conserved density S with the current of the corresponding tau-flow.
struct ConservationPair {
    ScalarField density;
    ScalarField current;
};

/// Semi-Hamiltonian integrability residual
///   d_s(d_l mu^k / (mu^l - mu^k)) - d_l(d_s mu^k / (mu^s - mu^k))
/// for pairwise distinct k, l, s. Coincident speeds raise PoleError and
/// fewer than three phases raise VacuousConditionError.
double semi_hamiltonian_residual(const SpeedFamily& fam, std::size_t flow,
                                 const OrderParameterPoint& p, std::size_t k,
                                 std::size_t l, std::size_t s);

/// Cross-multiplied commuting-flow residual
///   d_l lambda^k (mu^l - mu^k) - d_l mu^k (lambda^l - lambda^k),
/// zero iff sym is a symmetry of the flow at p.
double symmetry_residual(const SpeedFamily& fam, std::size_t flow,
                         const SymmetryField& sym, const OrderParameterPoint& p,
                         std::size_t k, std::size_t l);

/// Conserved-density residual
///   (mu^i - mu^j) d_i d_j S - d_i mu^j d_j S + d_j mu^i d_i S.
double conservation_residual(const SpeedFamily& fam, std::size_t flow,
                             const ScalarField& density,
                             const OrderParameterPoint& p, std::size_t i,
                             std::size_t j);

/// Lax relation: characteristic speed -(d_k S)^-1 d_k Lambda of the flow
/// generated by the state function Lambda against the entropy S.
double lax_speed(const ScalarField& entropy, const ScalarField& state_function,
                 const OrderParameterPoint& p, std::size_t k);

struct DegeneracyReport {
    bool degenerate = false;
    double max_violation = 0.0;
    std::size_t worst_component = 0;
    std::vector<double> worst_point;
};

/// True iff max over samples and k of |d_k mu^k| <= tol.
DegeneracyReport is_linearly_degenerate(
    const SpeedFamily& fam, std::size_t flow,
    const std::vector<OrderParameterPoint>& samples, double tol);

/// Weakly nonlinear symmetry speed mu_(j)^k: the residue at s = 0 of
/// s^-(N-j) prod_i(s + theta^i)/(s + theta^k), which is the elementary
/// symmetric polynomial e_j of the thetas with theta^k removed.
double wnl_speed(const OrderParameterPoint& p, std::size_t k, std::size_t j);

/// The N independent weakly nonlinear flows mu_(0)..mu_(N-1) with analytic
/// partials; row 0 is 1 and row 1 is mu^k = sum_i theta^i - theta^k.
SpeedFamily wnl_basis(std::size_t N);

struct SymmetryBuildOptions {
    double quad_tol = 1e-13;   // absolute tolerance per c_j integral
    double ratio_tol = 1e-6;   // foreign-variable dependence bound
    double residual_tol = 1e-8;
    int verify_samples = 6;
    unsigned seed = 0x5eedU;
};

/// General symmetry lambda^k = sum_j c_j(theta) mu_(j)^k over the weakly
/// nonlinear basis, with c_j built from axis-parallel quadratures of the
/// cofactor ratios W^(j+1,i)/W^(N,i) against the data functions phi_i.
/// Verifies at sampled points that each integrand ratio depends on its own
/// variable only (else PathDependenceError) and that the result commutes
/// with the basis flow (else SymmetryMismatchError); a vanishing denominator
/// cofactor raises CofactorSingularityError.
SymmetryField build_general_symmetry(
    std::size_t N, std::vector<std::function<double(double)>> phi,
    const OrderParameterPoint& base, const SymmetryBuildOptions& opts = {});

} // namespace phaseflow::hydro
