// hodograph.hpp
//
// Generalized-hodograph solver: the implicit multi-phase equation of state
//   T + sum_i mu_(i)^k(theta) tau^i = lambda^k(theta),  k = 1..N,
// solved for the order parameters by damped-Newton multistart, continued
// along coordinate paths, and verified a posteriori against the PDEs.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "phaseflow/hydro.hpp"
#include "phaseflow/numcore.hpp"

namespace phaseflow::hodo {

/// Temperature plus the conjugate variables tau^1..tau^M.
struct ThermoCoordinates {
    double T = 0.0;
    Vec tau;

    ThermoCoordinates() = default;
    ThermoCoordinates(double temperature, Vec conjugates);
};

/// Full data of the multi-phase equation of state. Construction verifies
/// that the symmetry commutes with every flow at the given sample points
/// (skipped when check_points is empty).
struct PhaseSystem {
    hydro::SpeedFamily speeds;
    hydro::SymmetryField symmetry;

    PhaseSystem(hydro::SpeedFamily s, hydro::SymmetryField sym,
                const std::vector<OrderParameterPoint>& check_points = {},
                double check_tol = 1e-6);

    std::size_t phases() const { return speeds.phases; }
    std::size_t flow_count() const { return speeds.flow_count(); }
};

/// Residual vector r_k = T + sum_i mu_(i)^k tau^i - lambda^k.
Vec state_residual(const PhaseSystem& sys, const OrderParameterPoint& theta,
                   const ThermoCoordinates& coords);

struct NewtonOptions {
    double tol = 1e-10;       // on the max-norm of the residual
    int max_iterations = 50;
    int max_backtracks = 30;  // Armijo halvings per step
    int singular_retries = 3;
    double dedupe_radius = 0.0; // 0 = 1e-6 * seed-box diagonal
};

struct SeedReport {
    OrderParameterPoint seed;
    OrderParameterPoint last;
    std::string reason; // "converged", "diverged", "stalled", "singular-jacobian"
    bool converged = false;
};

struct SolveResult {
    std::vector<OrderParameterPoint> roots; // sorted lexicographically
    std::vector<SeedReport> reports;
    bool analytic_jacobian = false;
};

/// Damped Newton from every seed; converged points are deduplicated and
/// sorted. An empty root set is a finding, not an error.
SolveResult solve_state(const PhaseSystem& sys, const ThermoCoordinates& coords,
                        const std::vector<OrderParameterPoint>& seeds,
                        const NewtonOptions& opts = {});

/// Uniform multistart lattice, per_axis^N points over [lo, hi]^N.
std::vector<OrderParameterPoint> seed_lattice(std::size_t N, double lo,
                                              double hi, std::size_t per_axis);

struct BranchPoint {
    ThermoCoordinates coords;
    OrderParameterPoint theta;
    double residual_norm;
};

struct SolutionBranch {
    std::string label;
    std::vector<BranchPoint> points;
    bool turning_point = false; // continuation died at the minimum step
    bool analytic_jacobian = false;
};

struct SweepOptions {
    NewtonOptions newton;
    int max_bisections = 24; // per path leg before declaring a fold
    double max_step = 1.0;   // largest substep, as a fraction of a path leg
};

/// Predictor-corrector continuation along the given coordinate path,
/// starting from a root of the state at path[0] (else BadSeedError).
/// Records the requested nodes only; stops with turning_point = true when
/// the minimum step fails.
SolutionBranch sweep(const PhaseSystem& sys,
                     const std::vector<ThermoCoordinates>& path,
                     const OrderParameterPoint& initial,
                     const SweepOptions& opts = {});

/// Solutions on a rectangular (T, tau^flow) grid, all on one branch.
struct SolvedGrid {
    std::size_t flow = 1;
    Vec T;
    Vec tau;
    ThermoCoordinates base; // supplies the frozen tau^i, i != flow
    std::vector<std::vector<OrderParameterPoint>> theta; // [iT][itau]
};

/// Fills a SolvedGrid by continuation from a root at the grid corner.
SolvedGrid solve_grid(const PhaseSystem& sys, std::size_t flow, const Vec& Ts,
                      const Vec& taus, const ThermoCoordinates& base,
                      const OrderParameterPoint& corner_seed,
                      double tol = 1e-12);

struct PdeReport {
    double max_residual = 0.0;    // finest stencil
    double coarse_residual = 0.0; // doubled spacing
    double order = 0.0;           // log2 ratio; NaN when below rounding
};

/// Finite-difference check of dtheta^k/dtau^i = mu_(i)^k dtheta^k/dT on the
/// solved surface, with the empirical convergence order from the h and 2h
/// stencils. A branch jump inside the grid raises MixedBranchError.
PdeReport pde_check(const PhaseSystem& sys, const SolvedGrid& grid,
                    std::size_t flow);

} // namespace phaseflow::hodo
