// onephase.hpp
//
// One-phase equations of state T - alpha(Lambda) tau - f(Lambda) = 0:
// Riemann-Hopf surface checks, van der Waals and molecular-field models,
// the Brillouin function, and reconstruction of alpha, f from two isotherms.
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "phaseflow/hodograph.hpp"
#include "phaseflow/numcore.hpp"

namespace phaseflow::onephase {

/// Implicit one-phase state surface T = alpha(Lambda) tau + f(Lambda).
/// The optional entropy is the separable S~(Lambda) with alpha = 1/S~'.
struct OnePhaseEOS {
    std::function<double(double)> alpha;
    std::function<double(double)> f;
    std::function<double(double)> entropy; // optional
    std::string lambda_label = "lambda";
    std::string tau_label = "tau";
};

/// Sampled Lambda(T, tau) surface on a uniform rectangular grid.
struct SurfaceGrid {
    Vec T;
    Vec tau;
    std::vector<std::vector<double>> lambda; // [iT][itau]
};

struct FdReport {
    double max_residual = 0.0;
    double coarse_residual = 0.0;
    double order = 0.0;
};

/// Finite-difference residual of dLambda/dtau + alpha(Lambda) dLambda/dT = 0
/// on the sampled surface, with the empirical order from the h and 2h
/// stencils. Branch jumps raise MixedBranchError.
FdReport hopf_residual(const OnePhaseEOS& eos, const SurfaceGrid& grid);

struct Root {
    double value = 0.0;
    bool tangent = false; // |g| dipped below zero_eps without a sign change
    bool at_edge = false;
};

struct ScanOptions {
    int cells = 2048;
    double rel_tol = 1e-12;
    double zero_eps = 1e-13;
};

/// All roots of g(Lambda) = T - alpha(Lambda) tau - f(Lambda) inside
/// [lo, hi], by dense scan plus bisection, in ascending order. More than
/// max_roots raises RootOverflowError.
std::vector<Root> solve_onephase(const OnePhaseEOS& eos, double T, double tau,
                                 double lo, double hi, std::size_t max_roots,
                                 const ScanOptions& opts = {});

/// Van der Waals parameters; defaults are the normalized set with the
/// critical point at (V, T, P) = (1, 1, 1).
struct VdwParams {
    double n = 1.0;        // moles
    double a = 3.0;        // attraction constant
    double b = 1.0 / 3.0;  // covolume
    double R = 8.0 / 3.0;  // gas constant
};

/// alpha(V) = (V - nb)/(nR), f(V) = (na/R)/V - (a n^2 b/R)/V^2; identical to
/// the classical law (P + a n^2/V^2)(V - nb) = nRT. Evaluation at V <= nb
/// raises DomainError.
OnePhaseEOS vdw_eos(const VdwParams& p);

/// Brillouin function B_s(y); s must be a positive half-integer. Odd in y
/// with range (-1, 1); B_{1/2} = tanh.
double brillouin(double s, double y);

struct MagnetParams {
    double M0 = 1.0;    // saturation magnetization
    double mubar = 1.0; // g mu_B
    double kappa = 1.0; // Boltzmann constant
    double s = 0.5;     // spin, half-integer
    double lam = 0.0;   // molecular-field interaction constant
};

struct MagnetResult {
    std::vector<Root> roots;
    bool clamped = false; // bracket touched +-M0 and was pulled inside
};

/// All roots of M = M0 B_s((mubar s/(kappa T))(H + lam M)) in the bracket.
MagnetResult magnet_solve(const MagnetParams& p, double T, double H, double lo,
                          double hi, const ScanOptions& opts = {});

/// Spin-1/2 hodograph-form residual H - (2 kappa/mubar) arctanh(M/M0) T
/// + lam M; vanishes at every magnet_solve root.
double halfspin_residual(const MagnetParams& p, double T, double H, double M);

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant; evaluation
/// outside the data range raises DomainError.
class Pchip {
public:
    Pchip(Vec x, Vec y);
    double operator()(double x) const;
    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }

private:
    Vec x_, y_, m_;
};

/// Sampled isotherm tau(Lambda) at fixed temperature; Lambda strictly
/// increasing, at least two rows.
struct IsothermTable {
    double T = 0.0;
    Vec lambda;
    Vec tau;

    IsothermTable() = default;
    IsothermTable(double temperature, Vec lambdas, Vec taus);
};

/// CSV exchange format: one `# T=<value>` comment line, a `lambda,tau`
/// header, then rows. Strict, locale-independent parse.
IsothermTable read_isotherm_csv(std::istream& in);
IsothermTable read_isotherm_csv(const std::string& path);
void write_isotherm_csv(std::ostream& out, const IsothermTable& table);

struct AlphaFTable {
    Vec lambda, alpha, f;
};

/// Pointwise 2x2 solve of T_i = alpha tau_i(Lambda) + f over the grid,
/// with tau_i from monotone interpolation of the tables. Grid nodes outside
/// the shared Lambda range are dropped (no extrapolation). Equal
/// temperatures raise DegenerateIsothermsError; coincident isotherm values
/// at a node raise SingularNodeError.
AlphaFTable reconstruct_alpha_f(const IsothermTable& iso1,
                                const IsothermTable& iso2, const Vec& grid);

/// EOS backed by interpolation of a reconstructed table (for round trips).
OnePhaseEOS eos_from_table(const AlphaFTable& table);

/// One-phase system in hodograph form: theta^1 = Lambda, mu = -alpha,
/// lambda = f.
hodo::PhaseSystem as_phase_system(const OnePhaseEOS& eos);

} // namespace phaseflow::onephase
