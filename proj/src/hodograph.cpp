// hodograph.cpp

#include "phaseflow/hodograph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace phaseflow::hodo {

ThermoCoordinates::ThermoCoordinates(double temperature, Vec conjugates)
    : T(temperature), tau(std::move(conjugates)) {
    if (!std::isfinite(T))
        throw Error("ThermoCoordinates: temperature must be finite");
    for (double v : tau)
        if (!std::isfinite(v))
            throw Error("ThermoCoordinates: tau entries must be finite");
}

PhaseSystem::PhaseSystem(hydro::SpeedFamily s, hydro::SymmetryField sym,
                         const std::vector<OrderParameterPoint>& check_points,
                         double check_tol)
    : speeds(std::move(s)), symmetry(std::move(sym)) {
    if (speeds.phases == 0 || speeds.flows.empty())
        throw Error("PhaseSystem: speeds are empty");
    if (symmetry.phases() != speeds.phases)
        throw Error("PhaseSystem: speeds and symmetry disagree on N");
    double worst = 0.0;
    for (const auto& p : check_points)
        for (std::size_t i = 1; i <= speeds.flow_count(); ++i)
            for (std::size_t k = 0; k < speeds.phases; ++k)
                for (std::size_t l = 0; l < speeds.phases; ++l)
                    if (k != l)
                        worst = std::max(worst,
                                         std::abs(hydro::symmetry_residual(
                                             speeds, i, symmetry, p, k, l)));
    if (worst > check_tol)
        throw SymmetryMismatchError(
            "PhaseSystem: symmetry residual " + std::to_string(worst) +
            " at construction sample points exceeds " +
            std::to_string(check_tol));
}

Vec state_residual(const PhaseSystem& sys, const OrderParameterPoint& theta,
                   const ThermoCoordinates& coords) {
    const std::size_t n = sys.phases();
    if (theta.size() != n)
        throw Error("state_residual: wrong point dimension");
    if (coords.tau.size() != sys.flow_count())
        throw Error("state_residual: expected " +
                    std::to_string(sys.flow_count()) + " tau components");
    Vec r(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = coords.T;
        for (std::size_t i = 1; i <= sys.flow_count(); ++i)
            acc += sys.speeds.speed(i, k, theta) * coords.tau[i - 1];
        r[k] = acc - sys.symmetry.value(k, theta);
    }
    return r;
}

namespace {

double norm_inf(const Vec& v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

double norm2sq(const Vec& v) {
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return s;
}

std::optional<Vec> try_residual(const PhaseSystem& sys, const Vec& x,
                                const ThermoCoordinates& coords) {
    try {
        Vec r = state_residual(sys, OrderParameterPoint(x), coords);
        for (double v : r)
            if (!std::isfinite(v))
                return std::nullopt;
        return r;
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::optional<SquareMatrix> try_jacobian(const PhaseSystem& sys, const Vec& x,
                                         const ThermoCoordinates& coords) {
    try {
        const OrderParameterPoint p(x);
        const std::size_t n = sys.phases();
        SquareMatrix j(n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
                double acc = 0.0;
                for (std::size_t i = 1; i <= sys.flow_count(); ++i)
                    acc += sys.speeds.dspeed(i, k, l, p) * coords.tau[i - 1];
                acc -= sys.symmetry.dvalue(k, l, p);
                if (!std::isfinite(acc))
                    return std::nullopt;
                j(k, l) = acc;
            }
        return j;
    } catch (const Error&) {
        return std::nullopt;
    }
}

struct NewtonOutcome {
    Vec x;
    double residual_norm = std::numeric_limits<double>::infinity();
    bool converged = false;
    std::string reason;
};

NewtonOutcome newton_solve(const PhaseSystem& sys,
                           const ThermoCoordinates& coords, const Vec& seed,
                           const NewtonOptions& opts) {
    NewtonOutcome out;
    out.x = seed;
    const double seed_scale = 1.0 + norm_inf(seed);
    int retries = 0;
    auto r0 = try_residual(sys, out.x, coords);
    if (!r0) {
        out.reason = "evaluation-error";
        return out;
    }
    Vec r = *r0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        out.residual_norm = norm_inf(r);
        if (out.residual_norm <= opts.tol) {
            out.converged = true;
            out.reason = "converged";
            return out;
        }
        if (norm_inf(out.x) > 1e10 * seed_scale) {
            out.reason = "diverged";
            return out;
        }
        auto jac = try_jacobian(sys, out.x, coords);
        Vec step;
        bool solved = false;
        if (jac) {
            Vec rhs(r.size());
            for (std::size_t i = 0; i < r.size(); ++i)
                rhs[i] = -r[i];
            solved = jac->solve(rhs, step);
        }
        if (!solved) {
            if (retries++ < opts.singular_retries) {
                // deterministic jitter off the singular set
                const double eps = 1e-6 * seed_scale * retries;
                for (std::size_t l = 0; l < out.x.size(); ++l)
                    out.x[l] += ((l + retries) % 2 ? 1.0 : -1.0) * eps;
                auto rj = try_residual(sys, out.x, coords);
                if (!rj) {
                    out.reason = "evaluation-error";
                    return out;
                }
                r = *rj;
                continue;
            }
            out.reason = "singular-jacobian";
            return out;
        }
        // Armijo backtracking on the squared residual norm
        const double phi0 = norm2sq(r);
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
            Vec xt(out.x.size());
            for (std::size_t l = 0; l < xt.size(); ++l)
                xt[l] = out.x[l] + t * step[l];
            auto rt = try_residual(sys, xt, coords);
            if (rt && norm2sq(*rt) <= (1.0 - 1e-4 * t) * phi0) {
                out.x = std::move(xt);
                r = std::move(*rt);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            out.reason = "stalled";
            out.residual_norm = norm_inf(r);
            return out;
        }
    }
    out.residual_norm = norm_inf(r);
    out.converged = out.residual_norm <= opts.tol;
    out.reason = out.converged ? "converged" : "no-convergence";
    return out;
}

double auto_dedupe_radius(const std::vector<OrderParameterPoint>& seeds) {
    if (seeds.empty())
        return 1e-12;
    const std::size_t n = seeds.front().size();
    double diag = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        double lo = seeds.front()[d], hi = lo;
        for (const auto& s : seeds) {
            lo = std::min(lo, s[d]);
            hi = std::max(hi, s[d]);
        }
        diag += (hi - lo) * (hi - lo);
    }
    return std::max(1e-12, 1e-6 * std::sqrt(diag));
}

double dist2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

} // namespace

SolveResult solve_state(const PhaseSystem& sys, const ThermoCoordinates& coords,
                        const std::vector<OrderParameterPoint>& seeds,
                        const NewtonOptions& opts) {
    if (seeds.empty())
        throw Error("solve_state: seed set must be nonempty");
    SolveResult result;
    result.analytic_jacobian =
        sys.speeds.analytic() && sys.symmetry.analytic();
    std::vector<Vec> converged;
    for (const auto& seed : seeds) {
        NewtonOutcome out = newton_solve(sys, coords, seed.values(), opts);
        SeedReport rep{seed, OrderParameterPoint(out.x), out.reason,
                       out.converged};
        result.reports.push_back(std::move(rep));
        if (out.converged)
            converged.push_back(out.x);
    }
    std::sort(converged.begin(), converged.end());
    const double radius = opts.dedupe_radius > 0.0 ? opts.dedupe_radius
                                                   : auto_dedupe_radius(seeds);
    for (const auto& x : converged) {
        bool fresh = true;
        for (const auto& kept : result.roots)
            if (dist2(kept.values(), x) <= radius * radius) {
                fresh = false;
                break;
            }
        if (fresh)
            result.roots.emplace_back(x);
    }
    return result;
}

std::vector<OrderParameterPoint> seed_lattice(std::size_t N, double lo,
                                              double hi, std::size_t per_axis) {
    if (N == 0 || per_axis == 0)
        throw Error("seed_lattice: empty lattice");
    std::vector<OrderParameterPoint> out;
    std::vector<std::size_t> idx(N, 0);
    const std::size_t total = [&] {
        std::size_t t = 1;
        for (std::size_t d = 0; d < N; ++d)
            t *= per_axis;
        return t;
    }();
    out.reserve(total);
    for (std::size_t c = 0; c < total; ++c) {
        Vec v(N);
        for (std::size_t d = 0; d < N; ++d)
            v[d] = per_axis == 1
                       ? 0.5 * (lo + hi)
                       : lo + (hi - lo) * double(idx[d]) / double(per_axis - 1);
        out.emplace_back(std::move(v));
        for (std::size_t d = 0; d < N; ++d) {
            if (++idx[d] < per_axis)
                break;
            idx[d] = 0;
        }
    }
    return out;
}

namespace {

ThermoCoordinates interp_coords(const ThermoCoordinates& a,
                                const ThermoCoordinates& b, double f) {
    ThermoCoordinates c;
    c.T = a.T + f * (b.T - a.T);
    c.tau.resize(a.tau.size());
    for (std::size_t i = 0; i < a.tau.size(); ++i)
        c.tau[i] = a.tau[i] + f * (b.tau[i] - a.tau[i]);
    return c;
}

double coords_dist(const ThermoCoordinates& a, const ThermoCoordinates& b) {
    double s = (a.T - b.T) * (a.T - b.T);
    for (std::size_t i = 0; i < a.tau.size(); ++i)
        s += (a.tau[i] - b.tau[i]) * (a.tau[i] - b.tau[i]);
    return std::sqrt(s);
}

// March one path leg with adaptive substeps and a secant predictor.
// Returns false when the minimum step fails (fold of the state surface).
struct Marcher {
    const PhaseSystem& sys;
    const NewtonOptions& newton;
    int max_bisections;
    double max_step;

    ThermoCoordinates coords_cur;
    Vec theta_cur;
    ThermoCoordinates coords_prev = {};
    Vec theta_prev = {};
    bool has_prev = false;
    double last_residual = 0.0;

    bool advance_to(const ThermoCoordinates& target) {
        double f = 0.0;
        double step = max_step;
        const ThermoCoordinates start = coords_cur;
        const double min_step = std::ldexp(1.0, -max_bisections);
        while (f < 1.0) {
            const double ftry = std::min(1.0, f + step);
            const ThermoCoordinates ctry = interp_coords(start, target, ftry);
            Vec seed = theta_cur;
            if (has_prev) {
                const double d_prev = coords_dist(coords_prev, coords_cur);
                const double d_next = coords_dist(coords_cur, ctry);
                if (d_prev > 0.0) {
                    const double g = d_next / d_prev;
                    for (std::size_t l = 0; l < seed.size(); ++l)
                        seed[l] += g * (theta_cur[l] - theta_prev[l]);
                }
            }
            NewtonOutcome out = newton_solve(sys, ctry, seed, newton);
            if (!out.converged && seed != theta_cur)
                out = newton_solve(sys, ctry, theta_cur, newton);
            if (out.converged) {
                coords_prev = coords_cur;
                theta_prev = theta_cur;
                has_prev = true;
                coords_cur = ctry;
                theta_cur = out.x;
                last_residual = out.residual_norm;
                f = ftry;
                step = std::min(max_step, 2.0 * step);
            } else {
                step *= 0.5;
                if (step < min_step)
                    return false;
            }
        }
        return true;
    }
};

} // namespace

SolutionBranch sweep(const PhaseSystem& sys,
                     const std::vector<ThermoCoordinates>& path,
                     const OrderParameterPoint& initial,
                     const SweepOptions& opts) {
    if (path.empty())
        throw Error("sweep: path must be nonempty");
    SolutionBranch branch;
    branch.analytic_jacobian =
        sys.speeds.analytic() && sys.symmetry.analytic();
    const Vec r0 = state_residual(sys, initial, path.front());
    const double rn0 = norm_inf(r0);
    if (rn0 > 10.0 * opts.newton.tol) {
        std::ostringstream os;
        os << "sweep: initial point " << initial.str()
           << " is not a root at the path start (|r| = " << rn0 << ")";
        throw BadSeedError(os.str());
    }
    branch.points.push_back({path.front(), initial, rn0});

    Marcher m{sys,          opts.newton, opts.max_bisections, opts.max_step,
              path.front(), initial.values()};
    for (std::size_t leg = 1; leg < path.size(); ++leg) {
        if (!m.advance_to(path[leg])) {
            branch.turning_point = true;
            break;
        }
        branch.points.push_back({path[leg], OrderParameterPoint(m.theta_cur),
                                 m.last_residual});
    }
    return branch;
}

SolvedGrid solve_grid(const PhaseSystem& sys, std::size_t flow, const Vec& Ts,
                      const Vec& taus, const ThermoCoordinates& base,
                      const OrderParameterPoint& corner_seed, double tol) {
    if (flow == 0 || flow > sys.flow_count())
        throw Error("solve_grid: flow index out of range");
    if (Ts.size() < 2 || taus.size() < 2)
        throw Error("solve_grid: grid needs at least 2 nodes per axis");
    SolvedGrid grid;
    grid.flow = flow;
    grid.T = Ts;
    grid.tau = taus;
    grid.base = base;
    grid.theta.assign(Ts.size(), {});

    auto coords_at = [&](double T, double tau) {
        ThermoCoordinates c = base;
        c.T = T;
        c.tau.at(flow - 1) = tau;
        return c;
    };

    NewtonOptions opts;
    opts.tol = tol;
    NewtonOutcome corner =
        newton_solve(sys, coords_at(Ts[0], taus[0]), corner_seed.values(), opts);
    if (!corner.converged)
        throw Error("solve_grid: corner solve failed (" + corner.reason + ")");

    // first column by continuation in T, then every row in tau
    std::vector<Vec> column(Ts.size());
    column[0] = corner.x;
    Marcher cm{sys, opts, 24, 1.0, coords_at(Ts[0], taus[0]), corner.x};
    for (std::size_t a = 1; a < Ts.size(); ++a) {
        if (!cm.advance_to(coords_at(Ts[a], taus[0])))
            throw Error("solve_grid: continuation in T failed at row " +
                        std::to_string(a));
        column[a] = cm.theta_cur;
    }
    for (std::size_t a = 0; a < Ts.size(); ++a) {
        grid.theta[a].reserve(taus.size());
        grid.theta[a].emplace_back(column[a]);
        Marcher rm{sys, opts, 24, 1.0, coords_at(Ts[a], taus[0]), column[a]};
        for (std::size_t b = 1; b < taus.size(); ++b) {
            if (!rm.advance_to(coords_at(Ts[a], taus[b])))
                throw Error("solve_grid: continuation in tau failed at node (" +
                            std::to_string(a) + ", " + std::to_string(b) + ")");
            grid.theta[a].emplace_back(rm.theta_cur);
        }
    }
    return grid;
}

PdeReport pde_check(const PhaseSystem& sys, const SolvedGrid& grid,
                    std::size_t flow) {
    if (flow != grid.flow)
        throw Error("pde_check: grid was solved for a different flow");
    const std::size_t nT = grid.T.size();
    const std::size_t nJ = grid.tau.size();
    const std::size_t n = sys.phases();
    if (nT < 5 || nJ < 5)
        throw Error("pde_check: grid too coarse for the h and 2h stencils");

    // branch-jump scan on the fine spacing
    double span = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double lo = grid.theta[0][0][k], hi = lo;
        for (std::size_t a = 0; a < nT; ++a)
            for (std::size_t b = 0; b < nJ; ++b) {
                lo = std::min(lo, grid.theta[a][b][k]);
                hi = std::max(hi, grid.theta[a][b][k]);
            }
        span = std::max(span, hi - lo);
    }
    const double jump_tol = 0.25 * span + 1e-9;
    for (std::size_t a = 0; a < nT; ++a)
        for (std::size_t b = 0; b + 1 < nJ; ++b)
            for (std::size_t k = 0; k < n; ++k)
                if (std::abs(grid.theta[a][b + 1][k] - grid.theta[a][b][k]) >
                    jump_tol)
                    throw MixedBranchError(
                        "pde_check: branch jump along tau at node (" +
                        std::to_string(a) + ", " + std::to_string(b) + ")");
    for (std::size_t b = 0; b < nJ; ++b)
        for (std::size_t a = 0; a + 1 < nT; ++a)
            for (std::size_t k = 0; k < n; ++k)
                if (std::abs(grid.theta[a + 1][b][k] - grid.theta[a][b][k]) >
                    jump_tol)
                    throw MixedBranchError(
                        "pde_check: branch jump along T at node (" +
                        std::to_string(a) + ", " + std::to_string(b) + ")");

    const double hT = grid.T[1] - grid.T[0];
    const double hJ = grid.tau[1] - grid.tau[0];
    auto residual_at_stride = [&](std::size_t s) {
        double worst = 0.0;
        for (std::size_t a = s; a + s < nT; ++a)
            for (std::size_t b = s; b + s < nJ; ++b) {
                const OrderParameterPoint& here = grid.theta[a][b];
                for (std::size_t k = 0; k < n; ++k) {
                    const double dT = (grid.theta[a + s][b][k] -
                                       grid.theta[a - s][b][k]) /
                                      (2.0 * double(s) * hT);
                    const double dJ = (grid.theta[a][b + s][k] -
                                       grid.theta[a][b - s][k]) /
                                      (2.0 * double(s) * hJ);
                    worst = std::max(
                        worst, std::abs(dJ - sys.speeds.speed(flow, k, here) *
                                                 dT));
                }
            }
        return worst;
    };

    PdeReport rep;
    rep.max_residual = residual_at_stride(1);
    rep.coarse_residual = residual_at_stride(2);
    const double floor = 1e-12 * (1.0 + span);
    rep.order = (rep.max_residual > floor && rep.coarse_residual > floor)
                    ? std::log2(rep.coarse_residual / rep.max_residual)
                    : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

} // namespace phaseflow::hodo
