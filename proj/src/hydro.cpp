// hydro.cpp

#include "phaseflow/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

namespace phaseflow::hydro {

const ScalarField& SpeedFamily::mu(std::size_t flow, std::size_t k) const {
    if (flow >= flows.size())
        throw Error("SpeedFamily: flow index out of range");
    if (k >= phases)
        throw Error("SpeedFamily: component out of range");
    return flows[flow][k];
}

double SpeedFamily::speed(std::size_t flow, std::size_t k,
                          const OrderParameterPoint& p) const {
    return mu(flow, k).eval(p);
}

double SpeedFamily::dspeed(std::size_t flow, std::size_t k, std::size_t l,
                           const OrderParameterPoint& p) const {
    return mu(flow, k).partial(p, l);
}

bool SpeedFamily::analytic() const {
    for (const auto& row : flows)
        for (const auto& f : row)
            if (!f.grad)
                return false;
    return true;
}

double SymmetryField::value(std::size_t k, const OrderParameterPoint& p) const {
    return lambda.at(k).eval(p);
}

double SymmetryField::dvalue(std::size_t k, std::size_t l,
                             const OrderParameterPoint& p) const {
    return lambda.at(k).partial(p, l);
}

bool SymmetryField::analytic() const {
    for (const auto& f : lambda)
        if (!f.grad)
            return false;
    return true;
}

namespace {

void require_distinct(std::size_t a, std::size_t b, const char* who) {
    if (a == b)
        throw Error(std::string(who) + ": indices must be distinct");
}

double speed_gap_or_throw(double mu_other, double mu_k, double scale,
                          const char* who) {
    const double gap = mu_other - mu_k;
    if (std::abs(gap) <= kPoleEps * scale)
        throw PoleError(std::string(who) + ": coincident characteristic speeds");
    return gap;
}

} // namespace

double semi_hamiltonian_residual(const SpeedFamily& fam, std::size_t flow,
                                 const OrderParameterPoint& p, std::size_t k,
                                 std::size_t l, std::size_t s) {
    if (fam.phases < 3)
        throw VacuousConditionError(
            "semi_hamiltonian_residual: needs at least three phases");
    if (k == l || k == s || l == s)
        throw Error("semi_hamiltonian_residual: indices must be pairwise "
                    "distinct");
    const double mu_k = fam.speed(flow, k, p);
    const double mu_l = fam.speed(flow, l, p);
    const double mu_s = fam.speed(flow, s, p);
    const double scale =
        std::max({1.0, std::abs(mu_k), std::abs(mu_l), std::abs(mu_s)});
    speed_gap_or_throw(mu_l, mu_k, scale, "semi_hamiltonian_residual");
    speed_gap_or_throw(mu_s, mu_k, scale, "semi_hamiltonian_residual");

    // d_b( d_a mu^k / (mu^a - mu^k) ) via the quotient rule, with all
    // derivatives routed through ScalarField (analytic where available).
    auto term = [&](std::size_t a, double mu_a, std::size_t b) {
        const double v = mu_a - mu_k;
        const double u = fam.dspeed(flow, k, a, p);
        const double du = fam.mu(flow, k).partial2(p, a, b);
        const double dv = fam.dspeed(flow, a, b, p) - fam.dspeed(flow, k, b, p);
        return (du * v - u * dv) / (v * v);
    };
    return term(l, mu_l, s) - term(s, mu_s, l);
}

double symmetry_residual(const SpeedFamily& fam, std::size_t flow,
                         const SymmetryField& sym, const OrderParameterPoint& p,
                         std::size_t k, std::size_t l) {
    require_distinct(k, l, "symmetry_residual");
    const double mu_k = fam.speed(flow, k, p);
    const double mu_l = fam.speed(flow, l, p);
    const double scale = std::max({1.0, std::abs(mu_k), std::abs(mu_l)});
    const double gap =
        speed_gap_or_throw(mu_l, mu_k, scale, "symmetry_residual");
    return sym.dvalue(k, l, p) * gap -
           fam.dspeed(flow, k, l, p) * (sym.value(l, p) - sym.value(k, p));
}

double conservation_residual(const SpeedFamily& fam, std::size_t flow,
                             const ScalarField& density,
                             const OrderParameterPoint& p, std::size_t i,
                             std::size_t j) {
    require_distinct(i, j, "conservation_residual");
    const double mu_i = fam.speed(flow, i, p);
    const double mu_j = fam.speed(flow, j, p);
    return (mu_i - mu_j) * density.partial2(p, i, j) -
           fam.dspeed(flow, j, i, p) * density.partial(p, j) +
           fam.dspeed(flow, i, j, p) * density.partial(p, i);
}

double lax_speed(const ScalarField& entropy, const ScalarField& state_function,
                 const OrderParameterPoint& p, std::size_t k) {
    const double ds = entropy.partial(p, k);
    const double dl = state_function.partial(p, k);
    if (std::abs(ds) <= 1e-13 * std::max(1.0, std::abs(dl)))
        throw DegenerateEntropyError("lax_speed: entropy gradient vanishes at " +
                                     p.str());
    return -dl / ds;
}

DegeneracyReport is_linearly_degenerate(
    const SpeedFamily& fam, std::size_t flow,
    const std::vector<OrderParameterPoint>& samples, double tol) {
    if (samples.empty())
        throw Error("is_linearly_degenerate: sample set must be nonempty");
    DegeneracyReport rep;
    rep.max_violation = 0.0;
    for (const auto& p : samples) {
        for (std::size_t k = 0; k < fam.phases; ++k) {
            const double v = std::abs(fam.dspeed(flow, k, k, p));
            if (v > rep.max_violation) {
                rep.max_violation = v;
                rep.worst_component = k;
                rep.worst_point = p.values();
            }
        }
    }
    if (rep.worst_point.empty())
        rep.worst_point = samples.front().values();
    rep.degenerate = rep.max_violation <= tol;
    return rep;
}

namespace {

Vec complement(const OrderParameterPoint& p, std::size_t skip1,
               std::size_t skip2 = static_cast<std::size_t>(-1),
               std::size_t skip3 = static_cast<std::size_t>(-1)) {
    Vec out;
    out.reserve(p.size());
    for (std::size_t m = 0; m < p.size(); ++m)
        if (m != skip1 && m != skip2 && m != skip3)
            out.push_back(p[m]);
    return out;
}

} // namespace

double wnl_speed(const OrderParameterPoint& p, std::size_t k, std::size_t j) {
    const std::size_t n = p.size();
    if (k >= n)
        throw Error("wnl_speed: component out of range");
    if (j >= n)
        throw std::out_of_range("wnl_speed: order j must lie in [0, N-1]");
    return elementary_symmetric(complement(p, k), j);
}

SpeedFamily wnl_basis(std::size_t N) {
    if (N == 0)
        throw Error("wnl_basis: N must be >= 1");
    SpeedFamily fam;
    fam.phases = N;
    fam.flows.resize(N);
    fam.flows[0].assign(N, constant_field(1.0));
    for (std::size_t j = 1; j < N; ++j) {
        fam.flows[j].reserve(N);
        for (std::size_t k = 0; k < N; ++k) {
            ScalarField f;
            f.eval = [j, k](const OrderParameterPoint& p) {
                return wnl_speed(p, k, j);
            };
            f.grad = [j, k](const OrderParameterPoint& p) {
                Vec g(p.size(), 0.0);
                for (std::size_t l = 0; l < p.size(); ++l)
                    if (l != k)
                        g[l] = elementary_symmetric(complement(p, k, l), j - 1);
                return g;
            };
            f.hess = [j, k](const OrderParameterPoint& p) {
                SquareMatrix h(p.size());
                if (j >= 2)
                    for (std::size_t l = 0; l < p.size(); ++l)
                        for (std::size_t m = 0; m < p.size(); ++m)
                            if (l != m && l != k && m != k)
                                h(l, m) = elementary_symmetric(
                                    complement(p, k, l, m), j - 2);
                return h;
            };
            fam.flows[j].push_back(std::move(f));
        }
    }
    return fam;
}

namespace {

// Shared state of a symmetry built by quadrature over the weakly nonlinear
// basis. Evaluation recomputes the c_j integrals; a small thread-local memo
// keeps repeated component evaluations at the same point cheap.
struct GeneralSymmetry {
    std::size_t n;
    std::vector<std::function<double(double)>> phi;
    Vec base;
    double quad_tol;

    SquareMatrix basis_matrix(const OrderParameterPoint& p) const {
        SquareMatrix w(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                w(j, k) = wnl_speed(p, k, j);
        return w;
    }

    // W^(j+1,i)/W^(N,i) in the paper's 1-based labels: numerator is the
    // signed cofactor of row j, column i here.
    double ratio(std::size_t j, std::size_t i,
                 const OrderParameterPoint& p) const {
        const SquareMatrix w = basis_matrix(p);
        const double den = w.cofactor(n - 1, i);
        double scale = 1.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                scale = std::max(scale, std::abs(w(r, c)));
        if (std::abs(den) <= 1e-12 * std::pow(scale, double(n - 1)))
            throw CofactorSingularityError(
                "general symmetry: denominator cofactor W^(N," +
                std::to_string(i + 1) + ") vanishes at " + p.str());
        return w.cofactor(j, i) / den;
    }

    Vec coefficients(const OrderParameterPoint& p) const {
        Vec c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (p[i] == base[i])
                continue;
            for (std::size_t j = 0; j < n; ++j) {
                auto integrand = [&](double s) {
                    return ratio(j, i, p.with(i, s)) * phi[i](s);
                };
                c[j] += quadrature(integrand, base[i], p[i], quad_tol);
            }
        }
        return c;
    }

    Vec cached_coefficients(const OrderParameterPoint& p) const {
        thread_local const GeneralSymmetry* owner = nullptr;
        thread_local Vec point;
        thread_local Vec coeffs;
        if (owner != this || point != p.values()) {
            coeffs = coefficients(p);
            owner = this;
            point = p.values();
        }
        return coeffs;
    }

    double lambda(std::size_t k, const OrderParameterPoint& p) const {
        const Vec c = cached_coefficients(p);
        double out = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            out += c[j] * wnl_speed(p, k, j);
        return out;
    }

    // d_l lambda^k. The c_j integrands depend on their own variable only
    // (verified at build time), so d_l c_j collapses to the fundamental
    // theorem of calculus.
    Vec lambda_grad(std::size_t k, const OrderParameterPoint& p) const {
        const Vec c = cached_coefficients(p);
        Vec g(n, 0.0);
        for (std::size_t l = 0; l < n; ++l) {
            double acc = 0.0;
            const double phi_l = phi[l](p[l]);
            for (std::size_t j = 0; j < n; ++j) {
                acc += ratio(j, l, p) * phi_l * wnl_speed(p, k, j);
                if (l != k && j >= 1)
                    acc += c[j] *
                           elementary_symmetric(complement(p, k, l), j - 1);
            }
            g[l] = acc;
        }
        return g;
    }
};

std::vector<OrderParameterPoint> verification_samples(std::size_t n,
                                                      const Vec& base,
                                                      int count,
                                                      unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(0.4, 1.9);
    std::vector<OrderParameterPoint> out;
    for (int m = 0; m < count; ++m) {
        for (int attempt = 0; attempt < 256; ++attempt) {
            Vec v(n);
            for (std::size_t d = 0; d < n; ++d)
                v[d] = base[d] + offset(rng);
            double scale = 1.0;
            for (double x : v)
                scale = std::max(scale, std::abs(x));
            bool distinct = true;
            for (std::size_t a = 0; a < n && distinct; ++a)
                for (std::size_t b = a + 1; b < n; ++b)
                    if (std::abs(v[a] - v[b]) <= 0.05 * scale) {
                        distinct = false;
                        break;
                    }
            if (distinct) {
                out.emplace_back(std::move(v));
                break;
            }
        }
    }
    if (out.empty())
        throw Error("general symmetry: could not sample verification points");
    return out;
}

} // namespace

SymmetryField build_general_symmetry(
    std::size_t N, std::vector<std::function<double(double)>> phi,
    const OrderParameterPoint& base, const SymmetryBuildOptions& opts) {
    if (N == 0)
        throw Error("build_general_symmetry: N must be >= 1");
    if (phi.size() != N)
        throw Error("build_general_symmetry: need one phi per phase");
    if (base.size() != N)
        throw Error("build_general_symmetry: base point has wrong dimension");

    auto core = std::make_shared<GeneralSymmetry>();
    core->n = N;
    core->phi = std::move(phi);
    core->base = base.values();
    core->quad_tol = opts.quad_tol;

    const auto samples =
        verification_samples(N, core->base, opts.verify_samples, opts.seed);

    // (a) each cofactor ratio must be a function of its own variable only,
    // otherwise the axis-parallel quadrature would be path dependent.
    for (const auto& p : samples) {
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                for (std::size_t m = 0; m < N; ++m) {
                    if (m == i)
                        continue;
                    const double h = 1e-5 * p.pole_scale();
                    const double d =
                        (core->ratio(j, i, p.with(m, p[m] + h)) -
                         core->ratio(j, i, p.with(m, p[m] - h))) /
                        (2.0 * h);
                    if (std::abs(d) > opts.ratio_tol) {
                        std::ostringstream os;
                        os << "general symmetry: integrand W^(" << (j + 1)
                           << "," << (i + 1) << ")/W^(" << N << "," << (i + 1)
                           << ") depends on theta^" << (m + 1) << " (slope "
                           << d << ") at " << p.str();
                        throw PathDependenceError(os.str());
                    }
                }
            }
        }
    }

    SymmetryField sym;
    sym.lambda.reserve(N);
    for (std::size_t k = 0; k < N; ++k) {
        ScalarField f;
        f.eval = [core, k](const OrderParameterPoint& p) {
            return core->lambda(k, p);
        };
        f.grad = [core, k](const OrderParameterPoint& p) {
            return core->lambda_grad(k, p);
        };
        f.fd_step = 1e-4; // quadrature noise floor if FD is forced
        sym.lambda.push_back(std::move(f));
    }

    // (b) the construction must commute with the basis flow.
    if (N >= 2) {
        const SpeedFamily basis = wnl_basis(N);
        double worst = 0.0;
        for (const auto& p : samples)
            for (std::size_t k = 0; k < N; ++k)
                for (std::size_t l = 0; l < N; ++l)
                    if (k != l)
                        worst = std::max(
                            worst, std::abs(symmetry_residual(basis, 1, sym, p,
                                                              k, l)));
        if (worst > opts.residual_tol)
            throw SymmetryMismatchError(
                "general symmetry: commutation residual " +
                std::to_string(worst) + " exceeds tolerance");
    }
    return sym;
}

} // namespace phaseflow::hydro
