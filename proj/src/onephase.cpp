// onephase.cpp

#include "phaseflow/onephase.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace phaseflow::onephase {

namespace {

int sign_of(double v) {
    return (v > 0.0) - (v < 0.0);
}

// Shared dense-scan + bisection root enumerator for scalar state equations.
std::vector<Root> scan_roots(const std::function<double(double)>& g, double lo,
                             double hi, std::size_t max_roots,
                             const ScanOptions& opts) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi))
        throw Error("root scan: bracket must be finite with lo < hi");
    const int cells = std::max(2, opts.cells);
    Vec x(cells + 1), gv(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        x[i] = lo + (hi - lo) * double(i) / double(cells);
        gv[i] = g(x[i]);
        if (!std::isfinite(gv[i]))
            throw Error("root scan: non-finite state function at " +
                        std::to_string(x[i]));
    }

    std::vector<Root> roots;
    std::vector<bool> consumed(cells + 1, false);
    // exact (to zero_eps) node hits first, so they are not double-counted
    for (int i = 0; i <= cells; ++i) {
        if (std::abs(gv[i]) > opts.zero_eps)
            continue;
        int prev = i - 1;
        while (prev >= 0 && std::abs(gv[prev]) <= opts.zero_eps)
            --prev;
        int next = i + 1;
        while (next <= cells && std::abs(gv[next]) <= opts.zero_eps)
            ++next;
        if (!roots.empty() &&
            std::abs(roots.back().value - x[i]) <=
                1.5 * (hi - lo) / double(cells))
            continue; // same flat zero stretch
        Root r;
        r.value = x[i];
        const int sp = prev >= 0 ? sign_of(gv[prev]) : 0;
        const int sn = next <= cells ? sign_of(gv[next]) : 0;
        r.tangent = (sp * sn >= 0); // no sign change across the dip
        r.at_edge = (i == 0 || i == cells);
        roots.push_back(r);
        consumed[std::max(0, i - 1)] = true;
        if (i < cells)
            consumed[i] = true;
    }
    for (int i = 0; i < cells; ++i) {
        if (consumed[i] || gv[i] * gv[i + 1] >= 0.0)
            continue;
        double a = x[i], b = x[i + 1];
        double ga = gv[i];
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (b - a <= opts.rel_tol * std::max({1.0, std::abs(a),
                                                  std::abs(b)}))
                break;
            const double gm = g(mid);
            if (gm == 0.0) {
                a = b = mid;
                break;
            }
            if (sign_of(ga) * sign_of(gm) < 0) {
                b = mid;
            } else {
                a = mid;
                ga = gm;
            }
        }
        Root r;
        r.value = 0.5 * (a + b);
        const double scale = std::max(1.0, std::abs(r.value));
        r.at_edge = std::abs(r.value - lo) <= 10.0 * opts.rel_tol * scale ||
                    std::abs(r.value - hi) <= 10.0 * opts.rel_tol * scale;
        roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end(),
              [](const Root& a, const Root& b) { return a.value < b.value; });
    if (roots.size() > max_roots)
        throw RootOverflowError("root scan: found " +
                                std::to_string(roots.size()) +
                                " roots, caller allowed " +
                                std::to_string(max_roots));
    return roots;
}

} // namespace

std::vector<Root> solve_onephase(const OnePhaseEOS& eos, double T, double tau,
                                 double lo, double hi, std::size_t max_roots,
                                 const ScanOptions& opts) {
    auto g = [&](double L) { return T - eos.alpha(L) * tau - eos.f(L); };
    return scan_roots(g, lo, hi, max_roots, opts);
}

OnePhaseEOS vdw_eos(const VdwParams& p) {
    // b = 0 (with a = 0) is the ideal-gas limit and is allowed
    if (!(p.n > 0.0) || !(p.R > 0.0) || p.a < 0.0 || p.b < 0.0)
        throw Error("vdw_eos: need n, R > 0 and a, b >= 0");
    const double nb = p.n * p.b;
    auto guard = [nb](double V) {
        if (V <= nb)
            throw DomainError("van der Waals: volume " + std::to_string(V) +
                              " is inside the covolume nb = " +
                              std::to_string(nb));
    };
    OnePhaseEOS eos;
    eos.lambda_label = "V";
    eos.tau_label = "P";
    eos.alpha = [p, nb, guard](double V) {
        guard(V);
        return (V - nb) / (p.n * p.R);
    };
    eos.f = [p, guard](double V) {
        guard(V);
        return (p.n * p.a / p.R) / V - (p.a * p.n * p.n * p.b / p.R) / (V * V);
    };
    // separable entropy S~(V) = nR log(V - nb), so alpha = 1/S~'
    eos.entropy = [p, nb, guard](double V) {
        guard(V);
        return p.n * p.R * std::log(V - nb);
    };
    return eos;
}

namespace {

// coth(z) - 1/z, the singular parts cancelled analytically. The Laurent
// series takes over below 1/8 where the direct difference loses digits.
double cothm1(double z) {
    const double az = std::abs(z);
    if (az < 0.125) {
        const double z2 = z * z;
        return z * (1.0 / 3.0 +
                    z2 * (-1.0 / 45.0 +
                          z2 * (2.0 / 945.0 +
                                z2 * (-1.0 / 4725.0 + z2 * (2.0 / 93555.0)))));
    }
    return 1.0 / std::tanh(z) - 1.0 / z;
}

void check_spin(double s) {
    if (!(s > 0.0) || !std::isfinite(s) ||
        std::abs(2.0 * s - std::round(2.0 * s)) > 1e-9)
        throw Error("spin must be a positive half-integer, got " +
                    std::to_string(s));
}

} // namespace

double brillouin(double s, double y) {
    check_spin(s);
    const double c1 = (2.0 * s + 1.0) / (2.0 * s);
    const double c2 = 1.0 / (2.0 * s);
    // B_s(y) = c1 coth(c1 y) - c2 coth(c2 y); the 1/y poles cancel exactly.
    return c1 * cothm1(c1 * y) - c2 * cothm1(c2 * y);
}

MagnetResult magnet_solve(const MagnetParams& p, double T, double H, double lo,
                          double hi, const ScanOptions& opts) {
    check_spin(p.s);
    if (!(p.M0 > 0.0) || !(p.mubar > 0.0) || !(p.kappa > 0.0) || p.lam < 0.0)
        throw Error("magnet_solve: need M0, mubar, kappa > 0 and lam >= 0");
    if (!(T > 0.0))
        throw Error("magnet_solve: temperature must be positive");
    MagnetResult result;
    const double limit = p.M0 * (1.0 - 1e-9);
    if (lo < -limit) {
        lo = -limit;
        result.clamped = true;
    }
    if (hi > limit) {
        hi = limit;
        result.clamped = true;
    }
    const double pref = p.mubar * p.s / (p.kappa * T);
    auto g = [&](double M) {
        return M - p.M0 * brillouin(p.s, pref * (H + p.lam * M));
    };
    result.roots = scan_roots(g, lo, hi,
                              std::numeric_limits<std::size_t>::max(), opts);
    return result;
}

double halfspin_residual(const MagnetParams& p, double T, double H, double M) {
    if (std::abs(2.0 * p.s - 1.0) > 1e-9)
        throw Error("halfspin_residual: defined for spin 1/2 only");
    if (std::abs(M) >= p.M0)
        throw DomainError("halfspin_residual: |M| must be below M0");
    return H - (2.0 * p.kappa / p.mubar) * std::atanh(M / p.M0) * T +
           p.lam * M;
}

FdReport hopf_residual(const OnePhaseEOS& eos, const SurfaceGrid& grid) {
    const std::size_t nT = grid.T.size();
    const std::size_t nJ = grid.tau.size();
    if (nT < 5 || nJ < 5)
        throw Error("hopf_residual: grid too coarse for the h and 2h stencils");
    if (grid.lambda.size() != nT)
        throw Error("hopf_residual: surface shape mismatch");
    double lo = grid.lambda[0][0], hi = lo;
    for (const auto& row : grid.lambda) {
        if (row.size() != nJ)
            throw Error("hopf_residual: surface shape mismatch");
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const double jump_tol = 0.25 * (hi - lo) + 1e-9;
    for (std::size_t a = 0; a < nT; ++a)
        for (std::size_t b = 0; b + 1 < nJ; ++b)
            if (std::abs(grid.lambda[a][b + 1] - grid.lambda[a][b]) > jump_tol)
                throw MixedBranchError("hopf_residual: branch jump along tau");
    for (std::size_t b = 0; b < nJ; ++b)
        for (std::size_t a = 0; a + 1 < nT; ++a)
            if (std::abs(grid.lambda[a + 1][b] - grid.lambda[a][b]) > jump_tol)
                throw MixedBranchError("hopf_residual: branch jump along T");

    const double hT = grid.T[1] - grid.T[0];
    const double hJ = grid.tau[1] - grid.tau[0];
    auto residual_at_stride = [&](std::size_t s) {
        double worst = 0.0;
        for (std::size_t a = s; a + s < nT; ++a)
            for (std::size_t b = s; b + s < nJ; ++b) {
                const double dT = (grid.lambda[a + s][b] -
                                   grid.lambda[a - s][b]) /
                                  (2.0 * double(s) * hT);
                const double dJ = (grid.lambda[a][b + s] -
                                   grid.lambda[a][b - s]) /
                                  (2.0 * double(s) * hJ);
                worst = std::max(
                    worst, std::abs(dJ + eos.alpha(grid.lambda[a][b]) * dT));
            }
        return worst;
    };
    FdReport rep;
    rep.max_residual = residual_at_stride(1);
    rep.coarse_residual = residual_at_stride(2);
    const double floor = 1e-12 * (1.0 + hi - lo);
    rep.order = (rep.max_residual > floor && rep.coarse_residual > floor)
                    ? std::log2(rep.coarse_residual / rep.max_residual)
                    : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

Pchip::Pchip(Vec x, Vec y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw Error("Pchip: need at least two matching samples");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i] < x_[i + 1]))
            throw Error("Pchip: abscissae must be strictly increasing");
    m_.assign(n, 0.0);
    if (n == 2) {
        m_[0] = m_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
        return;
    }
    Vec h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    // Fritsch-Carlson: weighted harmonic means inside, shape-limited
    // three-point formula at the ends.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0)
            m = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0))
            m = 3.0 * d0;
        return m;
    };
    m_[0] = endpoint(h[0], h[1], d[0], d[1]);
    m_[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

double Pchip::operator()(double x) const {
    const double span = x_.back() - x_.front();
    if (x < x_.front() - 1e-12 * span || x > x_.back() + 1e-12 * span)
        throw DomainError("Pchip: " + std::to_string(x) +
                          " is outside the table range [" +
                          std::to_string(x_.front()) + ", " +
                          std::to_string(x_.back()) + "]");
    x = std::clamp(x, x_.front(), x_.back());
    std::size_t i =
        std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y_[i] + (t3 - 2.0 * t2 + t) * h * m_[i] +
           (-2.0 * t3 + 3.0 * t2) * y_[i + 1] + (t3 - t2) * h * m_[i + 1];
}

IsothermTable::IsothermTable(double temperature, Vec lambdas, Vec taus)
    : T(temperature), lambda(std::move(lambdas)), tau(std::move(taus)) {
    if (!std::isfinite(T))
        throw Error("IsothermTable: temperature must be finite");
    if (lambda.size() < 2 || lambda.size() != tau.size())
        throw Error("IsothermTable: need at least two matching rows");
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!std::isfinite(lambda[i]) || !std::isfinite(tau[i]))
            throw Error("IsothermTable: entries must be finite");
        if (i + 1 < lambda.size() && !(lambda[i] < lambda[i + 1]))
            throw Error("IsothermTable: lambda must be strictly increasing");
    }
}

namespace {

double parse_double_strict(std::string_view text, int line_no) {
    // trim ASCII whitespace
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
    double out = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end)
        throw ParseError("isotherm csv: bad number '" + std::string(text) +
                         "' on line " + std::to_string(line_no));
    return out;
}

} // namespace

IsothermTable read_isotherm_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    bool have_T = false, have_header = false;
    double T = 0.0;
    Vec lambda, tau;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#') {
            const std::string prefix = "# T=";
            if (line.rfind(prefix, 0) != 0)
                throw ParseError("isotherm csv: unexpected comment on line " +
                                 std::to_string(line_no) +
                                 " (only '# T=<value>' is allowed)");
            if (have_T)
                throw ParseError("isotherm csv: duplicate '# T=' line " +
                                 std::to_string(line_no));
            T = parse_double_strict(
                std::string_view(line).substr(prefix.size()), line_no);
            have_T = true;
            continue;
        }
        if (!have_header) {
            if (line != "lambda,tau")
                throw ParseError("isotherm csv: expected header 'lambda,tau' "
                                 "on line " +
                                 std::to_string(line_no));
            have_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("isotherm csv: missing comma on line " +
                             std::to_string(line_no));
        lambda.push_back(parse_double_strict(
            std::string_view(line).substr(0, comma), line_no));
        tau.push_back(parse_double_strict(
            std::string_view(line).substr(comma + 1), line_no));
    }
    if (!have_T)
        throw ParseError("isotherm csv: missing '# T=<value>' line");
    if (!have_header)
        throw ParseError("isotherm csv: missing 'lambda,tau' header");
    try {
        return IsothermTable(T, std::move(lambda), std::move(tau));
    } catch (const Error& e) {
        throw ParseError(std::string("isotherm csv: ") + e.what());
    }
}

IsothermTable read_isotherm_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("isotherm csv: cannot open '" + path + "'");
    return read_isotherm_csv(in);
}

void write_isotherm_csv(std::ostream& out, const IsothermTable& table) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", table.T);
    out << "# T=" << buf << "\n" << "lambda,tau\n";
    for (std::size_t i = 0; i < table.lambda.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", table.lambda[i]);
        out << buf << ",";
        std::snprintf(buf, sizeof buf, "%.17g", table.tau[i]);
        out << buf << "\n";
    }
}

AlphaFTable reconstruct_alpha_f(const IsothermTable& iso1,
                                const IsothermTable& iso2, const Vec& grid) {
    const double tscale =
        std::max({1.0, std::abs(iso1.T), std::abs(iso2.T)});
    if (std::abs(iso1.T - iso2.T) <= 1e-12 * tscale)
        throw DegenerateIsothermsError(
            "reconstruct: the two isotherms share the temperature T = " +
            std::to_string(iso1.T));
    const Pchip tau1(iso1.lambda, iso1.tau);
    const Pchip tau2(iso2.lambda, iso2.tau);
    const double lo = std::max(tau1.lo(), tau2.lo());
    const double hi = std::min(tau1.hi(), tau2.hi());
    if (!(lo < hi))
        throw Error("reconstruct: isotherm Lambda ranges do not overlap");
    AlphaFTable out;
    for (double L : grid) {
        if (L < lo || L > hi)
            continue; // extrapolation forbidden: clip to the shared range
        const double t1 = tau1(L);
        const double t2 = tau2(L);
        if (std::abs(t1 - t2) <=
            1e-12 * std::max({1.0, std::abs(t1), std::abs(t2)}))
            throw SingularNodeError(
                "reconstruct: isotherms coincide at lambda = " +
                std::to_string(L));
        const double alpha = (iso1.T - iso2.T) / (t1 - t2);
        out.lambda.push_back(L);
        out.alpha.push_back(alpha);
        out.f.push_back(iso1.T - alpha * t1);
    }
    if (out.lambda.size() < 2)
        throw Error("reconstruct: fewer than two grid nodes inside the "
                    "shared Lambda range");
    return out;
}

OnePhaseEOS eos_from_table(const AlphaFTable& table) {
    const Pchip alpha(table.lambda, table.alpha);
    const Pchip f(table.lambda, table.f);
    OnePhaseEOS eos;
    eos.alpha = [alpha](double L) { return alpha(L); };
    eos.f = [f](double L) { return f(L); };
    return eos;
}

hodo::PhaseSystem as_phase_system(const OnePhaseEOS& eos) {
    hydro::SpeedFamily speeds;
    speeds.phases = 1;
    speeds.flows.resize(2);
    speeds.flows[0].assign(1, constant_field(1.0));
    ScalarField mu;
    auto alpha = eos.alpha;
    mu.eval = [alpha](const OrderParameterPoint& p) { return -alpha(p[0]); };
    speeds.flows[1].push_back(std::move(mu));
    hydro::SymmetryField sym;
    ScalarField lam;
    auto f = eos.f;
    lam.eval = [f](const OrderParameterPoint& p) { return f(p[0]); };
    sym.lambda.push_back(std::move(lam));
    return hodo::PhaseSystem(std::move(speeds), std::move(sym));
}

} // namespace phaseflow::onephase
