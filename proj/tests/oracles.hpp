// oracles.hpp
//
// Test-only oracles, kept independent of the library code paths they check:
// plain central differences (no Richardson), dense grid-bisection root
// scans, and deterministic random sampling helpers.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "phaseflow/numcore.hpp"

namespace oracles {

using phaseflow::Vec;

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// Random point with pairwise-distinct coordinates (gap > min_gap).
inline Vec distinct_point(std::mt19937_64& g, std::size_t n, double lo,
                          double hi, double min_gap) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Vec v(n);
        for (auto& x : v)
            x = uniform(g, lo, hi);
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (std::abs(v[a] - v[b]) <= min_gap) {
                    ok = false;
                    break;
                }
        if (ok)
            return v;
    }
    throw std::runtime_error("distinct_point: sampling failed");
}

/// Plain central difference on a Vec->double function; deliberately simpler
/// than the library's Richardson-extrapolated version.
inline double fd(const std::function<double(const Vec&)>& f, Vec x,
                 std::size_t k, double h = 1e-6) {
    const double x0 = x[k];
    x[k] = x0 + h;
    const double fp = f(x);
    x[k] = x0 - h;
    const double fm = f(x);
    x[k] = x0;
    return (fp - fm) / (2.0 * h);
}

/// Plain mixed second difference.
inline double fd2(const std::function<double(const Vec&)>& f, Vec x,
                  std::size_t i, std::size_t j, double h = 1e-4) {
    if (i == j) {
        const double c = f(x);
        const double xi = x[i];
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        return (fp - 2.0 * c + fm) / (h * h);
    }
    auto at = [&](double di, double dj) {
        Vec y = x;
        y[i] += di;
        y[j] += dj;
        return f(y);
    };
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
}

/// All sign-change roots of g on [lo, hi] by dense scan plus bisection.
inline Vec scan_roots_1d(const std::function<double(double)>& g, double lo,
                         double hi, int cells = 20000) {
    Vec roots;
    double xp = lo, gp = g(lo);
    for (int i = 1; i <= cells; ++i) {
        const double x = lo + (hi - lo) * double(i) / cells;
        const double gx = g(x);
        if (gp == 0.0)
            roots.push_back(xp);
        else if (gp * gx < 0.0) {
            double a = xp, b = x, ga = gp;
            for (int it = 0; it < 100; ++it) {
                const double m = 0.5 * (a + b);
                const double gm = g(m);
                if (ga * gm <= 0.0)
                    b = m;
                else {
                    a = m;
                    ga = gm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        xp = x;
        gp = gx;
    }
    return roots;
}

/// Transversal roots of a 2-D map on a box by grid scan: cells whose corner
/// signs change in both components are refined by repeated subdivision.
inline std::vector<Vec> grid_bisect_2d(
    const std::function<Vec(const Vec&)>& f, double lo, double hi,
    int cells = 220, int refinements = 40) {
    auto corner_signs_change = [&](double x0, double y0, double w) {
        bool pos1 = false, neg1 = false, pos2 = false, neg2 = false;
        for (int cx = 0; cx <= 1; ++cx)
            for (int cy = 0; cy <= 1; ++cy) {
                const Vec r = f({x0 + cx * w, y0 + cy * w});
                (r[0] >= 0 ? pos1 : neg1) = true;
                (r[1] >= 0 ? pos2 : neg2) = true;
            }
        return pos1 && neg1 && pos2 && neg2;
    };
    std::vector<Vec> roots;
    const double w = (hi - lo) / cells;
    for (int ix = 0; ix < cells; ++ix) {
        for (int iy = 0; iy < cells; ++iy) {
            double x0 = lo + ix * w, y0 = lo + iy * w, side = w;
            if (!corner_signs_change(x0, y0, side))
                continue;
            for (int r = 0; r < refinements; ++r) {
                const double half = side / 2.0;
                bool found = false;
                for (int cx = 0; cx <= 1 && !found; ++cx)
                    for (int cy = 0; cy <= 1 && !found; ++cy)
                        if (corner_signs_change(x0 + cx * half, y0 + cy * half,
                                                half)) {
                            x0 += cx * half;
                            y0 += cy * half;
                            side = half;
                            found = true;
                        }
                if (!found)
                    break; // root sits on a cell edge; centre is good enough
            }
            const Vec cand{x0 + side / 2.0, y0 + side / 2.0};
            bool fresh = true;
            for (const auto& kept : roots)
                if (std::abs(kept[0] - cand[0]) < 1e-4 &&
                    std::abs(kept[1] - cand[1]) < 1e-4)
                    fresh = false;
            if (fresh)
                roots.push_back(cand);
        }
    }
    return roots;
}

} // namespace oracles
