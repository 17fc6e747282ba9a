// numcore.cpp

#include "phaseflow/numcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace phaseflow {

namespace {

void check_entries(const Vec& theta) {
    if (theta.empty())
        throw Error("OrderParameterPoint needs at least one component");
    for (double v : theta)
        if (!std::isfinite(v))
            throw Error("OrderParameterPoint entries must be finite");
}

} // namespace

OrderParameterPoint::OrderParameterPoint(std::initializer_list<double> theta)
    : theta_(theta) {
    check_entries(theta_);
}

OrderParameterPoint::OrderParameterPoint(Vec theta) : theta_(std::move(theta)) {
    check_entries(theta_);
}

OrderParameterPoint OrderParameterPoint::with(std::size_t k,
                                              double value) const {
    Vec v = theta_;
    v.at(k) = value;
    return OrderParameterPoint(std::move(v));
}

double OrderParameterPoint::max_abs() const {
    double m = 0.0;
    for (double v : theta_)
        m = std::max(m, std::abs(v));
    return m;
}

double OrderParameterPoint::pole_scale() const {
    return std::max(1.0, max_abs());
}

std::string OrderParameterPoint::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < theta_.size(); ++k)
        os << (k ? ", " : "") << theta_[k];
    os << ")";
    return os.str();
}

double ScalarField::partial(const OrderParameterPoint& p,
                            std::size_t k) const {
    if (grad)
        return grad(p)[k];
    return fd_partial(*this, p, k, fd_step > 0.0 ? fd_step : 0.0);
}

double ScalarField::partial2(const OrderParameterPoint& p, std::size_t i,
                             std::size_t j) const {
    if (hess)
        return hess(p)(i, j);
    if (grad) {
        // Richardson-extrapolated central difference of the analytic
        // gradient component.
        const double h = fd_step > 0.0 ? fd_step : default_fd_step(p[i]);
        auto gj = [&](double x) { return grad(p.with(i, x))[j]; };
        const double x = p[i];
        auto central = [&](double step) {
            return (gj(x + step) - gj(x - step)) / (2.0 * step);
        };
        const double d1 = central(h);
        const double d2 = central(h / 2.0);
        const double out = (4.0 * d2 - d1) / 3.0;
        if (!std::isfinite(out))
            throw DifferentiationError("non-finite second partial at " +
                                       p.str());
        return out;
    }
    return fd_second(*this, p, i, j, fd_step > 0.0 ? fd_step : 0.0);
}

ScalarField constant_field(double value) {
    ScalarField f;
    f.eval = [value](const OrderParameterPoint&) { return value; };
    f.grad = [](const OrderParameterPoint& p) {
        return Vec(p.size(), 0.0);
    };
    f.hess = [](const OrderParameterPoint& p) {
        return SquareMatrix(p.size());
    };
    return f;
}

SquareMatrix::SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
    if (n == 0)
        throw Error("SquareMatrix needs size >= 1");
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::minor_matrix(std::size_t row,
                                        std::size_t col) const {
    if (row >= n_ || col >= n_)
        throw Error("minor index out of range");
    if (n_ == 1)
        throw Error("1x1 matrix has no minor matrix");
    SquareMatrix m(n_ - 1);
    for (std::size_t i = 0, mi = 0; i < n_; ++i) {
        if (i == row)
            continue;
        for (std::size_t j = 0, mj = 0; j < n_; ++j) {
            if (j == col)
                continue;
            m(mi, mj) = (*this)(i, j);
            ++mj;
        }
        ++mi;
    }
    return m;
}

namespace {

double det_direct(const SquareMatrix& m) {
    const std::size_t n = m.size();
    if (n == 1)
        return m(0, 0);
    if (n == 2)
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double sum = 0.0;
    double sign = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j) != 0.0)
            sum += sign * m(0, j) * det_direct(m.minor_matrix(0, j));
        sign = -sign;
    }
    return sum;
}

// LU with partial pivoting; returns 0 for singular input.
double det_lu(const SquareMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = m(i, j);
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c]))
                piv = r;
        if (a[piv * n + c] == 0.0)
            return 0.0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a[piv * n + j], a[c * n + j]);
            det = -det;
        }
        det *= a[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t j = c; j < n; ++j)
                a[r * n + j] -= f * a[c * n + j];
        }
    }
    return det;
}

} // namespace

double SquareMatrix::det() const {
    return n_ <= 4 ? det_direct(*this) : det_lu(*this);
}

double SquareMatrix::cofactor(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_)
        throw Error("cofactor index out of range");
    const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
    if (n_ == 1)
        return sign; // empty minor has determinant 1
    return sign * minor_matrix(i, j).det();
}

bool SquareMatrix::solve(const Vec& b, Vec& x) const {
    const std::size_t n = n_;
    if (b.size() != n)
        throw Error("solve: dimension mismatch");
    std::vector<double> a(a_);
    x = b;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c]))
                piv = r;
        double scale = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            scale = std::max(scale, std::abs(a[piv * n + j]));
        if (std::abs(a[piv * n + c]) <= 1e-14 * std::max(1.0, scale))
            return false;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a[piv * n + j], a[c * n + j]);
            std::swap(x[piv], x[c]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t j = c; j < n; ++j)
                a[r * n + j] -= f * a[c * n + j];
            x[r] -= f * x[c];
        }
    }
    for (std::size_t ri = n; ri-- > 0;) {
        for (std::size_t j = ri + 1; j < n; ++j)
            x[ri] -= a[ri * n + j] * x[j];
        x[ri] /= a[ri * n + ri];
    }
    return true;
}

double default_fd_step(double coordinate) {
    static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
    return h0 * std::max(1.0, std::abs(coordinate));
}

namespace {

double eval_checked(const ScalarField& f, const OrderParameterPoint& p) {
    const double v = f.eval(p);
    if (!std::isfinite(v))
        throw DifferentiationError("field is non-finite at " + p.str());
    return v;
}

} // namespace

double fd_partial(const ScalarField& f, const OrderParameterPoint& p,
                  std::size_t k, double h) {
    if (k >= p.size())
        throw Error("fd_partial: component out of range");
    if (h <= 0.0)
        h = default_fd_step(p[k]);
    const double x = p[k];
    auto central = [&](double step) {
        return (eval_checked(f, p.with(k, x + step)) -
                eval_checked(f, p.with(k, x - step))) /
               (2.0 * step);
    };
    // One Richardson level on top of the O(h^2) central difference.
    const double d1 = central(h);
    const double d2 = central(h / 2.0);
    const double out = (4.0 * d2 - d1) / 3.0;
    if (!std::isfinite(out))
        throw DifferentiationError("derivative non-finite at " + p.str());
    return out;
}

double fd_second(const ScalarField& f, const OrderParameterPoint& p,
                 std::size_t i, std::size_t j, double h) {
    if (i >= p.size() || j >= p.size())
        throw Error("fd_second: component out of range");
    static const double h0 =
        std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));
    const double hi = h > 0.0 ? h : h0 * std::max(1.0, std::abs(p[i]));
    const double hj = h > 0.0 ? h : h0 * std::max(1.0, std::abs(p[j]));
    double out;
    if (i == j) {
        const double c = eval_checked(f, p);
        const double fp = eval_checked(f, p.with(i, p[i] + hi));
        const double fm = eval_checked(f, p.with(i, p[i] - hi));
        out = (fp - 2.0 * c + fm) / (hi * hi);
    } else {
        const double pp =
            eval_checked(f, p.with(i, p[i] + hi).with(j, p[j] + hj));
        const double pm =
            eval_checked(f, p.with(i, p[i] + hi).with(j, p[j] - hj));
        const double mp =
            eval_checked(f, p.with(i, p[i] - hi).with(j, p[j] + hj));
        const double mm =
            eval_checked(f, p.with(i, p[i] - hi).with(j, p[j] - hj));
        out = (pp - pm - mp + mm) / (4.0 * hi * hj);
    }
    if (!std::isfinite(out))
        throw DifferentiationError("second derivative non-finite at " +
                                   p.str());
    return out;
}

namespace {

struct GaussRule {
    std::array<double, 10> x;
    std::array<double, 10> w;
};

// 10-point Gauss-Legendre rule on [-1, 1]; nodes by Newton iteration on
// P_10 so no tabulated constants are needed.
GaussRule make_gauss10() {
    GaussRule rule{};
    const int n = 10;
    for (int i = 0; i < n / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

double gauss10(const std::function<double(double)>& g, double a, double b) {
    static const GaussRule rule = make_gauss10();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 10; ++i)
        sum += rule.w[i] * g(mid + half * rule.x[i]);
    return half * sum;
}

struct QuadState {
    const std::function<double(double)>& g;
    long panels = 0;
};

double quad_rec(QuadState& st, double a, double b, double whole, double tol,
                int depth) {
    if (++st.panels > 200000)
        throw QuadratureError("quadrature: subdivision budget exhausted");
    const double mid = 0.5 * (a + b);
    const double left = gauss10(st.g, a, mid);
    const double right = gauss10(st.g, mid, b);
    const double err = std::abs(left + right - whole);
    if (err <= tol || depth >= 48) {
        if (depth >= 48 && err > tol)
            throw QuadratureError("quadrature: no convergence on [" +
                                  std::to_string(a) + ", " +
                                  std::to_string(b) + "]");
        return left + right;
    }
    return quad_rec(st, a, mid, left, 0.5 * tol, depth + 1) +
           quad_rec(st, mid, b, right, 0.5 * tol, depth + 1);
}

} // namespace

double quadrature(const std::function<double(double)>& g, double a, double b,
                  double tol) {
    if (tol <= 0.0)
        throw Error("quadrature: tolerance must be positive");
    if (a == b)
        return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    QuadState st{g, 0};
    const double whole = gauss10(g, a, b);
    const double out = quad_rec(st, a, b, whole, tol, 0);
    if (!std::isfinite(out))
        throw QuadratureError("quadrature: non-finite result");
    return sign * out;
}

double elementary_symmetric(const Vec& values, std::size_t j) {
    if (j > values.size())
        return 0.0;
    return elementary_symmetric_all(values, j)[j];
}

Vec elementary_symmetric_all(const Vec& values, std::size_t jmax) {
    Vec e(jmax + 1, 0.0);
    e[0] = 1.0;
    std::size_t count = 0;
    for (double v : values) {
        ++count;
        const std::size_t top = std::min(jmax, count);
        for (std::size_t j = top; j >= 1; --j)
            e[j] += v * e[j - 1];
    }
    return e;
}

} // namespace phaseflow
