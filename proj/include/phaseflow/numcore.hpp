// numcore.hpp
//
// Foundation types and numerics used by every other module: order-parameter
// points, scalar fields with optional analytic derivatives, small dense
// matrices with cofactors, finite differences, and adaptive quadrature.
#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "phaseflow/errors.hpp"

namespace phaseflow {

using Vec = std::vector<double>;

/// Relative guard for divisions by theta^i - theta^j and mu^l - mu^k.
inline constexpr double kPoleEps = 1e-9;

/// Point in order-parameter space, theta^1..theta^N. Immutable after
/// construction; entries must be finite and N >= 1.
class OrderParameterPoint {
public:
    OrderParameterPoint(std::initializer_list<double> theta);
    explicit OrderParameterPoint(Vec theta);

    std::size_t size() const { return theta_.size(); }
    double operator[](std::size_t k) const { return theta_[k]; }
    const Vec& values() const { return theta_; }

    /// Copy of this point with coordinate k replaced.
    OrderParameterPoint with(std::size_t k, double value) const;

    double max_abs() const;
    /// max(1, max|theta|): the scale the pole guard is relative to.
    double pole_scale() const;

    std::string str() const;

    friend bool operator==(const OrderParameterPoint& a,
                           const OrderParameterPoint& b) {
        return a.theta_ == b.theta_;
    }

private:
    Vec theta_;
};

class SquareMatrix;

/// Evaluatable real function of an OrderParameterPoint. Analytic gradient
/// and Hessian are optional; finite differences are substituted when absent.
struct ScalarField {
    std::function<double(const OrderParameterPoint&)> eval;
    std::function<Vec(const OrderParameterPoint&)> grad;         // optional
    std::function<SquareMatrix(const OrderParameterPoint&)> hess; // optional

    /// Overrides the default finite-difference step scale (0 = default).
    /// Quadrature-backed fields set this larger to stay above the noise.
    double fd_step = 0.0;

    double operator()(const OrderParameterPoint& p) const { return eval(p); }

    /// d/dtheta^k, analytic when grad is present, else finite differences.
    double partial(const OrderParameterPoint& p, std::size_t k) const;
    /// d^2/dtheta^i dtheta^j with the same analytic-else-FD substitution.
    double partial2(const OrderParameterPoint& p, std::size_t i,
                    std::size_t j) const;
};

ScalarField constant_field(double value);

/// Dense N x N matrix with Laplace-expansion cofactors. N is small here
/// (phase counts), so exactness beats asymptotics: determinants expand
/// directly for N <= 4 and switch to pivoted LU above.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t n);
    static SquareMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const {
        return a_[i * n_ + j];
    }

    double det() const;
    /// Signed minor (-1)^(i+j) det(minor_matrix(i,j)); for a 1x1 matrix the
    /// empty minor determinant is 1.
    double cofactor(std::size_t i, std::size_t j) const;
    SquareMatrix minor_matrix(std::size_t row, std::size_t col) const;

    /// Solves A x = b by pivoted LU; returns false when singular.
    bool solve(const Vec& b, Vec& x) const;

private:
    std::size_t n_;
    Vec a_;
};

/// Default central-difference step, cbrt(eps) * max(1, |coordinate|).
double default_fd_step(double coordinate);

/// Central difference with one Richardson extrapolation level, error O(h^4).
/// h = 0 picks the default step. Throws DifferentiationError when the field
/// evaluates to a non-finite value near p.
double fd_partial(const ScalarField& f, const OrderParameterPoint& p,
                  std::size_t k, double h = 0.0);

/// Second partial by central differences (plain O(h^2) stencils).
double fd_second(const ScalarField& f, const OrderParameterPoint& p,
                 std::size_t i, std::size_t j, double h = 0.0);

/// Adaptive Gauss-Legendre quadrature of g over [a, b] with absolute
/// tolerance tol. Throws QuadratureError past the subdivision budget.
double quadrature(const std::function<double(double)>& g, double a, double b,
                  double tol);

/// Elementary symmetric polynomial e_j of the given values (e_0 = 1),
/// evaluated by the stable ascending recurrence.
double elementary_symmetric(const Vec& values, std::size_t j);

/// e_0..e_jmax in one sweep.
Vec elementary_symmetric_all(const Vec& values, std::size_t jmax);

} // namespace phaseflow
