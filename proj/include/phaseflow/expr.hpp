// expr.hpp
//
// Minimal arithmetic expressions for user-supplied model functions:
// +, -, *, /, ^, parentheses, the variables th1..thN (order parameters)
// and x (single-variable functions), and the constants pi and e.
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "phaseflow/numcore.hpp"

namespace phaseflow::expr {

class Expr {
public:
    /// Parses text against a system with n_theta order parameters
    /// (th1..th<n_theta>). Throws ParseError with the offending position.
    static Expr parse(const std::string& text, std::size_t n_theta);

    double eval(const Vec& theta, double x = 0.0) const;
    double eval1(double x) const { return eval({}, x); }

    bool uses_x() const { return uses_x_; }
    std::size_t max_theta() const { return max_theta_; } // highest thK used
    const std::string& text() const { return text_; }

private:
    struct Node {
        enum class Kind { Number, Theta, X, Add, Sub, Mul, Div, Pow, Neg };
        Kind kind;
        double value = 0.0;   // Number
        std::size_t index = 0; // Theta (0-based)
        int a = -1, b = -1;   // children
    };

    double eval_node(int id, const Vec& theta, double x) const;

    std::vector<Node> nodes_;
    int root_ = -1;
    bool uses_x_ = false;
    std::size_t max_theta_ = 0;
    std::string text_;

    friend class Parser;
};

/// FD-backed ScalarField over N order parameters.
ScalarField field_of(const Expr& e, std::size_t N);

/// Single-variable function of x.
std::function<double(double)> function_of(const Expr& e);

} // namespace phaseflow::expr
