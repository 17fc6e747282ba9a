// expr.cpp

#include "phaseflow/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace phaseflow::expr {

class Parser {
public:
    Parser(const std::string& text, std::size_t n_theta, Expr& out)
        : text_(text), n_theta_(n_theta), out_(out) {}

    void run() {
        out_.root_ = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        if (out_.root_ < 0)
            fail("empty expression");
    }

private:
    const std::string& text_;
    std::size_t n_theta_;
    Expr& out_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression '" + text_ + "': " + what +
                         " at position " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    int add(Expr::Node n) {
        out_.nodes_.push_back(n);
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int binary(Expr::Node::Kind kind, int a, int b) {
        Expr::Node n;
        n.kind = kind;
        n.a = a;
        n.b = b;
        return add(n);
    }

    // expr := term (('+'|'-') term)*
    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = binary(Expr::Node::Kind::Add, lhs, parse_term());
            else if (eat('-'))
                lhs = binary(Expr::Node::Kind::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    // term := factor (('*'|'/') factor)*
    int parse_term() {
        int lhs = parse_factor();
        for (;;) {
            if (eat('*'))
                lhs = binary(Expr::Node::Kind::Mul, lhs, parse_factor());
            else if (eat('/'))
                lhs = binary(Expr::Node::Kind::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    // factor := ('+'|'-') factor | power; unary minus binds looser than ^
    int parse_factor() {
        if (eat('-')) {
            Expr::Node n;
            n.kind = Expr::Node::Kind::Neg;
            n.a = parse_factor();
            return add(n);
        }
        if (eat('+'))
            return parse_factor();
        return parse_power();
    }

    // power := atom ('^' factor)?   (right-associative)
    int parse_power() {
        int base = parse_atom();
        if (eat('^'))
            return binary(Expr::Node::Kind::Pow, base, parse_factor());
        return base;
    }

    int parse_atom() {
        skip_ws();
        if (pos_ >= text_.size())
            fail("expected a value");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            int inner = parse_expr();
            if (!eat(')'))
                fail("missing ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    int parse_number() {
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc())
            fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        Expr::Node n;
        n.kind = Expr::Node::Kind::Number;
        n.value = value;
        return add(n);
    }

    int parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
            ++pos_;
        const std::string name = text_.substr(start, pos_ - start);
        Expr::Node n;
        if (name == "x") {
            n.kind = Expr::Node::Kind::X;
            out_.uses_x_ = true;
            return add(n);
        }
        if (name == "pi") {
            n.kind = Expr::Node::Kind::Number;
            n.value = M_PI;
            return add(n);
        }
        if (name == "e") {
            n.kind = Expr::Node::Kind::Number;
            n.value = M_E;
            return add(n);
        }
        if (name.size() > 2 && name.compare(0, 2, "th") == 0) {
            std::size_t k = 0;
            const char* begin = name.data() + 2;
            const char* end = name.data() + name.size();
            auto [ptr, ec] = std::from_chars(begin, end, k);
            if (ec == std::errc() && ptr == end && k >= 1) {
                if (k > n_theta_)
                    fail("variable " + name + " exceeds the declared " +
                         std::to_string(n_theta_) + " order parameters");
                n.kind = Expr::Node::Kind::Theta;
                n.index = k - 1;
                out_.max_theta_ = std::max(out_.max_theta_, k);
                return add(n);
            }
        }
        fail("unknown identifier '" + name + "'");
    }
};

Expr Expr::parse(const std::string& text, std::size_t n_theta) {
    Expr e;
    e.text_ = text;
    Parser(text, n_theta, e).run();
    return e;
}

double Expr::eval_node(int id, const Vec& theta, double x) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.kind) {
    case Node::Kind::Number:
        return n.value;
    case Node::Kind::Theta:
        if (n.index >= theta.size())
            throw Error("expression: theta vector too short for th" +
                        std::to_string(n.index + 1));
        return theta[n.index];
    case Node::Kind::X:
        return x;
    case Node::Kind::Add:
        return eval_node(n.a, theta, x) + eval_node(n.b, theta, x);
    case Node::Kind::Sub:
        return eval_node(n.a, theta, x) - eval_node(n.b, theta, x);
    case Node::Kind::Mul:
        return eval_node(n.a, theta, x) * eval_node(n.b, theta, x);
    case Node::Kind::Div:
        return eval_node(n.a, theta, x) / eval_node(n.b, theta, x);
    case Node::Kind::Pow:
        return std::pow(eval_node(n.a, theta, x), eval_node(n.b, theta, x));
    case Node::Kind::Neg:
        return -eval_node(n.a, theta, x);
    }
    throw Error("expression: corrupt node");
}

double Expr::eval(const Vec& theta, double x) const {
    return eval_node(root_, theta, x);
}

ScalarField field_of(const Expr& e, std::size_t N) {
    if (e.max_theta() > N)
        throw Error("expression uses th" + std::to_string(e.max_theta()) +
                    " but the system has only " + std::to_string(N) +
                    " phases");
    ScalarField f;
    f.eval = [e](const OrderParameterPoint& p) {
        return e.eval(p.values());
    };
    return f;
}

std::function<double(double)> function_of(const Expr& e) {
    return [e](double x) { return e.eval1(x); };
}

} // namespace phaseflow::expr
