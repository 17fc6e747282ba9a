// test_numcore.cpp

#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "phaseflow/numcore.hpp"
#include "phaseflow/tsallis.hpp"

using namespace phaseflow;

TEST_SUITE_BEGIN("numcore");

TEST_CASE("order parameter point invariants") {
    CHECK_THROWS_AS(OrderParameterPoint(Vec{}), Error);
    CHECK_THROWS_AS(OrderParameterPoint({1.0, std::nan("")}), Error);
    const OrderParameterPoint p{1.0, -2.0, 0.5};
    CHECK(p.size() == 3);
    CHECK(p[1] == -2.0);
    CHECK(p.max_abs() == 2.0);
    CHECK(p.pole_scale() == 2.0);
    const auto q = p.with(0, 7.0);
    CHECK(q[0] == 7.0);
    CHECK(p[0] == 1.0);
}

TEST_CASE("fd_partial on simple fields") {
    ScalarField f;
    f.eval = [](const OrderParameterPoint& p) { return p[0] * p[1]; };
    CHECK(fd_partial(f, {1.0, 2.0}, 0) == doctest::Approx(2.0).epsilon(1e-10));

    ScalarField cubic;
    cubic.eval = [](const OrderParameterPoint& p) {
        return p[0] * p[0] * p[0];
    };
    CHECK(fd_partial(cubic, {2.0}, 0) == doctest::Approx(12.0).epsilon(1e-8));
}

TEST_CASE("fd_partial matches the analytic tsallis speed") {
    const tsallis::TsallisEntropy ent{0.5, 2};
    ScalarField plain;
    plain.eval = ent.field().eval; // strip the analytic gradient
    const double fd = fd_partial(plain, {1.0, 2.0}, 0);
    CHECK(fd == doctest::Approx(tsallis::speed(0.5, {1.0, 2.0}, 0))
                    .epsilon(1e-8));
    CHECK(fd == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("fd_partial is exact on cubics with the default step") {
    auto g = oracles::rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const double c3 = oracles::uniform(g, -2, 2);
        const double c2 = oracles::uniform(g, -2, 2);
        const double c1 = oracles::uniform(g, -2, 2);
        const double x = oracles::uniform(g, -3, 3);
        ScalarField f;
        f.eval = [=](const OrderParameterPoint& p) {
            return ((c3 * p[0] + c2) * p[0] + c1) * p[0];
        };
        const double want = (3.0 * c3 * x + 2.0 * c2) * x + c1;
        CHECK(fd_partial(f, OrderParameterPoint{x}, 0) ==
              doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("fd_partial reports non-finite evaluations") {
    ScalarField f;
    f.eval = [](const OrderParameterPoint& p) { return std::log(p[0]); };
    // the stencil reaches into the negative axis
    CHECK_THROWS_AS((void)fd_partial(f, {1e-9}, 0), DifferentiationError);
}

TEST_CASE("cofactor sign rule and 1x1 convention") {
    SquareMatrix m(2);
    m(0, 0) = 1;
    m(0, 1) = 1;
    m(1, 0) = 2;
    m(1, 1) = 1;
    CHECK(m.cofactor(0, 0) == doctest::Approx(1.0));
    CHECK(m.cofactor(0, 1) == doctest::Approx(-2.0));

    const auto id = SquareMatrix::identity(3);
    CHECK(id.cofactor(0, 0) == doctest::Approx(1.0));
    CHECK(id.cofactor(2, 2) == doctest::Approx(1.0));

    SquareMatrix one(1);
    one(0, 0) = 5.0;
    CHECK(one.cofactor(0, 0) == doctest::Approx(1.0)); // empty minor is 1
}

TEST_CASE("laplace expansion identity on random matrices") {
    auto g = oracles::rng(12345);
    for (std::size_t n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 25; ++trial) {
            SquareMatrix m(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    m(i, j) = oracles::uniform(g, -2, 2);
            const double det = m.det();
            for (std::size_t i = 0; i < n; ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    sum += m(i, j) * m.cofactor(i, j);
                CHECK(sum == doctest::Approx(det).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("linear solve round trip") {
    auto g = oracles::rng(99);
    SquareMatrix m(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            m(i, j) = oracles::uniform(g, -1, 1) + (i == j ? 3.0 : 0.0);
    const Vec xreferences{0.3, -1.2, 2.0, 0.7};
    Vec b(4, 0.0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            b[i] += m(i, j) * xreferences[j];
    Vec x;
    REQUIRE(m.solve(b, x));
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(x[i] == doctest::Approx(xreferences[i]).epsilon(1e-12));

    SquareMatrix sing(2); // rank 1
    sing(0, 0) = 1;
    sing(0, 1) = 2;
    sing(1, 0) = 2;
    sing(1, 1) = 4;
    CHECK_FALSE(sing.solve({1.0, 1.0}, x));
}

TEST_CASE("quadrature basics") {
    CHECK(quadrature([](double) { return 1.0; }, 0, 2, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(quadrature([](double x) { return x; }, 0, 1, 1e-12) ==
          doctest::Approx(0.5).epsilon(1e-13));
    CHECK(quadrature([](double x) { return x * x; }, 0, 3, 1e-10) ==
          doctest::Approx(9.0).epsilon(1e-11));
    // orientation and the empty interval
    CHECK(quadrature([](double x) { return x; }, 1, 0, 1e-12) ==
          doctest::Approx(-0.5));
    CHECK(quadrature([](double x) { return x; }, 2, 2, 1e-12) == 0.0);
}

TEST_CASE("quadrature is exact on degree <= 5 polynomials") {
    auto g = oracles::rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Vec c(6);
        for (auto& v : c)
            v = oracles::uniform(g, -2, 2);
        const double a = oracles::uniform(g, -3, 0);
        const double b = oracles::uniform(g, 0.5, 4);
        auto poly = [&](double x) {
            double acc = 0.0;
            for (std::size_t k = c.size(); k-- > 0;)
                acc = acc * x + c[k];
            return acc;
        };
        auto antider = [&](double x) {
            double acc = 0.0;
            for (std::size_t k = c.size(); k-- > 0;)
                acc = acc * x + c[k] / double(k + 1);
            return acc * x;
        };
        const double want = antider(b) - antider(a);
        CHECK(quadrature(poly, a, b, 1e-11) ==
              doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("quadrature handles a mildly stiff integrand") {
    // sharp but integrable peak; antiderivative is atan
    auto g = [](double x) { return 1.0 / (1e-4 + x * x); };
    const double want = (std::atan(1.0 / 1e-2) - std::atan(-1.0 / 1e-2)) / 1e-2;
    CHECK(quadrature(g, -1, 1, 1e-9) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("quadrature failure surfaces as an error") {
    // non-integrable singularity exhausts the budget
    auto bad = [](double x) { return 1.0 / std::abs(x - 0.5); };
    CHECK_THROWS_AS((void)quadrature(bad, 0, 1, 1e-12), QuadratureError);
}

TEST_CASE("elementary symmetric recurrence") {
    const Vec v{1.0, 2.0, 3.0};
    CHECK(elementary_symmetric(v, 0) == 1.0);
    CHECK(elementary_symmetric(v, 1) == 6.0);
    CHECK(elementary_symmetric(v, 2) == 11.0);
    CHECK(elementary_symmetric(v, 3) == 6.0);
    CHECK(elementary_symmetric(v, 4) == 0.0);
}

TEST_CASE("scalar field substitutes finite differences transparently") {
    ScalarField f;
    f.eval = [](const OrderParameterPoint& p) {
        return std::sin(p[0]) * p[1];
    };
    const OrderParameterPoint p{0.7, 1.3};
    CHECK(f.partial(p, 0) ==
          doctest::Approx(std::cos(0.7) * 1.3).epsilon(1e-9));
    CHECK(f.partial2(p, 0, 1) == doctest::Approx(std::cos(0.7)).epsilon(1e-6));

    ScalarField g = f;
    g.grad = [](const OrderParameterPoint& p) {
        return Vec{std::cos(p[0]) * p[1], std::sin(p[0])};
    };
    // analytic and FD agree
    CHECK(g.partial(p, 0) == doctest::Approx(f.partial(p, 0)).epsilon(1e-8));
    CHECK(g.partial2(p, 1, 0) ==
          doctest::Approx(std::cos(0.7)).epsilon(1e-9));
}

TEST_SUITE_END();
