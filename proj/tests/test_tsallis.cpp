// test_tsallis.cpp

#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "phaseflow/hydro.hpp"
#include "phaseflow/tsallis.hpp"

using namespace phaseflow;
namespace ts = phaseflow::tsallis;

namespace {

double tsallis2_closed(double q, double t1, double t2) {
    return t1 + t2 + q * t1 * t2;
}

double tsallis3_closed(double q, double t1, double t2, double t3) {
    return t1 + t2 + t3 + q * (t1 * t2 + t2 * t3 + t1 * t3) +
           q * q * (t1 * t2 * t3);
}

} // namespace

TEST_SUITE_BEGIN("tsallis");

TEST_CASE("entropy closed-form anchors") {
    CHECK(ts::entropy(0.5, {1.0, 2.0}) == doctest::Approx(4.0));
    CHECK(ts::entropy(0.0, {1.0, 2.0, 3.0}) == doctest::Approx(6.0));
    CHECK(ts::entropy(1.0, {1.0, 1.0, 1.0}) == doctest::Approx(7.0));
}

TEST_CASE("entropy matches the two- and three-phase expansions") {
    auto g = oracles::rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const double q = oracles::uniform(g, -2, 2);
        const double t1 = oracles::uniform(g, -3, 3);
        const double t2 = oracles::uniform(g, -3, 3);
        const double t3 = oracles::uniform(g, -3, 3);
        CHECK(ts::entropy(q, {t1, t2}) ==
              doctest::Approx(tsallis2_closed(q, t1, t2)).epsilon(1e-12));
        CHECK(ts::entropy(q, {t1, t2, t3}) ==
              doctest::Approx(tsallis3_closed(q, t1, t2, t3)).epsilon(1e-12));
    }
}

TEST_CASE("entropy equals the printed product form away from q = 0") {
    auto g = oracles::rng(555);
    for (int trial = 0; trial < 200; ++trial) {
        const double q = oracles::uniform(g, 0.2, 2.0) *
                         (trial % 2 ? 1.0 : -1.0);
        const std::size_t n = 2 + trial % 4;
        Vec v(n);
        for (auto& x : v)
            x = oracles::uniform(g, -2, 2);
        double prod = 1.0;
        for (double x : v)
            prod *= 1.0 / q + x;
        const double printed =
            std::pow(q, double(n) - 1.0) *
            (prod - std::pow(q, -double(n)));
        CHECK(ts::entropy(q, OrderParameterPoint(v)) ==
              doctest::Approx(printed).epsilon(1e-10));
    }
}

TEST_CASE("entropy is permutation symmetric") {
    auto g = oracles::rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const double q = oracles::uniform(g, -2, 2);
        Vec v(4);
        for (auto& x : v)
            x = oracles::uniform(g, -3, 3);
        const double base = ts::entropy(q, OrderParameterPoint(v));
        std::shuffle(v.begin(), v.end(), g);
        CHECK(ts::entropy(q, OrderParameterPoint(v)) ==
              doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("additive limit is linear in q") {
    const OrderParameterPoint p{0.7, -1.1, 2.3};
    const double sum = 0.7 - 1.1 + 2.3;
    const double e2 = 0.7 * (-1.1) + (-1.1) * 2.3 + 0.7 * 2.3;
    for (double q : {1e-3, 1e-5, 1e-7, 1e-9}) {
        const double defect = ts::entropy(q, p) - sum;
        CHECK(defect == doctest::Approx(q * e2).epsilon(1e-4));
    }
    CHECK(ts::entropy(0.0, p) == doctest::Approx(sum));
}

TEST_CASE("speed anchors and additive case") {
    CHECK(ts::speed(0.5, {1.0, 2.0}, 0) == doctest::Approx(2.0));
    CHECK(ts::speed(0.0, {4.0, -1.0, 0.3}, 2) == doctest::Approx(1.0));
    CHECK(ts::speed(1.0, {1.0, 1.0, 1.0}, 1) == doctest::Approx(4.0));
}

TEST_CASE("speed is the derivative of the entropy (FD oracle)") {
    auto g = oracles::rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const double q = oracles::uniform(g, -1.5, 1.5);
        const std::size_t n = 2 + trial % 3;
        Vec v(n);
        for (auto& x : v)
            x = oracles::uniform(g, -2, 2);
        const std::size_t k = trial % n;
        auto f = [&](const Vec& y) {
            return ts::entropy(q, OrderParameterPoint(y));
        };
        CHECK(ts::speed(q, OrderParameterPoint(v), k) ==
              doctest::Approx(oracles::fd(f, v, k)).epsilon(1e-7));
    }
}

TEST_CASE("speed does not depend on its own order parameter") {
    auto g = oracles::rng(88);
    for (int trial = 0; trial < 100; ++trial) {
        const double q = oracles::uniform(g, -1.5, 1.5);
        Vec v(3);
        for (auto& x : v)
            x = oracles::uniform(g, -2, 2);
        const std::size_t k = trial % 3;
        auto f = [&](const Vec& y) {
            return ts::speed(q, OrderParameterPoint(y), k);
        };
        CHECK(oracles::fd(f, v, k) == doctest::Approx(0.0).epsilon(1e-8));
    }
}

TEST_CASE("binary compose and its associativity") {
    CHECK(ts::binary_compose(0.5, 1.0, 2.0) == doctest::Approx(4.0));
    CHECK(ts::binary_compose(0.0, 1.3, -0.4) == doctest::Approx(0.9));
    CHECK(ts::binary_compose(1.0, ts::binary_compose(1.0, 1.0, 1.0), 1.0) ==
          doctest::Approx(ts::entropy(1.0, {1.0, 1.0, 1.0})));
    auto g = oracles::rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const double q = oracles::uniform(g, -2, 2);
        const double a = oracles::uniform(g, -2, 2);
        const double b = oracles::uniform(g, -2, 2);
        const double c = oracles::uniform(g, -2, 2);
        CHECK(ts::binary_compose(q, ts::binary_compose(q, a, b), c) ==
              doctest::Approx(
                  ts::binary_compose(q, a, ts::binary_compose(q, b, c)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("split_phase grows the system and preserves the entropy") {
    const auto grown = ts::split_phase(1.0, OrderParameterPoint{3.0}, 0,
                                       {1.0, 1.0});
    REQUIRE(grown.size() == 2);
    CHECK(grown[0] == 1.0);
    CHECK(grown[1] == 1.0);
    CHECK(ts::entropy(1.0, grown) == doctest::Approx(3.0));

    const auto additive =
        ts::split_phase(0.0, OrderParameterPoint{5.0}, 0, {2.0, 3.0});
    CHECK(ts::entropy(0.0, additive) == doctest::Approx(5.0));

    const auto half =
        ts::split_phase(0.5, OrderParameterPoint{4.0}, 0, {1.0, 2.0});
    CHECK(ts::entropy(0.5, half) == doctest::Approx(4.0));

    CHECK_THROWS_AS(
        (void)ts::split_phase(0.5, OrderParameterPoint{4.0}, 0, {1.0, 2.5}),
        CompositionMismatchError);
}

TEST_CASE("split_phase keeps the entropy invariant in larger systems") {
    auto g = oracles::rng(6060);
    for (int trial = 0; trial < 100; ++trial) {
        const double q = oracles::uniform(g, -1.5, 1.5);
        Vec v(3);
        for (auto& x : v)
            x = oracles::uniform(g, -2, 2);
        const OrderParameterPoint p(v);
        const std::size_t j = trial % 3;
        const double part = oracles::uniform(g, -1, 1);
        // solve theta_j = compose(part, other) for the second part
        const double denom = 1.0 + q * part;
        if (std::abs(denom) < 1e-3)
            continue;
        const double other = (p[j] - part) / denom;
        const auto grown = ts::split_phase(q, p, j, {part, other});
        REQUIRE(grown.size() == 4);
        CHECK(ts::entropy(q, grown) ==
              doctest::Approx(ts::entropy(q, p)).epsilon(1e-10));
    }
}

TEST_CASE("epd residual anchors") {
    // quadratic field, hand evaluation of the residual formula
    ScalarField sq;
    sq.eval = [](const OrderParameterPoint& p) { return p[0] * p[0]; };
    CHECK(ts::epd_residual(sq, {1.0, 2.0}, 0, 1) == doctest::Approx(-2.0));

    // additive entropy: all second derivatives vanish, gradient is constant
    const ts::TsallisEntropy additive{0.0, 3};
    CHECK(ts::epd_residual(additive.field(), {1.0, 2.0, 3.0}, 0, 1) ==
          doctest::Approx(0.0));

    CHECK_THROWS_AS(
        (void)ts::epd_residual(sq, {1.0, 1.0 + 1e-12}, 0, 1), PoleError);
}

TEST_CASE("proposition: every tsallis entropy satisfies the EPD equation") {
    auto g = oracles::rng(404);
    for (double q : {0.0, 0.3, 1.0, 2.0, -0.5}) {
        for (std::size_t n : {2u, 3u, 4u, 5u}) {
            const ts::TsallisEntropy ent{q, n};
            const ScalarField analytic = ent.field();
            ScalarField fd_only;
            fd_only.eval = analytic.eval;
            for (int trial = 0; trial < 20; ++trial) {
                const Vec v = oracles::distinct_point(g, n, -3, 3, 0.05);
                const OrderParameterPoint p(v);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j) {
                        CHECK(std::abs(ts::epd_residual(analytic, p, i, j)) <=
                              1e-12);
                        CHECK(std::abs(ts::epd_residual(fd_only, p, i, j)) <=
                              1e-6);
                    }
            }
        }
    }
}

TEST_CASE("analytic gradient and hessian match FD oracles") {
    auto g = oracles::rng(909);
    for (int trial = 0; trial < 60; ++trial) {
        const double q = oracles::uniform(g, -1.5, 1.5);
        const std::size_t n = 2 + trial % 3;
        const ts::TsallisEntropy ent{q, n};
        const ScalarField f = ent.field();
        Vec v(n);
        for (auto& x : v)
            x = oracles::uniform(g, -2, 2);
        auto plain = [&](const Vec& y) {
            return ts::entropy(q, OrderParameterPoint(y));
        };
        const OrderParameterPoint p(v);
        for (std::size_t k = 0; k < n; ++k)
            CHECK(f.grad(p)[k] ==
                  doctest::Approx(oracles::fd(plain, v, k)).epsilon(1e-7));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double want = i == j ? 0.0 : oracles::fd2(plain, v, i, j);
                CHECK(f.hess(p)(i, j) ==
                      doctest::Approx(want).epsilon(1e-5).scale(1.0));
            }
    }
}

TEST_CASE("generating identity ties speeds to the symmetry basis") {
    auto g = oracles::rng(1313);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + trial % 4; // up to 5 phases
        const double q = oracles::uniform(g, -2, 2);
        Vec v(n);
        for (auto& x : v)
            x = oracles::uniform(g, -3, 3);
        const OrderParameterPoint p(v);
        const std::size_t k = trial % n;
        double sum = 0.0;
        double qpow = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += qpow * hydro::wnl_speed(p, k, j);
            qpow *= q;
        }
        CHECK(ts::speed(q, p, k) == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_SUITE_END();
