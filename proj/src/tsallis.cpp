// tsallis.cpp

#include "phaseflow/tsallis.hpp"

#include <cmath>
#include <sstream>

namespace phaseflow::tsallis {

double entropy(double q, const OrderParameterPoint& theta) {
    if (!std::isfinite(q))
        throw Error("tsallis entropy: q must be finite");
    const std::size_t n = theta.size();
    if (q == 0.0) { // additive limit, dedicated path
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            sum += theta[k];
        return sum;
    }
    const Vec e = elementary_symmetric_all(theta.values(), n);
    double out = 0.0;
    for (std::size_t m = n; m >= 1; --m)
        out = out * q + e[m];
    return out;
}

double speed(double q, const OrderParameterPoint& theta, std::size_t k) {
    const std::size_t n = theta.size();
    if (k >= n)
        throw Error("tsallis speed: component out of range");
    if (q == 0.0)
        return 1.0;
    double prod = std::pow(q, static_cast<double>(n) - 1.0);
    for (std::size_t j = 0; j < n; ++j)
        if (j != k)
            prod *= 1.0 / q + theta[j];
    return prod;
}

double binary_compose(double q, double s1, double s2) {
    return s1 + s2 + q * s1 * s2;
}

OrderParameterPoint split_phase(double q, const OrderParameterPoint& theta,
                                std::size_t j,
                                std::pair<double, double> parts) {
    if (j >= theta.size())
        throw Error("split_phase: component out of range");
    const double composed = binary_compose(q, parts.first, parts.second);
    const double defect = composed - theta[j];
    if (std::abs(defect) > 1e-12 * std::max(1.0, std::abs(theta[j]))) {
        std::ostringstream os;
        os << "split_phase: parts (" << parts.first << ", " << parts.second
           << ") compose to " << composed << ", not theta^" << (j + 1) << " = "
           << theta[j] << " (defect " << defect << ")";
        throw CompositionMismatchError(os.str());
    }
    Vec v = theta.values();
    v[j] = parts.first;
    v.insert(v.begin() + static_cast<std::ptrdiff_t>(j) + 1, parts.second);
    return OrderParameterPoint(std::move(v));
}

double epd_residual(const ScalarField& field, const OrderParameterPoint& theta,
                    std::size_t i, std::size_t j) {
    if (i == j)
        throw Error("epd_residual: indices must differ");
    const double gap = theta[i] - theta[j];
    if (std::abs(gap) <= kPoleEps * theta.pole_scale())
        throw PoleError("epd_residual: coincident theta^" +
                        std::to_string(i + 1) + ", theta^" +
                        std::to_string(j + 1) + " at " + theta.str());
    const double mixed = field.partial2(theta, i, j);
    const double di = field.partial(theta, i);
    const double dj = field.partial(theta, j);
    return mixed - (dj - di) / gap;
}

namespace {

// prod over m not in {skip1, skip2, skip3} of (1/q + theta^m), times
// q^(#factors). Written as prod of (1 + q theta^m) to stay regular as q -> 0.
double qprod_excluding(double q, const OrderParameterPoint& theta,
                       std::size_t skip1, std::size_t skip2,
                       std::size_t skip3 = static_cast<std::size_t>(-1)) {
    double prod = 1.0;
    for (std::size_t m = 0; m < theta.size(); ++m)
        if (m != skip1 && m != skip2 && m != skip3)
            prod *= 1.0 + q * theta[m];
    return prod;
}

} // namespace

ScalarField TsallisEntropy::field() const {
    const double qv = q;
    const std::size_t n = phases;
    ScalarField f;
    f.eval = [qv, n](const OrderParameterPoint& p) {
        if (p.size() != n)
            throw Error("TsallisEntropy: wrong point dimension");
        return entropy(qv, p);
    };
    f.grad = [qv, n](const OrderParameterPoint& p) {
        if (p.size() != n)
            throw Error("TsallisEntropy: wrong point dimension");
        Vec g(n);
        for (std::size_t k = 0; k < n; ++k)
            g[k] = speed(qv, p, k);
        return g;
    };
    f.hess = [qv, n](const OrderParameterPoint& p) {
        if (p.size() != n)
            throw Error("TsallisEntropy: wrong point dimension");
        SquareMatrix h(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    h(i, j) = qv * qprod_excluding(qv, p, i, j);
        return h;
    };
    return f;
}

hydro::SpeedFamily speed_family(double q, std::size_t N) {
    if (N == 0)
        throw Error("speed_family: N must be >= 1");
    hydro::SpeedFamily fam;
    fam.phases = N;
    fam.flows.resize(2);
    fam.flows[0].assign(N, constant_field(1.0));
    fam.flows[1].reserve(N);
    for (std::size_t k = 0; k < N; ++k) {
        ScalarField f;
        f.eval = [q, k](const OrderParameterPoint& p) {
            return speed(q, p, k);
        };
        f.grad = [q, k](const OrderParameterPoint& p) {
            Vec g(p.size(), 0.0);
            for (std::size_t l = 0; l < p.size(); ++l)
                if (l != k)
                    g[l] = q * qprod_excluding(q, p, k, l);
            return g;
        };
        f.hess = [q, k](const OrderParameterPoint& p) {
            SquareMatrix h(p.size());
            for (std::size_t l = 0; l < p.size(); ++l)
                for (std::size_t m = 0; m < p.size(); ++m)
                    if (l != m && l != k && m != k)
                        h(l, m) = q * q * qprod_excluding(q, p, k, l, m);
            return h;
        };
        fam.flows[1].push_back(std::move(f));
    }
    return fam;
}

} // namespace phaseflow::tsallis
