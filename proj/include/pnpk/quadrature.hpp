#pragma once

#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace pnpk {

/// Trapezoid weights on the uniform grid of n points over [0,1].
std::vector<double> trapezoid_weights(std::size_t n);

/// Trapezoid integral over [0,1] of samples on the uniform grid.
double trapezoid(const std::vector<double>& values);

/// Composite 20-point Gauss-Legendre over [a,b] split into `panels` pieces.
template <class F>
auto gauss_legendre(F&& f, double a, double b, int panels = 64) {
    using R = decltype(f(a));
    R acc{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        acc += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, lo + h);
    }
    return acc;
}

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes and weights of the same composite rule, for integrands sampled once
/// and reused in many inner products.
inline QuadRule gauss_legendre_rule(double a, double b, int panels = 64) {
    using G = boost::math::quadrature::gauss<double, 20>;
    const auto& xs = G::abscissa();
    const auto& ws = G::weights();
    QuadRule rule;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            rule.nodes.push_back(mid + 0.5 * h * xs[i]);
            rule.weights.push_back(0.5 * h * ws[i]);
            if (xs[i] != 0.0) {
                rule.nodes.push_back(mid - 0.5 * h * xs[i]);
                rule.weights.push_back(0.5 * h * ws[i]);
            }
        }
    }
    return rule;
}

}  // namespace pnpk
