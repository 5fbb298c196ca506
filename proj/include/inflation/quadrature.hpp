#pragma once

#include <cstddef>
#include <vector>

namespace inflation {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule, nodes ascending. Results are cached per n.
const GaussLegendre& gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
template <class F>
double integrate_gl(F&& f, double a, double b, std::size_t panels, const GaussLegendre& rule)
{
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        }
        total += 0.5 * h * s;
    }
    return total;
}

} // namespace inflation
