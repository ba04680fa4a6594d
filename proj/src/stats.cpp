#include "crooked/stats.hpp"

#include <algorithm>
#include <cmath>

namespace crooked {

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2 * nn)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Interval difference_interval(std::size_t k1, std::size_t n1, std::size_t k2, std::size_t n2, double z) {
    if (n1 == 0 || n2 == 0) return {-1.0, 1.0};
    const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
    const double se = std::sqrt(p1 * (1 - p1) / static_cast<double>(n1) + p2 * (1 - p2) / static_cast<double>(n2));
    const double d = p1 - p2;
    return {std::max(-1.0, d - z * se), std::min(1.0, d + z * se)};
}

double binomial_sigma(double p, std::size_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(p * (1 - p) / static_cast<double>(n));
}

}  // namespace crooked
