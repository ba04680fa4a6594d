#pragma once

#include <cstddef>

namespace crooked {

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval for k successes in n trials; z = 1.96 gives 95%.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.96);

// Normal-approximation interval for p1 - p2 from two independent proportions.
Interval difference_interval(std::size_t k1, std::size_t n1, std::size_t k2, std::size_t n2, double z = 1.96);

// Standard deviation of a binomial proportion with parameter p over n trials.
double binomial_sigma(double p, std::size_t n);

}  // namespace crooked
