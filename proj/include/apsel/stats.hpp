#pragma once

#include <cstddef>
#include <span>

namespace apsel {

struct OneSidedTest {
    std::size_t n = 0;
    double mean = 0.0;     // mean of the (paired) differences
    double stddev = 0.0;   // sample standard deviation of the differences
    double t = 0.0;
    double p_value = 1.0;  // probability, under the null, of a result at least this far in the tested direction
};

/// One-sample t test of H1: mean(values) < mu. With zero spread the p-value
/// degenerates to 0 (mean below mu) or 1.
OneSidedTest t_test_less(std::span<const double> values, double mu);

/// Paired t test of H1: mean(a - b) < 0.
OneSidedTest paired_t_test_less(std::span<const double> a, std::span<const double> b);

/// Paired t test of H1: mean(a - b) > 0.
OneSidedTest paired_t_test_greater(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness of fit of the counts against a uniform distribution.
ChiSquareResult chi_square_uniform(std::span<const std::size_t> counts);

}  // namespace apsel
