#include "apsel/stats.hpp"

#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "apsel/errors.hpp"

namespace apsel {

OneSidedTest t_test_less(std::span<const double> values, double mu)
{
    OneSidedTest out;
    out.n = values.size();
    if (out.n < 2)
        throw DomainError("t test needs at least two samples");
    double sum = 0.0;
    for (double v : values)
        sum += v - mu;
    const double mean = sum / static_cast<double>(out.n);
    double ss = 0.0;
    for (double v : values)
        ss += (v - mu - mean) * (v - mu - mean);
    out.mean = mean + mu;
    out.stddev = std::sqrt(ss / static_cast<double>(out.n - 1));
    if (out.stddev == 0.0) {
        out.t = mean < 0.0 ? -INFINITY : (mean > 0.0 ? INFINITY : 0.0);
        out.p_value = mean < 0.0 ? 0.0 : 1.0;
        return out;
    }
    out.t = mean / (out.stddev / std::sqrt(static_cast<double>(out.n)));
    const boost::math::students_t dist(static_cast<double>(out.n - 1));
    out.p_value = boost::math::cdf(dist, out.t);
    return out;
}

OneSidedTest paired_t_test_less(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw DomainError("paired test needs equal sample sizes");
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        diff[i] = a[i] - b[i];
    return t_test_less(diff, 0.0);
}

OneSidedTest paired_t_test_greater(std::span<const double> a, std::span<const double> b)
{
    OneSidedTest out = paired_t_test_less(b, a);
    out.mean = -out.mean;
    out.t = -out.t;
    return out;
}

ChiSquareResult chi_square_uniform(std::span<const std::size_t> counts)
{
    if (counts.size() < 2)
        throw DomainError("chi-square test needs at least two categories");
    double total = 0.0;
    for (std::size_t c : counts)
        total += static_cast<double>(c);
    if (total <= 0.0)
        throw DomainError("chi-square test needs observations");
    const double expected = total / static_cast<double>(counts.size());
    ChiSquareResult out;
    for (std::size_t c : counts)
        out.statistic += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
    out.dof = counts.size() - 1;
    const boost::math::chi_squared dist(static_cast<double>(out.dof));
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    return out;
}

}  // namespace apsel
