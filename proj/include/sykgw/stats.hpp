#pragma once

#include <cstddef>
#include <vector>

namespace sykgw {

/// Disorder statistics: sample standard deviation (n - 1 denominator) and
/// standard error sigma / sqrt(n).
struct SummaryStats {
    double mean = 0.0;
    double sigma = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

SummaryStats summarize(const std::vector<double>& values);

/// Vertex of the parabola through the discrete maximum and its neighbours.
/// At an end of the grid the discrete maximum itself is returned.
struct Peak {
    double t = 0.0;
    double value = 0.0;
    std::size_t index = 0;
};

Peak quadratic_peak(const std::vector<double>& t, const std::vector<double>& f);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sykgw
