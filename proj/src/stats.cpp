#include "sykgw/stats.hpp"

#include <cmath>

#include "sykgw/errors.hpp"

namespace sykgw {

SummaryStats summarize(const std::vector<double>& values) {
    if (values.empty()) throw InvalidArgument("cannot summarize an empty sample");
    SummaryStats s;
    s.n = values.size();
    double acc = 0.0;
    for (double v : values) acc += v;
    s.mean = acc / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sigma = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    s.std_error = s.sigma / std::sqrt(static_cast<double>(s.n));
    return s;
}

Peak quadratic_peak(const std::vector<double>& t, const std::vector<double>& f) {
    if (t.size() != f.size() || t.empty()) throw InvalidArgument("peak search needs matching nonempty grids");
    std::size_t k = 0;
    for (std::size_t i = 1; i < f.size(); ++i)
        if (f[i] > f[k]) k = i;
    Peak p{t[k], f[k], k};
    if (k == 0 || k + 1 == f.size()) return p;
    const double x0 = t[k - 1], x1 = t[k], x2 = t[k + 1];
    const double y0 = f[k - 1], y1 = f[k], y2 = f[k + 1];
    // Newton form of the interpolating parabola.
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (!(a < 0.0)) return p;
    const double b = d01 - a * (x0 + x1);
    p.t = -b / (2.0 * a);
    p.value = y0 + d01 * (p.t - x0) + a * (p.t - x0) * (p.t - x1);
    return p;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("log-log fit needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sykgw
