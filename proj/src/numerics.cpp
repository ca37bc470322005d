#include "heis/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heis {

std::vector<double> derivative_uniform(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) throw std::invalid_argument("derivative_uniform: need at least 2 samples");
    std::vector<double> d(n);
    if (n < 4) {
        d[0] = (f[1] - f[0]) / h;
        d[n - 1] = (f[n - 1] - f[n - 2]) / h;
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        return d;
    }
    if (n < 6) {
        // second-order one-sided ends, central interior
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        return d;
    }
    const double s = 1.0 / (12.0 * h);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s;
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * s;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * s;
    return d;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h) {
    std::vector<double> s(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i)
        s[i] = s[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return s;
}

PchipInterpolant::PchipInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw std::invalid_argument("PchipInterpolant: need matching arrays, n >= 2");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("PchipInterpolant: abscissae must increase strictly");
    d_.assign(n, 0.0);
    if (n == 2) {
        d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
        return;
    }
    std::vector<double> hstep(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        hstep[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / hstep[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d_[i] = 0.0;  // local extremum of the data
        } else {
            const double w1 = 2.0 * hstep[i] + hstep[i - 1];
            const double w2 = hstep[i] + 2.0 * hstep[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0)
            d = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0))
            d = 3.0 * d0;
        return d;
    };
    d_[0] = end_slope(hstep[0], hstep[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(hstep[n - 2], hstep[n - 3], delta[n - 2], delta[n - 3]);
}

double PchipInterpolant::operator()(double xq) const {
    const std::size_t n = x_.size();
    if (xq <= x_.front()) xq = x_.front();
    if (xq >= x_.back()) xq = x_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    i = (i == 0) ? 0 : i - 1;
    if (i >= n - 1) i = n - 2;
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double CounterRng::uniform(std::uint64_t counter, std::uint64_t stream) const {
    std::uint64_t h = splitmix64(seed_ ^ 0x6a09e667f3bcc909ULL);
    h = splitmix64(h ^ counter);
    h = splitmix64(h ^ (stream * 0xd6e8feb86659fd93ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace heis
