#ifndef HEIS_NUMERICS_HPP
#define HEIS_NUMERICS_HPP

#include <cstdint>
#include <vector>

// Small shared kernels: uniform-grid finite differences, cumulative
// trapezoid, monotone cubic (PCHIP) interpolation and a counter-based RNG.

namespace heis {

// First derivative of uniformly spaced samples. Fourth-order stencils in
// the interior and one-sided fourth-order at the ends when n >= 6;
// degrades to second/first order for shorter inputs.
std::vector<double> derivative_uniform(const std::vector<double>& f, double h);

// s[0] = 0, s[i] = integral of f up to node i by composite trapezoid.
std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h);

// Fritsch-Carlson monotone cubic interpolant. Overshoot-free; exact at
// the nodes. Evaluation clamps to the data range.
class PchipInterpolant {
public:
    PchipInterpolant(std::vector<double> x, std::vector<double> y);
    double operator()(double xq) const;

private:
    std::vector<double> x_, y_, d_;
};

// Counter-based splittable generator: uniform(i, stream) depends only on
// (seed, i, stream), so sample order and worker count never matter.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    // in [0, 1)
    double uniform(std::uint64_t counter, std::uint64_t stream) const;

private:
    std::uint64_t seed_;
};

}  // namespace heis

#endif
