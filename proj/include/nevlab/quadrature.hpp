#pragma once

#include <cstddef>
#include <functional>

#include "nevlab/common.hpp"

namespace nevlab::quadrature {

struct PeriodicOptions {
    std::size_t min_nodes = 64;
    std::size_t max_nodes = std::size_t{1} << 20;
};

// Mean value (1/2pi) * integral over [0, 2pi) of a smooth periodic function,
// computed with the trapezoid rule and node doubling until two consecutive
// levels agree to `tol`. The error estimate is the last level difference plus
// a floating-point rounding floor. Throws PrecisionError past max_nodes.
Estimate periodic_mean(const std::function<double(double)>& f, double tol,
                       PeriodicOptions options = {});

// Double-exponential (tanh-sinh) quadrature of f over [a, b]. Integrable
// endpoint singularities (log, algebraic) are handled without special care.
// f is never evaluated at the endpoints themselves.
Estimate tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol,
                   int max_level = 10);

// Halton radical inverse of index i in the given prime base.
double radical_inverse(std::uint64_t i, unsigned base);

// i-th point of an area-uniform low-discrepancy sequence in the closed disk of
// the given center and radius (Halton bases 2 and 3).
cplx halton_disk_point(std::uint64_t i, cplx center, double radius);

}  // namespace nevlab::quadrature
