#include "nevlab/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace nevlab::quadrature {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

Estimate periodic_mean(const std::function<double(double)>& f, double tol,
                       PeriodicOptions options) {
    std::size_t n = options.min_nodes;
    double sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = f(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
        sum += v;
        abs_sum += std::abs(v);
    }
    double previous = sum / static_cast<double>(n);
    while (2 * n <= options.max_nodes) {
        const std::size_t m = 2 * n;
        // Only the odd nodes of the refined level are new.
        for (std::size_t k = 1; k < m; k += 2) {
            const double v = f(kTwoPi * static_cast<double>(k) / static_cast<double>(m));
            sum += v;
            abs_sum += std::abs(v);
        }
        n = m;
        const double current = sum / static_cast<double>(n);
        const double diff = std::abs(current - previous);
        const double rounding = 16.0 * kEps * (abs_sum / static_cast<double>(n));
        if (diff <= tol) {
            return {current, diff + rounding};
        }
        previous = current;
    }
    throw PrecisionError("periodic trapezoid did not converge to tol=" + std::to_string(tol) +
                         " within " + std::to_string(options.max_nodes) + " nodes");
}

Estimate tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol,
                   int max_level) {
    const double half = 0.5 * (b - a);
    constexpr double kHalfPi = 0.5 * kPi;
    // Truncation point: beyond t_max the nodes coincide with the endpoints in
    // double precision and the weights underflow.
    constexpr double kTMax = 3.2;

    // Contribution of abscissa t (and -t when t > 0). Distances to the
    // endpoints are computed from the complement to avoid cancellation.
    auto node_pair = [&](double t) {
        const double u = kHalfPi * std::sinh(t);
        const double cu = std::cosh(u);
        const double w = half * kHalfPi * std::cosh(t) / (cu * cu);
        const double delta = half / (std::exp(u) * cu);  // b - x for t > 0
        double s = 0.0;
        if (delta > 0.0) {
            s += w * f(b - delta);
            if (t > 0.0) {
                s += w * f(a + delta);
            }
        }
        return s;
    };

    double h = 1.0;
    double sum = node_pair(0.0);
    for (double t = h; t <= kTMax; t += h) {
        sum += node_pair(t);
    }
    double previous = h * sum;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        for (double t = h; t <= kTMax; t += 2.0 * h) {
            sum += node_pair(t);
        }
        const double current = h * sum;
        const double diff = std::abs(current - previous);
        if (level >= 3 && diff <= tol) {
            return {current, diff + 16.0 * kEps * std::abs(current)};
        }
        previous = current;
    }
    throw PrecisionError("tanh-sinh quadrature did not reach tol=" + std::to_string(tol));
}

double radical_inverse(std::uint64_t i, unsigned base) {
    double result = 0.0;
    double f = 1.0 / base;
    while (i > 0) {
        result += f * static_cast<double>(i % base);
        i /= base;
        f /= base;
    }
    return result;
}

cplx halton_disk_point(std::uint64_t i, cplx center, double radius) {
    // Skip index 0 which maps to the center for every base.
    const double u = radical_inverse(i + 1, 2);
    const double v = radical_inverse(i + 1, 3);
    return center + std::polar(radius * std::sqrt(u), kTwoPi * v);
}

}  // namespace nevlab::quadrature
