#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nevlab/common.hpp"
#include "nevlab/disk_geometry.hpp"
#include "nevlab/entire_curve.hpp"
#include "nevlab/polynomial_section.hpp"

namespace nevlab::nevanlinna {

using curves::EntireCurve;

// T(r) = 1/2 mean_theta log|F(re^{i theta})|^2 - 1/2 log|F(0)|^2, by the
// periodic trapezoid rule with node doubling.
Estimate characteristic(const EntireCurve& curve, double r, double tol = 1e-12);

// T(r) = int_{|z|<r} log(r/|z|) c1-density dA by tanh-sinh in the radius and
// the trapezoid rule in the angle.
Estimate characteristic_double_integral(const EntireCurve& curve, double r, double tol = 1e-10);

// Circle integral against the Poisson weight of w0 minus the value at w0.
Estimate characteristic_based(const EntireCurve& curve, cplx w0, double r, double tol = 1e-12);

// int_{|z|<r} g_r(w0, z) c1-density dA, computed in the coordinate u with
// z = r (u + a) / (1 + conj(a) u), a = w0 / r, where the Green function is
// log(1/|u|).
Estimate characteristic_based_double_integral(const EntireCurve& curve, cplx w0, double r,
                                              double tol = 1e-10);

struct ProfileSample {
    double r = 0.0;
    double T = 0.0;
    double error = 0.0;
};

struct CharacteristicProfile {
    std::string curve;
    cplx base_point{};
    std::vector<ProfileSample> samples;
    // Nondecreasing within twice the quadrature errors.
    bool nondecreasing() const;
};

CharacteristicProfile characteristic_profile(const EntireCurve& curve, cplx w0, const std::vector<double>& radii,
                                             double tol = 1e-12);

// Poisson average of log ||s||(phi(r e^{i theta})) seen from w0.
Estimate proximity(const EntireCurve& curve, const PolynomialSection& s, cplx w0, double r, double tol = 1e-12);

struct FmtReport {
    double r = 0.0;            // radius actually used (after nudges)
    cplx w0{};
    std::string section;
    double proximity = 0.0;
    double characteristic = 0.0;
    double zero_sum = 0.0;
    double base_value = 0.0;
    double residual = 0.0;
    double error = 0.0;        // accumulated error estimates of the four terms
    int zeros = 0;             // counted with multiplicity
    int nudges = 0;

    double recompute_residual() const { return (proximity + characteristic) - (zero_sum + base_value); }
    bool pass() const { return std::abs(residual) < 10.0 * error; }
};

// Evaluates both sides of the first main theorem with base point w0. Throws
// PreconditionError if s vanishes along the curve at w0.
FmtReport verify_fmt(const EntireCurve& curve, const PolynomialSection& s, cplx w0, double r, double tol = 1e-12);

struct BasepointReport {
    double r = 0.0;
    double epsilon = 0.0;
    double A = 0.0;
    double T_scaled = 0.0;  // T((1+eps) r)
    double bound = 0.0;     // A (T_scaled + 1)
    std::size_t grid_points = 0;
    std::size_t violations = 0;
    double worst_ratio = 0.0;  // max T_w(r) / bound
    cplx worst_w{};
    bool pass() const { return violations == 0; }
};

// The constant of the affine base-point comparison.
double basepoint_constant(const EntireCurve& curve, double epsilon);

// Sweeps w over a grid_size x grid_size polar grid of the disk of radius r
// and checks T_w(r) <= A (T((1+eps) r) + 1). Affine curves only.
BasepointReport basepoint_bound_check(const EntireCurve& curve, double r, double epsilon, std::size_t grid_size,
                                      double tol = 1e-11);

struct ProjectiveBoundReport {
    bool applicable = false;
    double r = 0.0;
    double T_r = 0.0;
    double T_er = 0.0;
    double H = 0.0;  // 1 / T(r)
    geometry::DiskSet exceptional{geometry::DiskLabel::exceptional};
    std::size_t atoms = 0;
    double radii_sum = 0.0;
    double radii_bound = 0.0;
    double bound = 0.0;  // (log T(r) + log r + log 2) T(e r)
    std::size_t samples = 0;
    std::size_t violations = 0;
    double max_T_w0 = 0.0;
    double slack = 0.0;  // bound / max_T_w0
    bool pass() const { return applicable && radii_sum <= radii_bound && violations == 0; }
};

struct ProjectiveBoundOptions {
    std::size_t radial_cells = 16;
    std::size_t angular_cells = 32;
    std::size_t samples = 500;
    double tol = 1e-10;
};

// Exceptional set from the Cartan lemma applied to log(er/|z|) times the
// pulled-back form on the disk of radius r, then the base-point bound on
// sampled w0 outside it. Projective curves only.
ProjectiveBoundReport projective_basepoint_bound(const EntireCurve& curve, double r,
                                                 const ProjectiveBoundOptions& opt = {});

struct ZeroCountReport {
    int degree = 0;
    double epsilon = 0.0;
    std::vector<double> radii;
    std::vector<double> T_scaled;              // T((1+eps) r) per radius
    std::vector<std::vector<int>> counts;      // [section][radius]
    std::vector<std::string> sections;
    double C1 = 0.0;
    double C2 = 0.0;
    double max_ratio = 0.0;  // max count / T((1+eps) r)
    // count <= C1 T + C2 on every cell, by construction of the fit.
    bool consistent() const;
};

// Zero counts of the pulled-back sections on each circle and the fitted
// constants: C2 is the largest count at the smallest radius and C1 the
// smallest slope making count <= C1 T((1+eps) r) + C2 hold on every cell.
ZeroCountReport zero_count_bound_check(const EntireCurve& curve, int d, double epsilon,
                                       const std::vector<PolynomialSection>& sections,
                                       const std::vector<double>& radii);

// Random sections with integer coefficients in [-coeff_bound, coeff_bound].
std::vector<PolynomialSection> random_sections(int ambient_dim, int d, std::size_t count, std::uint64_t seed,
                                               int coeff_bound = 9);

struct StabilityReport {
    std::vector<double> C1;  // one fit per independent draw
    double mean = 0.0;
    double max_deviation = 0.0;  // max |C1_k - mean| / mean
    bool pass(double limit = 0.2) const { return mean > 0.0 && max_deviation < limit; }
};

StabilityReport zero_count_stability(const EntireCurve& curve, int d, double epsilon,
                                     const std::vector<double>& radii, std::size_t sections_per_draw,
                                     std::size_t draws, std::uint64_t seed);

struct GrowthReport {
    double r = 0.0;
    double log_sup = 0.0;  // log+ max over the circle of |f|
    double T_2r = 0.0;     // characteristic of [1 : f] at 2r
    double slack = 0.0;    // 3/2 log(1 + |f(0)|^2)
    bool pass() const { return log_sup <= 3.0 * T_2r + slack + 1e-9; }
};

// log+ sup_{|z|<=r} |f| <= 3 T_f(2r) + 3/2 log(1 + |f(0)|^2).
GrowthReport growth_check(const curves::FunctionPtr& f, double r, double tol = 1e-12);

struct CompactBasepointReport {
    double r0 = 0.0;
    double epsilon = 0.0;
    double min_ratio = 0.0;  // of T_w0(r) / T((1+eps) r)
    double max_ratio = 0.0;
    std::size_t evaluations = 0;
};

// Ratios T_w0(r) / T((1+eps) r) for w0 sampled in the disk of radius r0 and
// every r > r0 in the grid.
CompactBasepointReport compact_basepoint_check(const EntireCurve& curve, double r0, double epsilon,
                                               const std::vector<double>& radii, std::size_t samples = 64);

}  // namespace nevlab::nevanlinna
