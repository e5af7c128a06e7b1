#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nevlab/auxpoly.hpp"
#include "nevlab/disk_geometry.hpp"
#include "nevlab/entire_curve.hpp"
#include "nevlab/heights.hpp"

namespace nevlab::counting {

using curves::EntireCurve;

struct CountRecord {
    double r = 0.0;
    double H = 0.0;
    double T_r = 0.0;       // T(r)
    double T_scaled = 0.0;  // T((1 + eps) r)
    double T_wide = 0.0;    // T((2 + eps) r)
    std::size_t count = 0;
    std::size_t excluded = 0;  // points in the exceptional set (projective)
    double kappa = 0.0;        // count / envelope
    double envelope() const;   // T_wide exp(eps (H + T_scaled)), needs epsilon
    double epsilon = 0.0;
};

// Exact counts on every (r, H) cell, sorted by (r, H). Projective curves get
// the exceptional set of the base-point bound at each r (empty where that
// bound does not apply).
std::vector<CountRecord> count_table(const EntireCurve& curve, std::vector<double> r_grid,
                                     std::vector<double> H_grid, double epsilon);

struct EnvelopeReport {
    double epsilon = 0.0;
    std::vector<double> kappa;  // per record, table order
    double max_kappa = 0.0;
    double median_kappa = 0.0;
    bool max_off_far_edge = false;     // max not on the largest r or the largest H
    bool diagonal_decreasing = false;  // kappa nonincreasing along the grid diagonal
    bool pass() const { return max_kappa <= 10.0 * median_kappa; }
};

EnvelopeReport bp_envelope_check(const std::vector<CountRecord>& records, double epsilon);

// exp(-(T((1+eps) r) + H) / d^(n-1))
double vanishing_threshold(double T_scaled, double H, int d, int n);
// exp(-(log T(r) T(e r) + H) / d^(n-1)), the projective variant.
double vanishing_threshold_projective(double T_r, double T_er, double H, int d, int n);

enum class VanishingStatus { verified, failed, vacuous };
std::string to_string(VanishingStatus s);

struct SmallDiamReport {
    VanishingStatus status = VanishingStatus::vacuous;
    std::string reason;
    double r = 0.0;
    double r1 = 0.0;  // (1 + eps) r
    double H = 0.0;
    int d = 0;
    double T_scaled = 0.0;
    double threshold = 0.0;       // allowed diameter
    double ball_radius = 0.0;     // pseudo-hyperbolic radius of W
    cplx ball_center{};
    double diameter = 0.0;        // of the points of S in W
    std::vector<heights::HeightedPoint> in_ball;
    std::size_t subset_size = 0;  // points used to build the polynomial
    std::vector<mpq_class> held_out_values;  // s(phi(w)) on the remaining points
    nlohmann::json polynomial;
};

struct SmallDiamOptions {
    double alpha = 5.0 / 12.0;
};

// Picks a pseudo-hyperbolic ball W of Delta_{(1+eps) r} centered at a point of
// S(r, H) with diameter at most the threshold and as many points as possible,
// builds the auxiliary polynomial from a proper subset of S(r, H) in W and
// evaluates it exactly at the others. Affine curves only.
SmallDiamReport small_diam_vanishing_test(const EntireCurve& curve, double r, double H, int d, double epsilon,
                                          const SmallDiamOptions& opt = {});

struct WindowEntry {
    double x = 0.0;  // T((1 + eps) r)
    double y = 0.0;  // H
    std::size_t count = 0;
    bool member = false;
    double norm() const { return x + y; }
};

struct WindowReport {
    double gamma = 0.0;
    double epsilon = 0.0;
    double A = 0.0;
    int n = 2;
    bool headline = false;  // gamma > n / (n - 1)
    std::vector<WindowEntry> entries;
    std::vector<std::vector<std::size_t>> chains;  // indices into entries, in increasing norm
    std::vector<bool> spanning;                    // per chain
    double largest_disk = 0.0;                     // l1 radius inside the members
    double span = 0.0;
    bool any_spanning() const;
    // Membership recomputed from the stored numbers.
    bool flags_consistent() const;
};

bool window_member(std::size_t count, double x, double y, double epsilon, double gamma);

WindowReport window_scan(const std::vector<WindowEntry>& table, double gamma, double epsilon, double A, int n);
WindowReport window_scan(const EntireCurve& curve, double gamma, double epsilon, double A,
                         const std::vector<CountRecord>& table);

}  // namespace nevlab::counting
