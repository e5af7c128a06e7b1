#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nevlab/common.hpp"

namespace nevlab::geometry {

// Green function of the disk of radius `radius` with pole at `base`.
struct GreenKernel {
    double radius = 1.0;
    cplx base{};

    GreenKernel() = default;
    GreenKernel(double r, cplx w0);  // throws DomainError unless |w0| < r
};

// log|(r^2 - z conj(w0)) / (r (z - w0))|, clamped at 0 against roundoff.
// Returns +infinity when z == w0. Throws DomainError for |z| > r.
double green(const GreenKernel& kernel, cplx z);

// Density of the harmonic measure seen from w0 on the circle |z| = r, with
// respect to dtheta/2pi.
double poisson_weight(const GreenKernel& kernel, double theta);

// Pseudo-hyperbolic distance |r1 (z - w) / (r1^2 - z conj(w))| on the disk of
// radius r1.
double hyperbolic_distance(double r1, cplx z, cplx w);

// Largest pairwise pseudo-hyperbolic distance; 0 for fewer than two points.
double diam(double r1, const std::vector<cplx>& points);

struct Disk {
    cplx center{};
    double radius = 0.0;
};

enum class DiskLabel { covering, exceptional };

std::string to_string(DiskLabel label);

class DiskSet {
public:
    DiskSet() = default;
    explicit DiskSet(DiskLabel label) : label_(label) {}

    DiskLabel label() const { return label_; }
    const std::vector<Disk>& disks() const { return disks_; }
    std::size_t size() const { return disks_.size(); }
    bool empty() const { return disks_.empty(); }

    void add(cplx center, double radius);  // throws DomainError unless radius > 0
    double radii_sum() const;
    // Closed-disk membership.
    bool contains(cplx z) const;

    nlohmann::json to_json() const;
    static DiskSet from_json(const nlohmann::json& j);

private:
    DiskLabel label_ = DiskLabel::covering;
    std::vector<Disk> disks_;
};

// Euclidean disk equal to the pseudo-hyperbolic ball {w : d_{r1}(w, a) <= s}.
Disk pseudo_hyperbolic_ball(double r1, cplx a, double s);

struct Atom {
    cplx location{};
    double mass = 0.0;
};

struct AtomicMeasure {
    std::vector<Atom> atoms;

    AtomicMeasure() = default;
    explicit AtomicMeasure(std::vector<Atom> a);  // throws DomainError on negative mass
    double total_mass() const;
};

// ceil(5 / (alpha^2 eps)) + 1
std::size_t covering_bound(double alpha, double epsilon);

// Finitely many pseudo-hyperbolic balls of diameter <= alpha, measured in the
// disk of radius (1+epsilon) r, whose union contains the closed disk of
// radius r. Balls are arranged in concentric rings; a greedy set cover on a
// grid is used if the rings ever need more balls than covering_bound.
DiskSet cover_disk(double r, double epsilon, double alpha);

struct CoverageReport {
    std::size_t balls = 0;
    std::size_t bound = 0;
    std::size_t grid_points = 0;
    std::size_t uncovered = 0;
    double max_sampled_diam = 0.0;
    bool pass() const { return balls <= bound && uncovered == 0; }
};

// Checks coverage on a grid x grid polar grid of the closed disk of radius r
// and samples each ball boundary at 64 points to measure its diameter.
CoverageReport verify_covering(const DiskSet& cover, double r, double epsilon, double alpha,
                               std::size_t grid = 200);

// sum_i m_i log|z - zeta_i|; -infinity at an atom with positive mass.
double cartan_potential(const AtomicMeasure& mu, cplx z);

// Boutroux-Cartan selection: disks with radii sum <= 5H outside of which the
// potential stays above M log H. Throws DomainError unless 0 < H < 1 and the
// total mass is positive.
DiskSet cartan_exceptional(const AtomicMeasure& mu, double H);

struct CartanReport {
    double radii_sum = 0.0;
    double radii_bound = 0.0;
    std::size_t samples = 0;
    std::size_t exterior = 0;
    std::size_t violations = 0;
    double min_margin = 0.0;  // min over exterior samples of V(z) - M log H
    bool pass() const { return radii_sum <= radii_bound && violations == 0; }
};

// Checks the exceptional set on low-discrepancy samples from the smallest
// bounding disk of the atoms (centred on their bounding box).
CartanReport verify_cartan(const AtomicMeasure& mu, double H, const DiskSet& exceptional,
                           std::size_t samples = 10000);

}  // namespace nevlab::geometry
