#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nevlab/disk_geometry.hpp"
#include "nevlab/entire_curve.hpp"
#include "nevlab/polynomial_section.hpp"

namespace nevlab::heights {

// Point of P^N with primitive integer coordinates (gcd 1, first nonzero
// coordinate positive). Affine points are (b, a_1, ..., a_N), b > 0.
class RationalPoint {
public:
    explicit RationalPoint(std::vector<mpz_class> coords);
    static RationalPoint from_affine(const std::vector<mpq_class>& x);

    const std::vector<mpz_class>& coords() const { return coords_; }
    int ambient_dim() const { return static_cast<int>(coords_.size()) - 1; }
    // x_i = a_i / b; throws DomainError at infinity.
    std::vector<mpq_class> affine() const;
    std::string to_string() const;
    bool operator==(const RationalPoint& o) const { return coords_ == o.coords_; }

private:
    std::vector<mpz_class> coords_;
};

// log |n| to double accuracy for arbitrarily large n != 0.
double log_abs(const mpz_class& n);

struct Height {
    double fs = 0.0;   // log of the Euclidean norm
    double max = 0.0;  // log of the max norm
};

Height height(const RationalPoint& p);

enum class LiouvilleStatus { holds, violated, vanishing };
std::string to_string(LiouvilleStatus s);

struct LiouvilleReport {
    LiouvilleStatus status = LiouvilleStatus::holds;
    double log_norm = 0.0;  // log ||s||(p)
    double rhs = 0.0;       // -(d h_fs(p) + log+ ||s||_sup)
    double margin = 0.0;    // log_norm - rhs
};

// Lower bound log ||s||(p) >= -(d h_fs(p) + log+ ||s||_sup) for a section
// with integer coefficients. `log_sup` is the log of a sampled sup norm;
// when omitted it is sampled here.
LiouvilleReport liouville_check(const PolynomialSection& s, const RationalPoint& p,
                                std::optional<double> log_sup = std::nullopt);

struct HeightedPoint {
    RationalPoint point;
    mpq_class w;  // preimage on the curve
    double h_fs = 0.0;
    double h_max = 0.0;
};

struct Enumeration {
    std::vector<HeightedPoint> points;    // S(r, H), in node order of w
    std::vector<HeightedPoint> excluded;  // would qualify but lie in the exceptional set
    std::size_t candidates = 0;           // preimages scanned
};

// Scans w = a/b with max(|a|, b) <= exp(H) and |w| < r through the curve's
// rational locus and keeps points of height h_fs <= H. Points in `exceptional`
// are reported separately.
Enumeration enumerate_points(const curves::EntireCurve& curve, double r, double H,
                             const geometry::DiskSet* exceptional = nullptr);

// Tolerance used for the height filter h_fs <= H.
bool within_height(double h, double H);

}  // namespace nevlab::heights
