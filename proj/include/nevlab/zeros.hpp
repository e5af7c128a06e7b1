#pragma once

#include <functional>
#include <vector>

#include "nevlab/common.hpp"

namespace nevlab::curves {

using Holomorphic = std::function<Jet(cplx)>;

struct ZeroRecord {
    cplx location{};
    int multiplicity = 0;
    double enclosure_radius = 0.0;
};

struct ZeroSearch {
    std::vector<ZeroRecord> zeros;  // sorted by (real, imag)
    int winding = 0;                // winding number of g along |z| = radius_used
    double radius_used = 0.0;
    int nudges = 0;                 // number of +1e-9 r radius nudges applied
    int total() const;
};

struct ZeroOptions {
    double enclosure = 1e-8;  // relative to r
    int max_depth = 60;       // contour bisection depth
    int max_nudges = 8;
};

// Winding number of g along the circle |z| = r. Throws ResolutionError when
// argument tracking fails and PreconditionError if g vanishes on the circle.
int winding_number(const Holomorphic& g, double r, const ZeroOptions& opt = {});

// Winding number with the radius nudged outward by 1e-9 r until no zero sits
// on the circle; returns the winding and updates r.
int winding_number_nudged(const Holomorphic& g, double& r, int& nudges, const ZeroOptions& opt = {});

// All zeros in |z| < r with multiplicities, by recursive quadrisection of a
// box around the disk with argument-principle tests on every box.
ZeroSearch count_zeros(const Holomorphic& g, double r, const ZeroOptions& opt = {});

}  // namespace nevlab::curves
