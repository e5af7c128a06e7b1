#include "nevlab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nevlab::curves {

int ZeroSearch::total() const {
    int t = 0;
    for (const auto& z : zeros) {
        t += z.multiplicity;
    }
    return t;
}

namespace {

constexpr double kMaxStep = kPi / 4.0;

// Raised when a contour passes through (or numerically onto) a zero.
struct ContourHit {};

class Tracker {
public:
    Tracker(const Holomorphic& g, double scale, const ZeroOptions& opt) : g_(g), scale_(scale), opt_(opt) {}

    cplx value(cplx z) const {
        const Jet j = g_(z);
        if (!std::isfinite(j.value.real()) || !std::isfinite(j.value.imag())) {
            throw ResolutionError("function is not finite at z = (" + std::to_string(z.real()) + ", " +
                                  std::to_string(z.imag()) + ")");
        }
        // Newton distance to the nearest zero.
        if (j.value == 0.0 || std::abs(j.value) < 1e-11 * scale_ * std::abs(j.deriv)) {
            throw ContourHit{};
        }
        return j.value;
    }

    // Total argument change of g along the segment p(t), t in [t0, t1].
    template <class Path>
    double increment(const Path& p, double t0, double t1, cplx g0, cplx g1, int depth) const {
        const double tm = 0.5 * (t0 + t1);
        const cplx gm = value(p(tm));
        const double whole = std::arg(g1 / g0);
        const double left = std::arg(gm / g0);
        const double right = std::arg(g1 / gm);
        if (std::abs(whole) < kMaxStep && std::abs(left) < kMaxStep && std::abs(right) < kMaxStep &&
            std::abs(left + right - whole) < 1e-9) {
            return whole;
        }
        if (depth >= opt_.max_depth) {
            throw ResolutionError("argument tracking lost continuity near z = (" + std::to_string(p(tm).real()) +
                                  ", " + std::to_string(p(tm).imag()) + ")");
        }
        return increment(p, t0, tm, g0, gm, depth + 1) + increment(p, tm, t1, gm, g1, depth + 1);
    }

    template <class Path>
    double path_increment(const Path& p, int pieces) const {
        double total = 0.0;
        cplx prev = value(p(0.0));
        for (int k = 1; k <= pieces; ++k) {
            const double t = static_cast<double>(k) / pieces;
            const cplx cur = value(p(t));
            total += increment(p, static_cast<double>(k - 1) / pieces, t, prev, cur, 0);
            prev = cur;
        }
        return total;
    }

    int circle(double r) const {
        auto p = [r](double t) { return std::polar(r, kTwoPi * t); };
        return to_int(path_increment(p, 64));
    }

    int box(cplx lo, cplx hi) const {
        const cplx c[4] = {lo, cplx(hi.real(), lo.imag()), hi, cplx(lo.real(), hi.imag())};
        double total = 0.0;
        for (int e = 0; e < 4; ++e) {
            const cplx a = c[e];
            const cplx b = c[(e + 1) % 4];
            auto p = [a, b](double t) { return a + (b - a) * t; };
            total += path_increment(p, 4);
        }
        return to_int(total);
    }

private:
    const Holomorphic& g_;
    double scale_;
    const ZeroOptions& opt_;

    static int to_int(double total) {
        const double w = total / kTwoPi;
        const double rw = std::round(w);
        if (std::abs(w - rw) > 1e-3) {
            throw ResolutionError("non-integral winding number " + std::to_string(w));
        }
        return static_cast<int>(rw);
    }
};

struct Box {
    cplx lo;
    cplx hi;
    int winding;
};

// Split fractions tried in turn when a cut passes through a zero.
constexpr double kSplits[] = {0.5 + 1.0 / 64.0, 0.5 - 3.0 / 128.0, 0.5 + 5.0 / 96.0, 0.5 - 7.0 / 80.0,
                              0.5 + 0.1234567, 0.5 - 0.1357911};

void subdivide(const Tracker& tr, const Holomorphic& g, const Box& b, double r, double target,
               std::vector<ZeroRecord>& out) {
    if (b.winding == 0) {
        return;
    }
    // Boxes entirely outside the closed disk hold no zero of interest.
    const double cx = std::clamp(0.0, b.lo.real(), b.hi.real());
    const double cy = std::clamp(0.0, b.lo.imag(), b.hi.imag());
    if (std::hypot(cx, cy) > r * (1.0 + 1e-12)) {
        return;
    }
    const double half_diag = 0.5 * std::abs(b.hi - b.lo);
    if (half_diag <= target) {
        cplx z = 0.5 * (b.lo + b.hi);
        // Multiplicity-aware Newton polish; kept only if it stays in the box.
        cplx w = z;
        bool ok = true;
        for (int it = 0; it < 20; ++it) {
            const Jet j = g(w);
            if (j.value == 0.0) {
                break;
            }
            if (j.deriv == 0.0) {
                ok = false;
                break;
            }
            const cplx step = static_cast<double>(b.winding) * j.value / j.deriv;
            w -= step;
            if (!(w.real() >= b.lo.real() && w.real() <= b.hi.real() && w.imag() >= b.lo.imag() &&
                  w.imag() <= b.hi.imag())) {
                ok = false;
                break;
            }
            if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(w))) {
                break;
            }
        }
        out.push_back({ok ? w : z, b.winding, half_diag});
        return;
    }
    for (const double f : kSplits) {
        const double mx = b.lo.real() + f * (b.hi.real() - b.lo.real());
        const double my = b.lo.imag() + (1.0 - f) * (b.hi.imag() - b.lo.imag());
        const Box kids[4] = {{b.lo, cplx(mx, my), 0},
                             {cplx(mx, b.lo.imag()), cplx(b.hi.real(), my), 0},
                             {cplx(mx, my), b.hi, 0},
                             {cplx(b.lo.real(), my), cplx(mx, b.hi.imag()), 0}};
        Box with[4];
        try {
            int sum = 0;
            for (int k = 0; k < 4; ++k) {
                with[k] = kids[k];
                with[k].winding = tr.box(kids[k].lo, kids[k].hi);
                sum += with[k].winding;
            }
            if (sum != b.winding) {
                throw ResolutionError("child windings do not add up");
            }
        } catch (const ContourHit&) {
            continue;
        }
        for (const auto& k : with) {
            subdivide(tr, g, k, r, target, out);
        }
        return;
    }
    throw ResolutionError("every subdivision of a box crosses a zero");
}

}  // namespace

int winding_number(const Holomorphic& g, double r, const ZeroOptions& opt) {
    if (!(r > 0.0)) {
        throw DomainError("winding_number: r must be positive");
    }
    const Tracker tr(g, r, opt);
    try {
        return tr.circle(r);
    } catch (const ContourHit&) {
        throw PreconditionError("function vanishes on the circle |z| = " + std::to_string(r));
    }
}

int winding_number_nudged(const Holomorphic& g, double& r, int& nudges, const ZeroOptions& opt) {
    const double r0 = r;
    for (;;) {
        try {
            return winding_number(g, r, opt);
        } catch (const PreconditionError&) {
            if (nudges >= opt.max_nudges) {
                throw;
            }
            ++nudges;
            r += 1e-9 * r0;
        }
    }
}

ZeroSearch count_zeros(const Holomorphic& g, double r, const ZeroOptions& opt) {
    ZeroSearch res;
    res.radius_used = r;
    res.winding = winding_number_nudged(g, res.radius_used, res.nudges, opt);
    const double R = res.radius_used;
    const Tracker tr(g, R, opt);
    const double target = opt.enclosure * R;
    // Slightly enlarged, off-centre square around the disk.
    const double pad = 1.0 + 1.0 / 29.0;
    for (const double shift : {0.0123456789, -0.0234567891, 0.0345678912, -0.0456789123}) {
        const cplx off(shift * R, -0.7 * shift * R);
        Box root{cplx(-pad * R, -pad * R) + off, cplx(pad * R, pad * R) + off, 0};
        std::vector<ZeroRecord> found;
        try {
            root.winding = tr.box(root.lo, root.hi);
        } catch (const ContourHit&) {
            continue;
        }
        subdivide(tr, g, root, R, target, found);
        res.zeros.clear();
        for (const auto& z : found) {
            if (std::abs(z.location) < R) {
                res.zeros.push_back(z);
            }
        }
        std::sort(res.zeros.begin(), res.zeros.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
            return a.location.real() < b.location.real() ||
                   (a.location.real() == b.location.real() && a.location.imag() < b.location.imag());
        });
        if (res.total() != res.winding) {
            throw ResolutionError("zeros found inside the disk (" + std::to_string(res.total()) +
                                  ") disagree with the winding number (" + std::to_string(res.winding) + ")");
        }
        return res;
    }
    throw ResolutionError("could not place a root box avoiding zeros");
}

}  // namespace nevlab::curves
