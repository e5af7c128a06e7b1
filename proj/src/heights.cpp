#include "nevlab/heights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nevlab/parallel.hpp"

namespace nevlab::heights {

RationalPoint::RationalPoint(std::vector<mpz_class> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) {
        throw DomainError("rational point needs at least one coordinate");
    }
    mpz_class g = 0;
    for (const auto& c : coords_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    if (g == 0) {
        throw DomainError("rational point with all coordinates zero");
    }
    const auto first = std::find_if(coords_.begin(), coords_.end(), [](const mpz_class& c) { return c != 0; });
    if (*first < 0) {
        g = -g;
    }
    for (auto& c : coords_) {
        c /= g;
    }
}

RationalPoint RationalPoint::from_affine(const std::vector<mpq_class>& x) {
    std::vector<mpq_class> h{mpq_class(1)};
    h.insert(h.end(), x.begin(), x.end());
    return RationalPoint(curves::primitive_vector(h));
}

std::vector<mpq_class> RationalPoint::affine() const {
    if (coords_[0] == 0) {
        throw DomainError("point at infinity has no affine coordinates");
    }
    std::vector<mpq_class> x;
    for (std::size_t i = 1; i < coords_.size(); ++i) {
        x.emplace_back(coords_[i], coords_[0]);
        x.back().canonicalize();
    }
    return x;
}

std::string RationalPoint::to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        s += (i ? ":" : "") + coords_[i].get_str();
    }
    return s + "]";
}

double log_abs(const mpz_class& n) {
    if (n == 0) {
        return -std::numeric_limits<double>::infinity();
    }
    long e = 0;
    const double m = mpz_get_d_2exp(&e, n.get_mpz_t());
    return std::log(std::abs(m)) + static_cast<double>(e) * std::log(2.0);
}

Height height(const RationalPoint& p) {
    mpz_class sq = 0;
    mpz_class mx = 0;
    for (const auto& c : p.coords()) {
        sq += c * c;
        const mpz_class a = abs(c);
        if (a > mx) {
            mx = a;
        }
    }
    return {0.5 * log_abs(sq), log_abs(mx)};
}

std::string to_string(LiouvilleStatus s) {
    switch (s) {
        case LiouvilleStatus::holds:
            return "holds";
        case LiouvilleStatus::violated:
            return "violated";
        case LiouvilleStatus::vanishing:
            return "vanishing";
    }
    return "?";
}

LiouvilleReport liouville_check(const PolynomialSection& s, const RationalPoint& p, std::optional<double> log_sup) {
    if (s.ambient_dim() != p.ambient_dim()) {
        throw InputError("section and point live in different projective spaces");
    }
    if (!s.integer_coefficients()) {
        throw InputError("the Liouville bound needs integer coefficients");
    }
    LiouvilleReport rep;
    const mpz_class v = s.eval_exact(p.coords());
    if (v == 0) {
        rep.status = LiouvilleStatus::vanishing;
        return rep;
    }
    const double hfs = height(p).fs;
    const double d = s.degree();
    const double ls = log_sup ? *log_sup : std::log(s.sampled_sup());
    rep.log_norm = log_abs(v) - d * hfs;
    rep.rhs = -(d * hfs + std::max(0.0, ls));
    rep.margin = rep.log_norm - rep.rhs;
    // The margin is log|s(p)| + log+ sup, an exact integer log plus a
    // nonnegative term; only rounding can push it below zero.
    rep.status = rep.margin >= -1e-12 * (1.0 + std::abs(rep.rhs)) ? LiouvilleStatus::holds : LiouvilleStatus::violated;
    return rep;
}

bool within_height(double h, double H) {
    return h <= H + 1e-14 * (1.0 + std::abs(H));
}

namespace {

// Node order of w = a/b: height, |a|, sign, b.
bool node_less(const mpq_class& x, const mpq_class& y) {
    const mpz_class ax = abs(x.get_num()), ay = abs(y.get_num());
    const mpz_class hx = ax > x.get_den() ? ax : x.get_den();
    const mpz_class hy = ay > y.get_den() ? ay : y.get_den();
    if (hx != hy) {
        return hx < hy;
    }
    if (ax != ay) {
        return ax < ay;
    }
    if (sgn(x) != sgn(y)) {
        return sgn(x) > sgn(y);
    }
    return x.get_den() < y.get_den();
}

}  // namespace

Enumeration enumerate_points(const curves::EntireCurve& curve, double r, double H,
                             const geometry::DiskSet* exceptional) {
    const curves::RationalLocus* locus = curve.rational_locus();
    if (!locus) {
        throw CapabilityError("curve \"" + curve.name() + "\" has no rational locus");
    }
    if (!(r > 0.0)) {
        throw DomainError("enumerate_points: r must be positive");
    }
    Enumeration out;
    if (H < 0.0) {
        return out;
    }
    const mpz_class B = locus->preimage_height_bound(H);
    if (!B.fits_slong_p() || B > 100000) {
        throw CapabilityError("height budget too large for exhaustive enumeration");
    }
    const long b_max = B.get_si();
    struct Row {
        std::vector<HeightedPoint> in, out;
        std::size_t candidates = 0;
    };
    std::vector<Row> rows(static_cast<std::size_t>(b_max));
    parallel_for(rows.size(), [&](std::size_t idx) {
        const long b = static_cast<long>(idx) + 1;
        Row& row = rows[idx];
        // |a| < r b and |a| <= b_max.
        const long a_lim = std::min(b_max, static_cast<long>(std::ceil(r * static_cast<double>(b))));
        for (long a = -a_lim; a <= a_lim; ++a) {
            if (std::gcd(a, b) != 1 || !(std::abs(static_cast<double>(a) / static_cast<double>(b)) < r)) {
                continue;
            }
            ++row.candidates;
            const mpq_class w(a, b);
            const auto coords = locus->point(w, H);
            if (!coords) {
                continue;
            }
            RationalPoint p(*coords);
            const Height h = height(p);
            if (!within_height(h.fs, H)) {
                continue;
            }
            HeightedPoint hp{std::move(p), w, h.fs, h.max};
            if (exceptional && exceptional->contains(cplx(w.get_d(), 0.0))) {
                row.out.push_back(std::move(hp));
            } else {
                row.in.push_back(std::move(hp));
            }
        }
    });
    for (auto& row : rows) {
        out.candidates += row.candidates;
        std::move(row.in.begin(), row.in.end(), std::back_inserter(out.points));
        std::move(row.out.begin(), row.out.end(), std::back_inserter(out.excluded));
    }
    auto by_node = [](const HeightedPoint& x, const HeightedPoint& y) { return node_less(x.w, y.w); };
    std::sort(out.points.begin(), out.points.end(), by_node);
    std::sort(out.excluded.begin(), out.excluded.end(), by_node);
    return out;
}

}  // namespace nevlab::heights
