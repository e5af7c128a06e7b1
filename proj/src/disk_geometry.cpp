#include "nevlab/disk_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nevlab/quadrature.hpp"

namespace nevlab::geometry {

GreenKernel::GreenKernel(double r, cplx w0) : radius(r), base(w0) {
    if (!(r > 0.0) || !(std::abs(w0) < r)) {
        throw DomainError("GreenKernel requires |w0| < r");
    }
}

double green(const GreenKernel& k, cplx z) {
    const double r = k.radius;
    if (std::abs(z) > r * (1.0 + 1e-14)) {
        throw DomainError("green: |z| > r");
    }
    if (z == k.base) {
        return std::numeric_limits<double>::infinity();
    }
    const double num = std::abs(r * r - z * std::conj(k.base));
    const double den = r * std::abs(z - k.base);
    return std::max(0.0, std::log(num / den));
}

double poisson_weight(const GreenKernel& k, double theta) {
    const double r = k.radius;
    if (!(std::abs(k.base) < r)) {
        throw DomainError("poisson_weight: |w0| >= r");
    }
    const cplx z = std::polar(r, theta);
    const double d = std::abs(z - k.base);
    return (r * r - std::norm(k.base)) / (d * d);
}

double hyperbolic_distance(double r1, cplx z, cplx w) {
    if (!(std::abs(z) < r1) || !(std::abs(w) < r1)) {
        throw DomainError("hyperbolic_distance: points must lie in the open disk");
    }
    return std::abs(r1 * (z - w)) / std::abs(r1 * r1 - z * std::conj(w));
}

double diam(double r1, const std::vector<cplx>& points) {
    double d = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            d = std::max(d, hyperbolic_distance(r1, points[i], points[j]));
        }
    }
    if (points.size() == 1) {
        hyperbolic_distance(r1, points[0], points[0]);  // domain check
    }
    return d;
}

std::string to_string(DiskLabel label) {
    return label == DiskLabel::covering ? "covering" : "exceptional";
}

void DiskSet::add(cplx center, double radius) {
    if (!(radius > 0.0)) {
        throw DomainError("DiskSet radii must be positive");
    }
    disks_.push_back({center, radius});
}

double DiskSet::radii_sum() const {
    double s = 0.0;
    for (const auto& d : disks_) {
        s += d.radius;
    }
    return s;
}

bool DiskSet::contains(cplx z) const {
    return std::any_of(disks_.begin(), disks_.end(),
                       [&](const Disk& d) { return std::abs(z - d.center) <= d.radius; });
}

nlohmann::json DiskSet::to_json() const {
    nlohmann::json j;
    j["label"] = to_string(label_);
    j["disks"] = nlohmann::json::array();
    for (const auto& d : disks_) {
        j["disks"].push_back({{"re", d.center.real()}, {"im", d.center.imag()}, {"radius", d.radius}});
    }
    return j;
}

DiskSet DiskSet::from_json(const nlohmann::json& j) {
    const std::string label = j.at("label").get<std::string>();
    if (label != "covering" && label != "exceptional") {
        throw InputError("unknown DiskSet label: " + label);
    }
    DiskSet set(label == "covering" ? DiskLabel::covering : DiskLabel::exceptional);
    for (const auto& d : j.at("disks")) {
        set.add({d.at("re").get<double>(), d.at("im").get<double>()}, d.at("radius").get<double>());
    }
    return set;
}

Disk pseudo_hyperbolic_ball(double r1, cplx a, double s) {
    const cplx u = a / r1;
    const double s2 = s * s;
    const double den = 1.0 - s2 * std::norm(u);
    return {r1 * u * (1.0 - s2) / den, r1 * s * (1.0 - std::norm(u)) / den};
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> a) : atoms(std::move(a)) {
    for (const auto& at : atoms) {
        if (!(at.mass >= 0.0)) {
            throw DomainError("atomic measure masses must be nonnegative");
        }
    }
}

double AtomicMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) {
        m += a.mass;
    }
    return m;
}

std::size_t covering_bound(double alpha, double epsilon) {
    return static_cast<std::size_t>(std::ceil(5.0 / (alpha * alpha * epsilon))) + 1;
}

namespace {

void check_cover_args(double r, double epsilon, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("cover_disk: alpha must lie in (0,1)");
    }
    if (!(epsilon > 0.0) || !(r > 0.0)) {
        throw DomainError("cover_disk: r and epsilon must be positive");
    }
}

// Largest angular offset at which a point of hyperbolic radius rho is within
// hyperbolic distance h of a centre at hyperbolic radius c; negative if none.
double half_angle(double c, double rho, double h) {
    if (c == 0.0) {
        return rho <= h ? kPi : -1.0;
    }
    const double x = (std::cosh(c) * std::cosh(rho) - std::cosh(h)) / (std::sinh(c) * std::sinh(rho));
    if (x > 1.0) {
        return -1.0;
    }
    if (x <= -1.0) {
        return kPi;
    }
    return std::acos(x);
}

struct Ring {
    double c = 0.0;
    std::size_t k = 0;
};

// Best ring covering hyperbolic radii [a, b]: centre radius and ball count.
Ring best_ring(double a, double b, double h) {
    constexpr int kCentreSteps = 192;
    double phi = -1.0;
    double c_best = 0.0;
    for (int ic = 0; ic <= kCentreSteps; ++ic) {
        const double c = a + (b + h - a) * ic / kCentreSteps;
        const double p = std::min(half_angle(c, a, h), half_angle(c, b, h));
        if (p > phi) {
            phi = p;
            c_best = c;
        }
    }
    if (phi <= 0.0) {
        return {};
    }
    return {c_best, static_cast<std::size_t>(std::max(1.0, std::ceil(kPi / phi * (1.0 + 1e-9))))};
}

// Concentric rings in the unit model; returns ball centres as (hyperbolic
// radius, angle). Ring boundaries live on a grid of step 2h/W and the ring
// sequence minimising the total ball count is found by dynamic programming.
std::vector<std::pair<double, double>> ring_centres(double region, double h) {
    std::vector<std::pair<double, double>> centres{{0.0, 0.0}};
    if (h >= region) {
        return centres;
    }
    constexpr int kWidthSteps = 48;
    const double step = 2.0 * h / kWidthSteps;
    const auto states = static_cast<std::size_t>(std::ceil((region - h) / step));
    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
    // cost[m]: fewest balls covering [h + m step, region]; choice[m]: next state.
    std::vector<std::size_t> cost(states + 1, kInf);
    std::vector<std::size_t> choice(states + 1, states);
    std::vector<Ring> ring(states + 1);
    cost[states] = 0;
    for (std::size_t m = states; m-- > 0;) {
        const double a = h + static_cast<double>(m) * step;
        for (int iw = 1; iw <= kWidthSteps; ++iw) {
            const std::size_t next = std::min(states, m + static_cast<std::size_t>(iw));
            const double b = next == states ? region : h + static_cast<double>(next) * step;
            if (cost[next] == kInf) {
                continue;
            }
            const Ring rg = best_ring(a, b, h);
            if (rg.k == 0) {
                continue;
            }
            if (rg.k + cost[next] < cost[m]) {
                cost[m] = rg.k + cost[next];
                choice[m] = next;
                ring[m] = rg;
            }
            if (next == states) {
                break;
            }
        }
    }
    if (cost[0] == kInf) {
        throw PrecisionError("cover_disk: ring search failed");
    }
    for (std::size_t m = 0; m != states; m = choice[m]) {
        const Ring& rg = ring[m];
        for (std::size_t j = 0; j < rg.k; ++j) {
            centres.emplace_back(rg.c, kTwoPi * static_cast<double>(j) / static_cast<double>(rg.k));
        }
    }
    return centres;
}

// Greedy set cover of a polar target grid by balls centred on a candidate grid.
std::vector<cplx> greedy_centres(double r, double r1, double s) {
    std::vector<cplx> targets;
    constexpr int kT = 200;
    for (int i = 0; i < kT; ++i) {
        const double rho = r * i / (kT - 1);
        const int nth = i == 0 ? 1 : kT;
        for (int j = 0; j < nth; ++j) {
            targets.push_back(std::polar(rho, kTwoPi * j / nth));
        }
    }
    for (int j = 0; j < 4 * kT; ++j) {
        targets.push_back(std::polar(r, kTwoPi * (j + 0.5) / (4 * kT)));
    }
    std::vector<cplx> candidates;
    constexpr int kC = 48;
    for (int i = 0; i < kC; ++i) {
        const double rho = r * i / (kC - 1);
        const int nth = i == 0 ? 1 : 2 * kC;
        for (int j = 0; j < nth; ++j) {
            candidates.push_back(std::polar(rho, kTwoPi * (j + 0.5 * (i % 2)) / nth));
        }
    }
    std::vector<bool> done(targets.size(), false);
    std::size_t remaining = targets.size();
    std::vector<cplx> chosen;
    while (remaining > 0) {
        std::size_t best = 0;
        std::size_t best_gain = 0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            std::size_t gain = 0;
            for (std::size_t t = 0; t < targets.size(); ++t) {
                if (!done[t] && hyperbolic_distance(r1, targets[t], candidates[c]) <= s) {
                    ++gain;
                }
            }
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        if (best_gain == 0) {
            throw PrecisionError("cover_disk: greedy cover stalled");
        }
        chosen.push_back(candidates[best]);
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (!done[t] && hyperbolic_distance(r1, targets[t], candidates[best]) <= s) {
                done[t] = true;
                --remaining;
            }
        }
    }
    return chosen;
}

}  // namespace

DiskSet cover_disk(double r, double epsilon, double alpha) {
    check_cover_args(r, epsilon, alpha);
    const double r1 = (1.0 + epsilon) * r;
    // A pseudo-hyperbolic ball of radius s has diameter 2s/(1+s^2).
    const double s = (1.0 - std::sqrt(1.0 - alpha * alpha)) / alpha * (1.0 - 1e-6);
    const double h = 2.0 * std::atanh(s);
    const double region = 2.0 * std::atanh(1.0 / (1.0 + epsilon));

    DiskSet cover(DiskLabel::covering);
    const auto rings = ring_centres(region, h);
    if (rings.size() <= covering_bound(alpha, epsilon)) {
        for (const auto& [c, theta] : rings) {
            const Disk d = pseudo_hyperbolic_ball(r1, r1 * std::polar(std::tanh(c / 2.0), theta), s);
            cover.add(d.center, d.radius);
        }
        return cover;
    }
    for (const cplx& c : greedy_centres(r, r1, s)) {
        const Disk d = pseudo_hyperbolic_ball(r1, c, s);
        cover.add(d.center, d.radius);
    }
    return cover;
}

CoverageReport verify_covering(const DiskSet& cover, double r, double epsilon, double alpha,
                               std::size_t grid) {
    check_cover_args(r, epsilon, alpha);
    const double r1 = (1.0 + epsilon) * r;
    CoverageReport rep;
    rep.balls = cover.size();
    rep.bound = covering_bound(alpha, epsilon);
    for (std::size_t i = 0; i < grid; ++i) {
        const double rho = r * static_cast<double>(i) / static_cast<double>(grid - 1) * (1.0 - 1e-12);
        for (std::size_t j = 0; j < grid; ++j) {
            const cplx z = std::polar(rho, kTwoPi * static_cast<double>(j) / static_cast<double>(grid));
            ++rep.grid_points;
            if (!cover.contains(z)) {
                ++rep.uncovered;
            }
        }
    }
    for (const auto& d : cover.disks()) {
        std::vector<cplx> boundary;
        for (int k = 0; k < 64; ++k) {
            boundary.push_back(d.center + std::polar(d.radius, kTwoPi * k / 64.0));
        }
        rep.max_sampled_diam = std::max(rep.max_sampled_diam, diam(r1, boundary));
    }
    return rep;
}

double cartan_potential(const AtomicMeasure& mu, cplx z) {
    double v = 0.0;
    for (const auto& a : mu.atoms) {
        if (a.mass == 0.0) {
            continue;
        }
        if (z == a.location) {
            return -std::numeric_limits<double>::infinity();
        }
        v += a.mass * std::log(std::abs(z - a.location));
    }
    return v;
}

namespace {

struct Best {
    double mass = 0.0;
    cplx center{};
};

// Largest uncovered mass in a closed disk of radius R. An optimal disk can be
// translated until an atom lies on its boundary, so it suffices to rotate a
// disk around each atom and sweep the angular intervals of the others.
Best max_mass(const std::vector<Atom>& atoms, const std::vector<char>& covered, double R) {
    Best best;
    std::vector<std::pair<double, double>> events;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (covered[i] || atoms[i].mass == 0.0) {
            continue;
        }
        const cplx zi = atoms[i].location;
        double base = atoms[i].mass;
        events.clear();
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            if (j == i || covered[j] || atoms[j].mass == 0.0) {
                continue;
            }
            const cplx dz = atoms[j].location - zi;
            const double d = std::abs(dz);
            if (d == 0.0) {
                base += atoms[j].mass;
                continue;
            }
            if (d > 2.0 * R) {
                continue;
            }
            double start = std::arg(dz) - std::acos(std::min(1.0, d / (2.0 * R)));
            if (start < 0.0) {
                start += kTwoPi;
            }
            const double len = 2.0 * std::acos(std::min(1.0, d / (2.0 * R)));
            const double m = atoms[j].mass;
            events.emplace_back(start, m);
            events.emplace_back(start + len, -m);
            events.emplace_back(start + kTwoPi, m);
            events.emplace_back(start + kTwoPi + len, -m);
        }
        // Entries sort before exits at equal angles: the disks are closed.
        std::sort(events.begin(), events.end(), [](const auto& x, const auto& y) {
            return x.first < y.first || (x.first == y.first && x.second > y.second);
        });
        double run = 0.0;
        double best_here = 0.0;
        double best_angle = 0.0;
        for (const auto& [angle, m] : events) {
            run += m;
            if (run > best_here) {
                best_here = run;
                best_angle = angle;
            }
        }
        if (base + best_here > best.mass) {
            best.mass = base + best_here;
            best.center = events.empty() ? zi : zi + std::polar(R, best_angle);
        }
    }
    return best;
}

}  // namespace

DiskSet cartan_exceptional(const AtomicMeasure& mu, double H) {
    if (!(H > 0.0 && H < 1.0)) {
        throw DomainError("cartan_exceptional: H must lie in (0,1)");
    }
    const double M = mu.total_mass();
    if (!(M > 0.0)) {
        throw DomainError("cartan_exceptional: total mass must be positive");
    }
    // Doubled selection radii sum to at most 2 H' = 5H; the small shrink
    // absorbs the membership tolerance below.
    const double Hp = 2.5 * H * (1.0 - 1e-8);
    constexpr double kTol = 1e-9;
    const auto& atoms = mu.atoms;
    std::vector<char> covered(atoms.size(), 0);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        covered[i] = atoms[i].mass == 0.0;
    }
    DiskSet out(DiskLabel::exceptional);
    double remaining = M;
    double rho = M * Hp / M;
    while (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
        rho = std::min(rho, remaining * Hp / M);
        Best b = max_mass(atoms, covered, rho);
        // Decreasing fixpoint iteration to the largest rho whose best disk
        // holds at least M rho / H' of the remaining mass.
        while (b.mass < M * rho / Hp * (1.0 - 1e-12)) {
            rho = b.mass * Hp / M;
            b = max_mass(atoms, covered, rho);
        }
        const double R = rho * (1.0 + kTol);
        double taken = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (!covered[i] && std::abs(atoms[i].location - b.center) <= R) {
                covered[i] = 1;
                taken += atoms[i].mass;
            }
        }
        if (taken == 0.0) {
            throw PrecisionError("cartan_exceptional: selection made no progress");
        }
        remaining -= taken;
        out.add(b.center, 2.0 * R);
    }
    return out;
}

CartanReport verify_cartan(const AtomicMeasure& mu, double H, const DiskSet& exceptional,
                           std::size_t samples) {
    CartanReport rep;
    rep.radii_sum = exceptional.radii_sum();
    rep.radii_bound = 5.0 * H;
    rep.samples = samples;
    const double M = mu.total_mass();
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& a : mu.atoms) {
        xmin = std::min(xmin, a.location.real());
        xmax = std::max(xmax, a.location.real());
        ymin = std::min(ymin, a.location.imag());
        ymax = std::max(ymax, a.location.imag());
    }
    const cplx centre{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    double radius = 0.0;
    for (const auto& a : mu.atoms) {
        radius = std::max(radius, std::abs(a.location - centre));
    }
    radius = std::max(radius, H);
    const double threshold = M * std::log(H);
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        const cplx z = quadrature::halton_disk_point(i, centre, radius);
        if (exceptional.contains(z)) {
            continue;
        }
        ++rep.exterior;
        const double margin = cartan_potential(mu, z) - threshold;
        rep.min_margin = std::min(rep.min_margin, margin);
        if (!(margin > 0.0)) {
            ++rep.violations;
        }
    }
    return rep;
}

}  // namespace nevlab::geometry
