#include <doctest.h>

#include <cmath>
#include <random>

#include "nevlab/disk_geometry.hpp"

using namespace nevlab;
using namespace nevlab::geometry;

namespace {

// Independent pseudo-hyperbolic distance via the Moebius map of the unit disk.
double ref_pseudo(double r1, cplx z, cplx w) {
    const cplx a = z / r1;
    const cplx b = w / r1;
    return std::abs((a - b) / (1.0 - std::conj(b) * a));
}

}  // namespace

TEST_CASE("green kernel values") {
    CHECK(green(GreenKernel(2.0, 1.0), 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(std::isinf(green(GreenKernel(2.0, 1.0), cplx(1.0, 0.0))));
    CHECK_THROWS_AS(green(GreenKernel(1.0, 0.0), cplx(1.5, 0.0)), DomainError);
    CHECK_THROWS_AS(GreenKernel(1.0, cplx(1.0, 0.0)), DomainError);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const double r = 0.1 + 5.0 * u(rng);
        const cplx w0 = std::polar(0.99 * r * std::sqrt(u(rng)), kTwoPi * u(rng));
        const GreenKernel k(r, w0);
        CHECK(green(k, std::polar(r, kTwoPi * u(rng))) < 1e-12);
        const cplx z = std::polar(r * std::sqrt(u(rng)), kTwoPi * u(rng));
        CHECK(green(k, z) >= 0.0);
        const cplx z0 = std::polar(r * (0.01 + 0.99 * u(rng)), kTwoPi * u(rng));
        CHECK(std::abs(green(GreenKernel(r, 0.0), z0) - std::log(r / std::abs(z0))) < 1e-14);
    }
}

TEST_CASE("poisson weight") {
    const GreenKernel origin(3.0, 0.0);
    for (int j = 0; j < 16; ++j) {
        CHECK(poisson_weight(origin, 0.4 * j) == doctest::Approx(1.0).epsilon(1e-15));
    }
    for (double r : {0.5, 1.0, 7.0}) {
        const GreenKernel k(r, cplx(0.3 * r * std::cos(1.1), 0.3 * r * std::sin(1.1)));
        const int n = 4096;
        double mean = 0.0;
        double peak = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p = poisson_weight(k, kTwoPi * j / n);
            CHECK(p > 0.0);
            mean += p / n;
            peak = std::max(peak, p);
        }
        CHECK(std::abs(mean - 1.0) < 1e-10);
        CHECK(peak == doctest::Approx((1.0 + 0.3) / (1.0 - 0.3)).epsilon(1e-6));
        CHECK(poisson_weight(k, 1.1) == doctest::Approx(1.3 / 0.7).epsilon(1e-12));
    }
}

TEST_CASE("pseudo-hyperbolic distance") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r1 = 2.5;
    auto pt = [&] { return std::polar(r1 * std::sqrt(u(rng)) * 0.999, kTwoPi * u(rng)); };
    for (int t = 0; t < 1000; ++t) {
        const cplx a = pt();
        const cplx b = pt();
        const cplx c = pt();
        const double ab = hyperbolic_distance(r1, a, b);
        const double ac = hyperbolic_distance(r1, a, c);
        const double cb = hyperbolic_distance(r1, c, b);
        CHECK(ab < 1.0);
        CHECK(std::abs(ab - hyperbolic_distance(r1, b, a)) < 1e-12);
        CHECK(std::abs(ab - ref_pseudo(r1, a, b)) < 1e-12);
        CHECK(ab <= (ac + cb) / (1.0 + ac * cb) + 1e-12);
        CHECK(hyperbolic_distance(r1, a, a) == 0.0);
    }
    CHECK(hyperbolic_distance(r1, 0.0, cplx(1.0, 1.0)) == doctest::Approx(std::sqrt(2.0) / r1));
    CHECK_THROWS_AS(hyperbolic_distance(1.0, 0.0, cplx(1.0, 0.0)), DomainError);
}

TEST_CASE("diam") {
    CHECK(diam(1.0, {}) == 0.0);
    CHECK(diam(1.0, {cplx(0.3, 0.1)}) == 0.0);
    CHECK(diam(2.0, {0.0, cplx(0.5, 0.5)}) == doctest::Approx(std::abs(cplx(0.5, 0.5)) / 2.0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int t = 0; t < 50; ++t) {
        std::vector<cplx> pts;
        for (int k = 0; k < 5; ++k) {
            pts.emplace_back(u(rng), u(rng));
        }
        double brute = 0.0;
        for (const auto& p : pts) {
            for (const auto& q : pts) {
                brute = std::max(brute, ref_pseudo(1.0, p, q));
            }
        }
        CHECK(diam(1.0, pts) == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("pseudo-hyperbolic balls are Euclidean disks") {
    const double r1 = 3.0;
    const cplx a(1.2, -0.7);
    const double s = 0.3;
    const Disk d = pseudo_hyperbolic_ball(r1, a, s);
    for (int k = 0; k < 100; ++k) {
        const cplx z = d.center + std::polar(d.radius, kTwoPi * k / 100.0);
        CHECK(ref_pseudo(r1, z, a) == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("disk set json and sums") {
    DiskSet s(DiskLabel::exceptional);
    s.add({1.0, 2.0}, 0.5);
    s.add({-1.0, 0.0}, 0.25);
    CHECK(s.radii_sum() == 0.75);
    CHECK(s.contains({1.0, 2.4}));
    CHECK_FALSE(s.contains({0.0, 0.0}));
    CHECK_THROWS_AS(s.add(0.0, 0.0), DomainError);
    const DiskSet t = DiskSet::from_json(s.to_json());
    CHECK(t.label() == DiskLabel::exceptional);
    CHECK(t.size() == 2);
    CHECK(t.radii_sum() == 0.75);
    CHECK(s.to_json()["label"] == "exceptional");
}

TEST_CASE("cover_disk") {
    CHECK(covering_bound(0.5, 1.0) == 21);
    CHECK(covering_bound(0.3, 0.5) == 113);
    CHECK_THROWS_AS(cover_disk(1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(cover_disk(1.0, 1.0, 0.0), DomainError);
    struct Case {
        double r, eps, alpha;
    };
    for (const Case c : {Case{1.0, 1.0, 0.5}, Case{3.0, 0.5, 0.3}, Case{0.2, 2.0, 0.8}}) {
        const DiskSet cover = cover_disk(c.r, c.eps, c.alpha);
        CHECK(cover.label() == DiskLabel::covering);
        const CoverageReport rep = verify_covering(cover, c.r, c.eps, c.alpha);
        CHECK(rep.uncovered == 0);
        CHECK(rep.balls <= rep.bound);
        CHECK(rep.max_sampled_diam <= c.alpha);
        // Independent membership oracle on an offset Cartesian grid.
        int missed = 0;
        for (int i = 0; i <= 120; ++i) {
            for (int j = 0; j <= 120; ++j) {
                const cplx z(c.r * (-1.0 + 2.0 * i / 120.0), c.r * (-1.0 + 2.0 * j / 120.0));
                if (std::abs(z) > c.r) {
                    continue;
                }
                bool in = false;
                for (const auto& d : cover.disks()) {
                    if (std::abs(z - d.center) <= d.radius) {
                        in = true;
                        break;
                    }
                }
                missed += in ? 0 : 1;
            }
        }
        CHECK(missed == 0);
    }
}

TEST_CASE("cartan potential") {
    const AtomicMeasure one({{0.0, 1.0}});
    CHECK(cartan_potential(one, cplx(0.5, 0.0)) == doctest::Approx(std::log(0.5)));
    CHECK(std::isinf(cartan_potential(one, 0.0)));
    const AtomicMeasure two({{1.0, 1.0}, {-1.0, 1.0}});
    CHECK(std::abs(cartan_potential(two, 0.0)) < 1e-15);
    const AtomicMeasure two3({{1.0, 3.0}, {-1.0, 3.0}});
    CHECK(cartan_potential(two3, cplx(0.2, 0.7)) ==
          doctest::Approx(3.0 * cartan_potential(two, cplx(0.2, 0.7))));
    CHECK(two3.total_mass() == 6.0);
    CHECK_THROWS_AS(AtomicMeasure({{0.0, -1.0}}), DomainError);
}

TEST_CASE("cartan exceptional set") {
    CHECK_THROWS_AS(cartan_exceptional(AtomicMeasure({{0.0, 1.0}}), 1.0), DomainError);
    CHECK_THROWS_AS(cartan_exceptional(AtomicMeasure({{0.0, 0.0}}), 0.5), DomainError);

    const DiskSet single = cartan_exceptional(AtomicMeasure({{0.0, 1.0}}), 0.1);
    REQUIRE(single.size() == 1);
    CHECK(single.radii_sum() <= 0.5);
    CHECK(std::abs(single.disks()[0].center) < 1e-12);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Atom> atoms;
    for (int k = 0; k < 50; ++k) {
        atoms.push_back({cplx(u(rng), u(rng)), 0.0});
    }
    double total = 0.0;
    for (auto& a : atoms) {
        a.mass = u(rng);
        total += a.mass;
    }
    for (auto& a : atoms) {
        a.mass /= total;
    }
    const AtomicMeasure mu(atoms);
    const DiskSet e = cartan_exceptional(mu, 0.05);
    CHECK(e.label() == DiskLabel::exceptional);
    const CartanReport rep = verify_cartan(mu, 0.05, e);
    CHECK(rep.radii_sum <= 0.25);
    CHECK(rep.exterior > 5000);
    CHECK(rep.violations == 0);

    // Doubling the masses keeps the same set valid for twice the threshold.
    std::vector<Atom> doubled = atoms;
    for (auto& a : doubled) {
        a.mass *= 2.0;
    }
    const CartanReport rep2 = verify_cartan(AtomicMeasure(doubled), 0.05, e);
    CHECK(rep2.violations == 0);
    CHECK(rep2.min_margin == doctest::Approx(2.0 * rep.min_margin));
}
