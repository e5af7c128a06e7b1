#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nevlab/entire_curve.hpp"
#include "nevlab/zeros.hpp"

using namespace nevlab;
using namespace nevlab::curves;

TEST_CASE("double zero at the origin") {
    const ZeroSearch zs = count_zeros([](cplx z) { return Jet{z * z, 2.0 * z}; }, 1.0);
    REQUIRE(zs.zeros.size() == 1);
    CHECK(zs.zeros[0].multiplicity == 2);
    CHECK(std::abs(zs.zeros[0].location) < 1e-8);
    CHECK(zs.winding == 2);
}

TEST_CASE("zeros of exp(z) - 1") {
    const ZeroSearch zs = count_zeros([](cplx z) { return Jet{std::exp(z) - 1.0, std::exp(z)}; }, 7.0);
    REQUIRE(zs.zeros.size() == 3);
    CHECK(zs.total() == 3);
    CHECK(zs.winding == 3);
    for (const cplx want : {cplx(0.0, -kTwoPi), cplx(0.0), cplx(0.0, kTwoPi)}) {
        const auto hit = std::count_if(zs.zeros.begin(), zs.zeros.end(),
                                       [&](const ZeroRecord& z) { return std::abs(z.location - want) < 1e-8 * 7.0; });
        CHECK(hit == 1);
    }
    for (const auto& z : zs.zeros) {
        CHECK(z.multiplicity == 1);
        CHECK(z.enclosure_radius <= 1e-8 * 7.0);
    }
}

TEST_CASE("zero on the circle triggers a nudge") {
    const auto g = [](cplx z) { return Jet{z - 1.0, 1.0}; };
    CHECK_THROWS_AS(winding_number(g, 1.0), PreconditionError);
    const ZeroSearch zs = count_zeros(g, 1.0);
    CHECK(zs.nudges >= 1);
    CHECK(zs.radius_used > 1.0);
    CHECK(zs.total() == 1);
}

TEST_CASE("pulled back sections on polynomial curves") {
    const EntireCurve c = affine_curve({"z^2 + 1", "z^3 - z"});
    const PolynomialSection s = PolynomialSection::parse("x1*x2 - 3*x1 + 2", 2, true);
    const Pullback pb(c, s);
    // Composed polynomial has degree 2 + 3 = 5.
    const ZeroSearch zs = count_zeros([&](cplx z) { return pb.eval(z); }, 50.0);
    CHECK(zs.total() == 5);
    CHECK(zs.total() == zs.winding);
    for (const auto& z : zs.zeros) {
        CHECK(std::abs(pb.eval(z.location).value) < 1e-6);
    }
}

TEST_CASE("clustered zeros") {
    const auto g = [](cplx z) {
        const cplx a = z - 0.5, b = z - 0.5 - 1e-4, c = z + cplx(0, 2);
        return Jet{a * b * c * c, b * c * c + a * c * c + 2.0 * a * b * c};
    };
    const ZeroSearch zs = count_zeros(g, 3.0);
    CHECK(zs.total() == 4);
    CHECK(zs.zeros.size() == 3);
    for (std::size_t i = 0; i < zs.zeros.size(); ++i) {
        for (std::size_t j = i + 1; j < zs.zeros.size(); ++j) {
            CHECK(std::abs(zs.zeros[i].location - zs.zeros[j].location) >
                  zs.zeros[i].enclosure_radius + zs.zeros[j].enclosure_radius);
        }
    }
}
