#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "nevlab/entire_curve.hpp"
#include "oracles.hpp"

using namespace nevlab;
using namespace nevlab::curves;

namespace {

const NewtonSeriesFunction& newton_of(const EntireCurve& c) {
    return dynamic_cast<const NewtonSeriesFunction&>(*c.components()[1]);
}

}  // namespace

TEST_CASE("closed form curve evaluation") {
    const EntireCurve id = identity_curve();
    const CurvePoint p = id.evaluate(2.0, 1e-14);
    CHECK(p.values[0] == cplx(1.0));
    CHECK(p.values[1] == cplx(2.0));

    const EntireCurve ex = affine_curve({"z", "exp(z)"}, "exp");
    const CurvePoint q = ex.evaluate(0.0, 1e-12);
    CHECK(q.values[0] == cplx(0.0));
    CHECK(q.values[1] == cplx(1.0));
    CHECK_THROWS_AS(affine_curve({"z", "exp(z"}), InputError);
}

TEST_CASE("node enumeration") {
    const auto ref = oracle::nodes(12);
    const auto got = rational_nodes(12);
    REQUIRE(got.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(got[i] == ref[i]);
        CHECK(rational_node_index(ref[i]) == static_cast<long>(i));
    }
    CHECK(rational_node_count(12) == static_cast<long>(ref.size()));
}

TEST_CASE("interpolation curve values at nodes") {
    const EntireCurve c = build_rational_curve(6);
    const NewtonSeriesFunction& f = newton_of(c);
    CHECK(f.exact_at_index(1) == mpq_class(1));
    const auto nodes = oracle::nodes(6);
    for (long m = 1; m <= static_cast<long>(nodes.size()); ++m) {
        const mpq_class want = oracle::finite_sum(nodes, m, 2);
        CHECK(f.exact_at_index(m) == want);
        const auto viaq = f.exact_at(nodes[static_cast<std::size_t>(m - 1)]);
        REQUIRE(viaq);
        CHECK(*viaq == want);
        const FunctionValue v = f.eval(cplx(nodes[static_cast<std::size_t>(m - 1)].get_d()), 1e-12);
        CHECK(std::abs(v.value - want.get_d()) <= 1e-12);
    }
}

TEST_CASE("high precision node values") {
    const EntireCurve c = build_rational_curve(5);
    const NewtonSeriesFunction& f = newton_of(c);
    const auto nodes = oracle::nodes(5);
    for (long m = 1; m <= static_cast<long>(nodes.size()); ++m) {
        const mpq_class exact = f.exact_at_index(m);
        MpComplex z{mpf_class(nodes[static_cast<std::size_t>(m - 1)], 256), mpf_class(0, 256)};
        const MpComplex v = f.eval_hp(z, 1e-30, 256);
        mpf_class diff(v.re - mpf_class(exact, 256), 256);
        CHECK(std::abs(diff.get_d()) <= 1e-30);
    }
}

TEST_CASE("exact values for small rationals") {
    const EntireCurve c = build_rational_curve(8);
    const NewtonSeriesFunction& f = newton_of(c);
    for (const mpq_class q : {mpq_class(0), mpq_class(1, 2), mpq_class(-3, 4), mpq_class(7, 5)}) {
        const mpq_class v = f.exact_at_index(rational_node_index(q) + 1);
        const mpz_class size = abs(v.get_num()) > v.get_den() ? mpz_class(abs(v.get_num())) : v.get_den();
        const auto hit = f.exact_at_if_small(q, size);
        INFO(q.get_str(), " -> ", v.get_str());
        REQUIRE(hit);
        CHECK(*hit == v);
        if (size > 1) {
            CHECK_FALSE(f.exact_at_if_small(q, size - 1));
        }
    }
}

TEST_CASE("halving tolerance is consistent") {
    const EntireCurve c = build_rational_curve(6);
    const NewtonSeriesFunction& f = newton_of(c);
    for (const cplx z : {cplx(0.3, 0.2), cplx(-3.0, 1.0), cplx(10.0, -5.0)}) {
        double tol = 1e-4;
        cplx prev = f.eval(z, tol).value;
        for (int k = 0; k < 20; ++k) {
            const cplx next = f.eval(z, tol / 2).value;
            CHECK(std::abs(next - prev) <= tol);
            prev = next;
            tol /= 2;
        }
    }
}

TEST_CASE("interpolation curve satisfies no low degree relation") {
    const EntireCurve c = build_rational_curve(6);
    const EntireCurve para = affine_curve({"z", "z^2 - 3*z"});
    auto smallest_sv = [](const EntireCurve& curve) {
        Eigen::MatrixXd M(100, 15);
        for (int i = 0; i < 100; ++i) {
            const cplx z = std::polar(1.0 + 19.0 * i / 99.0, 2.39996 * i);
            const CurvePoint p = curve.evaluate(z, 0.0);
            int col = 0;
            for (int a = 0; a <= 4; ++a) {
                for (int b = 0; a + b <= 4; ++b) {
                    const cplx v = std::pow(p.values[0], a) * std::pow(p.values[1], b);
                    M(i, col++) = v.real() + 0.5 * v.imag();
                }
            }
        }
        for (int j = 0; j < M.cols(); ++j) {
            M.col(j).normalize();
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        return svd.singularValues()(M.cols() - 1);
    };
    CHECK(smallest_sv(para) < 1e-12);
    CHECK(smallest_sv(c) > 1e-6);
}

TEST_CASE("pullback values and norms") {
    const EntireCurve id = identity_curve();
    const Pullback pb(id, PolynomialSection::parse("x1", 1, false));
    CHECK(pb.eval(3.0).value == cplx(3.0));
    CHECK(pb.norm(3.0) == doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-15));

    const EntireCurve pe = projective_curve({"1", "z", "exp(z)"});
    const Pullback pz(pe, PolynomialSection::parse("x2 - x0", 2, false));
    CHECK(std::abs(pz.eval(0.0).value) == 0.0);
    CHECK_THROWS_AS(Pullback(id, PolynomialSection::parse("x2 - x0", 2, false)), InputError);
    CHECK_THROWS(PolynomialSection::parse("0*x1", 1, false));
}

TEST_CASE("section norm is invariant under scaling") {
    const PolynomialSection s = PolynomialSection::parse("x0^2 - 3*x1*x2 + x2^2/2", 2, false);
    for (int i = 0; i < 50; ++i) {
        const auto x = fs_sample_point(2, static_cast<std::uint64_t>(i));
        const cplx lam = std::polar(0.1 + 0.37 * i, 0.7 * i);
        std::vector<cplx> y = x;
        for (auto& v : y) {
            v *= lam;
        }
        CHECK(s.norm_at(y) == doctest::Approx(s.norm_at(x)).epsilon(1e-12));
    }
}
