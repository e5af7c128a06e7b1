#include <doctest.h>

#include <cmath>

#include "nevlab/counting.hpp"
#include "nevlab/nevanlinna.hpp"
#include "oracles.hpp"

using namespace nevlab;
using namespace nevlab::counting;

namespace {

std::vector<double> log_grid(std::initializer_list<double> xs) {
    std::vector<double> out;
    for (const double x : xs) {
        out.push_back(std::log(x));
    }
    return out;
}

const curves::EntireCurve& interp() {
    static const curves::EntireCurve c = curves::build_rational_curve(40);
    return c;
}

}  // namespace

TEST_CASE("negative heights count nothing") {
    const auto tab = count_table(interp(), {1.0, 2.0}, {-1.0, -0.1}, 0.5);
    REQUIRE(tab.size() == 4);
    for (const auto& rec : tab) {
        CHECK(rec.count == 0);
        CHECK(rec.kappa == 0.0);
    }
}

TEST_CASE("counts match a brute force scan") {
    const std::vector<double> rs{0.5, 1.0, 1.5, 2.0};
    const std::vector<double> Hs = log_grid({1.5, 2, 3, 7, 20, 40});
    const auto tab = count_table(interp(), rs, Hs, 0.5);
    const auto small = oracle::small_values(80, 2.0, mpz_class(40), 2);
    for (const auto& rec : tab) {
        std::size_t want = 0;
        for (const auto& [q, v] : small) {
            if (std::abs(q.get_d()) < rec.r &&
                heights::within_height(heights::height(heights::RationalPoint::from_affine({q, v})).fs, rec.H)) {
                ++want;
            }
        }
        CHECK(rec.count == want);
    }
}

TEST_CASE("counts are monotone") {
    const std::vector<double> rs{0.5, 1.0, 1.5, 2.0, 3.0};
    const std::vector<double> Hs = log_grid({1.5, 2, 3, 7, 20, 40});
    const auto tab = count_table(interp(), rs, Hs, 0.5);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        for (std::size_t j = 0; j < Hs.size(); ++j) {
            const auto& rec = tab[i * Hs.size() + j];
            CHECK(rec.r == rs[i]);
            CHECK(rec.H == Hs[j]);
            if (j > 0) {
                CHECK(rec.count >= tab[i * Hs.size() + j - 1].count);
            }
            if (i > 0) {
                CHECK(rec.count >= tab[(i - 1) * Hs.size() + j].count);
            }
        }
    }
    const auto again = count_table(interp(), rs, Hs, 0.5);
    for (std::size_t k = 0; k < tab.size(); ++k) {
        CHECK(again[k].count == tab[k].count);
        CHECK(again[k].kappa == tab[k].kappa);
    }
}

TEST_CASE("projective tables exclude the exceptional set") {
    const curves::EntireCurve c = curves::projective_curve({"1", "z"}, "line");
    const auto tab = count_table(c, {1.0, 4.0}, log_grid({3, 5}), 1.0);
    // T(4) > 1, so the second radius carries exceptional disks.
    const auto pb = nevanlinna::projective_basepoint_bound(c, 4.0);
    REQUIRE(pb.applicable);
    std::size_t total = 0;
    for (const auto& p : heights::enumerate_points(c, 4.0, std::log(5.0)).points) {
        total += heights::within_height(p.h_fs, std::log(5.0)) ? 1 : 0;
    }
    CHECK(tab[3].count + tab[3].excluded == total);
    CHECK(tab[1].excluded == 0);
}

TEST_CASE("envelope of the interpolation curve") {
    const std::vector<double> rs{0.5, 1.0, 1.5, 2.0};
    const auto tab = count_table(interp(), rs, log_grid({2, 3, 5, 8, 13, 20, 32}), 0.5);
    const EnvelopeReport env = bp_envelope_check(tab, 0.5);
    CHECK(env.pass());
    CHECK(env.max_kappa == doctest::Approx(env.kappa.front()));
    for (std::size_t i = 0; i < tab.size(); ++i) {
        CHECK(env.kappa[i] == doctest::Approx(tab[i].kappa));
    }
}

TEST_CASE("halving epsilon shrinks the envelope") {
    CountRecord rec;
    rec.T_wide = 1.3;
    for (const auto& [H, T] : {std::pair{1.0, 0.5}, std::pair{0.0, 0.0}, std::pair{2.0, 0.0}}) {
        rec.H = H;
        rec.T_scaled = T;
        rec.epsilon = 0.5;
        const double a = rec.envelope();
        rec.epsilon = 0.25;
        const double b = rec.envelope();
        CHECK((b < a) == (H + T > 0.0));
    }
}

TEST_CASE("small diameter vanishing") {
    curves::InterpolationOptions opt;
    opt.pattern.zero_block = 8;
    const curves::EntireCurve tuned = curves::build_rational_curve(12, opt);
    const SmallDiamReport rep = small_diam_vanishing_test(tuned, 2.0, std::log(3.0), 2, 1.0);
    REQUIRE(rep.status == VanishingStatus::verified);
    CHECK(rep.in_ball.size() == 3);
    CHECK(rep.subset_size == 2);
    CHECK(rep.diameter <= rep.threshold);
    REQUIRE(rep.held_out_values.size() == 1);
    CHECK(rep.held_out_values[0] == 0);

    const SmallDiamReport lone = small_diam_vanishing_test(tuned, 0.5, std::log(2.0), 2, 1.0);
    CHECK(lone.status == VanishingStatus::vacuous);
    CHECK(lone.in_ball.size() <= 1);
    CHECK_THROWS_AS(small_diam_vanishing_test(curves::identity_curve(), 1.0, 1.0, 2, 1.0), InputError);
}

TEST_CASE("thresholds grow with the degree") {
    double prev = 0.0;
    for (int d = 1; d <= 8; ++d) {
        const double t = vanishing_threshold(1.2, 2.0, d, 2);
        CHECK(t > prev);
        CHECK(t < 1.0);
        prev = t;
    }
    CHECK(vanishing_threshold(1.0, 1.0, 2, 3) > vanishing_threshold(1.0, 1.0, 2, 2));
    CHECK(vanishing_threshold_projective(2.0, 3.0, 1.0, 2, 2) == doctest::Approx(std::exp(-(std::log(2.0) * 3 + 1) / 2)));
}

TEST_CASE("window scans") {
    std::vector<WindowEntry> members;
    for (int k = 0; k < 5; ++k) {
        members.push_back({1.0 + k, 2.0, 0, false});
    }
    const WindowReport all = window_scan(members, 2.5, 0.1, 1.0, 2);
    CHECK(all.chains.empty());
    CHECK(all.largest_disk == doctest::Approx(all.span));
    CHECK(all.span == doctest::Approx(4.0));
    CHECK(all.headline);

    std::vector<WindowEntry> geo;
    for (int k = 0; k < 10; ++k) {
        geo.push_back({std::ldexp(1.0, k), 0.0, 1000000, false});
    }
    const WindowReport chain = window_scan(geo, 2.5, 0.1, 1.0, 2);
    REQUIRE(chain.chains.size() == 1);
    CHECK(chain.chains[0].size() == 10);
    CHECK(chain.any_spanning());
    CHECK(chain.flags_consistent());
    // Ratio 2 breaks the chain for A + 1 < 2.
    CHECK(window_scan(geo, 2.5, 0.1, 0.5, 2).chains.empty());

    const std::vector<double> rs{0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
    const auto tab = count_table(interp(), rs, log_grid({2, 3, 5, 8, 13, 20, 32}), 0.5);
    const WindowReport w = window_scan(interp(), 2.5, 0.5, 1.0, tab);
    CHECK(w.headline);
    CHECK(w.flags_consistent());
    CHECK_FALSE(w.any_spanning());
    CHECK(w.largest_disk > 0.0);
}
