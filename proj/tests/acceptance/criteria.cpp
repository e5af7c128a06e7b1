#include "criteria.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "nevlab/auxpoly.hpp"
#include "nevlab/counting.hpp"
#include "nevlab/curve_config.hpp"
#include "nevlab/disk_geometry.hpp"
#include "nevlab/heights.hpp"
#include "nevlab/nevanlinna.hpp"
#include "nevlab/report_io.hpp"
#include "../oracles.hpp"

namespace nevlab::acceptance {

using nlohmann::json;
using curves::EntireCurve;
using io::num;

namespace {

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::vector<double> log_grid(std::initializer_list<double> xs) {
    std::vector<double> out;
    for (const double x : xs) {
        out.push_back(std::log(x));
    }
    return out;
}

mpz_class sup_abs(const std::vector<mpz_class>& v) {
    mpz_class m = 0;
    for (const auto& x : v) {
        if (abs(x) > m) {
            m = abs(x);
        }
    }
    return m;
}

// Coefficient string for x1 - a x0.
std::string linear_section(double a) {
    return a >= 0 ? "x1 - " + num(a) + "*x0" : "x1 + " + num(-a) + "*x0";
}

void fmt_identity(CriterionResult& out, const Options&) {
    const EntireCurve id = curves::identity_curve();
    const EntireCurve ex = config::load_curve(config::builtin_curve_config("exp"));
    json rows = json::array();
    double worst_id = 0.0, worst_exp = 0.0;
    bool ok = true;
    auto t0 = std::chrono::steady_clock::now();
    for (const double r : {1.0, 2.0}) {
        for (const double a : {0.5 * r, -0.6 * r, 0.95 * r}) {
            const PolynomialSection s = PolynomialSection::parse(linear_section(a), 1, false);
            for (const cplx w0 : {cplx(0.0), cplx(0.3 * r)}) {
                const auto rep = nevanlinna::verify_fmt(id, s, w0, r);
                worst_id = std::max(worst_id, std::abs(rep.residual));
                ok = ok && std::abs(rep.residual) < 1e-8 && rep.zeros == 1;
                rows.push_back(io::to_json(rep));
            }
        }
    }
    const double t_id = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    t0 = std::chrono::steady_clock::now();
    const PolynomialSection s = PolynomialSection::parse("x1 - x0", 1, false);
    for (const cplx w0 : {cplx(0.1), cplx(0.0, 0.5)}) {
        const auto rep = nevanlinna::verify_fmt(ex, s, w0, 7.0);
        worst_exp = std::max(worst_exp, std::abs(rep.residual));
        ok = ok && std::abs(rep.residual) < 1e-6 && rep.zeros == 3;
        rows.push_back(io::to_json(rep));
    }
    const double t_exp = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Each fixture family has its own 10 s budget.
    out.checks = ok && t_id < 10.0 && t_exp < 10.0;
    out.data = {{"reports", rows}, {"seconds_identity", t_id}, {"seconds_exp", t_exp}};
    out.summary = "identity residual " + fmt("%.2e", worst_id) + ", exp residual " + fmt("%.2e", worst_exp);
}

void characteristic_cross(CriterionResult& out, const Options&) {
    const EntireCurve id = curves::identity_curve();
    const EntireCurve ex = config::load_curve(config::builtin_curve_config("exp"));
    double worst_cross = 0.0, worst_closed = 0.0;
    json rows = json::array();
    for (const EntireCurve* c : {&id, &ex}) {
        for (const double r : {0.5, 1.0, 2.0, 4.0}) {
            const double a = nevanlinna::characteristic(*c, r).value;
            const double b = nevanlinna::characteristic_double_integral(*c, r).value;
            worst_cross = std::max(worst_cross, std::abs(a - b));
            if (c == &id) {
                const double cf = 0.5 * std::log1p(r * r);
                worst_closed = std::max({worst_closed, std::abs(a - cf), std::abs(b - cf)});
            }
            rows.push_back({{"curve", c->name()}, {"r", r}, {"circle", a}, {"area", b}});
        }
    }
    out.checks = worst_cross < 1e-6 && worst_closed < 1e-8;
    out.data = {{"values", rows}, {"max_cross", worst_cross}, {"max_closed_form", worst_closed}};
    out.summary = "circle vs area " + fmt("%.2e", worst_cross) + ", closed form " + fmt("%.2e", worst_closed);
}

void basepoint(CriterionResult& out, const Options&) {
    const EntireCurve line = curves::affine_curve({"z"}, "line");
    const EntireCurve ex = config::load_curve(config::builtin_curve_config("exp-affine"));
    std::size_t violations = 0, points = 0;
    double worst = 0.0;
    json rows = json::array();
    for (const EntireCurve* c : {&line, &ex}) {
        for (const double eps : {0.5, 1.0}) {
            const auto rep = nevanlinna::basepoint_bound_check(*c, 2.0, eps, 50);
            violations += rep.violations;
            points += rep.grid_points;
            worst = std::max(worst, rep.worst_ratio);
            rows.push_back({{"curve", c->name()},
                            {"epsilon", eps},
                            {"A", rep.A},
                            {"bound", rep.bound},
                            {"grid_points", rep.grid_points},
                            {"violations", rep.violations},
                            {"worst_ratio", rep.worst_ratio}});
        }
    }
    out.checks = violations == 0 && points > 0;
    out.data = {{"runs", rows}};
    out.summary = std::to_string(points) + " base points, " + std::to_string(violations) +
                  " violations, worst ratio " + fmt("%.3f", worst);
}

void cartan(CriterionResult& out, const Options& opt) {
    std::mt19937_64 rng(opt.seed + 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count(1, 100);
    std::size_t violations = 0, runs = 0, exterior = 0;
    bool radii_ok = true;
    double worst_fill = 0.0;
    json rows = json::array();
    for (int m = 0; m < 20; ++m) {
        std::vector<geometry::Atom> atoms(static_cast<std::size_t>(count(rng)));
        double total = 0.0;
        for (auto& a : atoms) {
            a.location = cplx(2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0);
            a.mass = u(rng);
            total += a.mass;
        }
        const double mass = 2.0 * (1.0 - u(rng));  // in (0, 2]
        for (auto& a : atoms) {
            a.mass *= mass / total;
        }
        const geometry::AtomicMeasure mu(atoms);
        for (const double H : {0.1, 0.05}) {
            const auto e = geometry::cartan_exceptional(mu, H);
            auto rep = geometry::verify_cartan(mu, H, e, 10000);
            if (rep.exterior < 10000) {
                const auto n = static_cast<std::size_t>(std::ceil(1e4 * 1.05 * 1e4 / std::max<double>(rep.exterior, 1)));
                rep = geometry::verify_cartan(mu, H, e, n);
            }
            ++runs;
            violations += rep.violations;
            exterior += rep.exterior;
            radii_ok = radii_ok && rep.radii_sum <= 5.0 * H && rep.exterior >= 10000;
            worst_fill = std::max(worst_fill, rep.radii_sum / (5.0 * H));
            rows.push_back({{"atoms", atoms.size()},
                            {"mass", mu.total_mass()},
                            {"H", H},
                            {"disks", e.size()},
                            {"radii_sum", rep.radii_sum},
                            {"exterior", rep.exterior},
                            {"violations", rep.violations},
                            {"min_margin", rep.min_margin}});
        }
    }
    out.checks = radii_ok && violations == 0;
    out.data = {{"runs", rows}};
    out.summary = std::to_string(runs) + " runs, radii sum at most " + fmt("%.3f", worst_fill) + " x 5H, " +
                  std::to_string(exterior) + " exterior samples, " + std::to_string(violations) + " violations";
}

void projective(CriterionResult& out, const Options&) {
    const EntireCurve ex = config::load_curve(config::builtin_curve_config("exp"));
    nevanlinna::ProjectiveBoundOptions po;
    po.samples = 500;
    const auto rep = nevanlinna::projective_basepoint_bound(ex, 5.0, po);
    const bool radii = rep.applicable && rep.radii_sum <= 5.0 / rep.T_r;
    out.checks = radii && rep.samples == 500 && rep.violations == 0;
    out.data = io::to_json(rep);
    out.summary = "radii sum " + fmt("%.4f", rep.radii_sum) + " <= " + fmt("%.4f", 5.0 / rep.T_r) + ", " +
                  std::to_string(rep.samples) + " base points, " + std::to_string(rep.violations) + " violations";
}

void covering(CriterionResult& out, const Options&) {
    bool ok = true;
    json rows = json::array();
    std::string s;
    for (const auto& [alpha, eps] : {std::pair{0.5, 1.0}, std::pair{0.3, 0.5}}) {
        for (const double r : {1.0, 5.0}) {
            const auto cover = geometry::cover_disk(r, eps, alpha);
            const auto rep = geometry::verify_covering(cover, r, eps, alpha, 200);
            ok = ok && rep.pass() && rep.balls <= geometry::covering_bound(alpha, eps) && rep.max_sampled_diam <= alpha;
            rows.push_back({{"alpha", alpha},
                            {"epsilon", eps},
                            {"r", r},
                            {"balls", rep.balls},
                            {"bound", rep.bound},
                            {"grid_points", rep.grid_points},
                            {"uncovered", rep.uncovered},
                            {"max_sampled_diam", rep.max_sampled_diam}});
            if (r == 1.0) {
                s += (s.empty() ? "" : ", ") + std::to_string(rep.balls) + "/" + std::to_string(rep.bound) +
                     " balls at alpha " + num(alpha);
            }
        }
    }
    out.checks = ok;
    out.data = {{"runs", rows}};
    out.summary = s + ", no uncovered grid points";
}

void zero_counts(CriterionResult& out, const Options& opt) {
    const EntireCurve ex = config::load_curve(config::builtin_curve_config("exp"));
    const auto rep = nevanlinna::zero_count_stability(ex, 1, 1.0, {2.0, 4.0, 8.0}, 20, 5, opt.seed + 7);
    out.checks = rep.pass(0.2);
    out.data = {{"C1", rep.C1}, {"mean", rep.mean}, {"max_deviation", rep.max_deviation}};
    out.summary = "C1 mean " + fmt("%.4f", rep.mean) + " over " + std::to_string(rep.C1.size()) +
                  " draws, max deviation " + fmt("%.1f", 100.0 * rep.max_deviation) + "%";
}

void liouville(CriterionResult& out, const Options& opt) {
    using heights::RationalPoint;
    const auto sharp = heights::liouville_check(PolynomialSection::parse("x1", 1, false),
                                                RationalPoint({mpz_class(2), mpz_class(1)}));
    std::mt19937_64 rng(opt.seed + 8);
    std::uniform_int_distribution<int> deg(1, 3);
    std::uniform_int_distribution<long> coord(-50, 50);
    std::size_t pairs = 0, violations = 0, vanishing = 0;
    double min_margin = INFINITY;
    for (int si = 0; si < 100; ++si) {
        const auto s = nevanlinna::random_sections(2, deg(rng), 1, rng())[0];
        const double ls = std::log(s.sampled_sup(20000));
        for (int pi = 0; pi < 100; ++pi) {
            std::vector<mpz_class> v;
            do {
                v = {mpz_class(coord(rng)), mpz_class(coord(rng)), mpz_class(coord(rng))};
            } while (v[0] == 0 && v[1] == 0 && v[2] == 0);
            const auto rep = heights::liouville_check(s, RationalPoint(v), ls);
            ++pairs;
            violations += rep.status == heights::LiouvilleStatus::violated ? 1 : 0;
            if (rep.status == heights::LiouvilleStatus::vanishing) {
                ++vanishing;
            } else {
                min_margin = std::min(min_margin, rep.margin);
            }
        }
    }
    out.checks = sharp.status == heights::LiouvilleStatus::holds && std::abs(sharp.margin) <= 1e-12 &&
                 pairs == 10000 && violations == 0;
    out.data = {{"sharp_margin", sharp.margin},
                {"pairs", pairs},
                {"violations", violations},
                {"vanishing", vanishing},
                {"min_margin", min_margin}};
    out.summary = "sharp margin " + fmt("%.1e", sharp.margin) + ", " + std::to_string(pairs) + " pairs, " +
                  std::to_string(violations) + " violations";
}

void siegel(CriterionResult& out, const Options& opt) {
    using heights::RationalPoint;
    std::mt19937_64 rng(opt.seed + 9);
    std::uniform_int_distribution<long> small(-3, 3), wide(-20, 20);
    auto random_point = [&](int N, std::uniform_int_distribution<long>& dist) {
        std::vector<mpz_class> v;
        do {
            v.clear();
            for (int i = 0; i <= N; ++i) {
                v.emplace_back(dist(rng));
            }
        } while (std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; }));
        return RationalPoint(v);
    };

    // Auxiliary polynomials on random point sets and on points of the
    // interpolation curve, each checked by exact evaluation.
    std::size_t built = 0, exact = 0;
    for (int t = 0; t < 12; ++t) {
        std::vector<RationalPoint> pts;
        for (int k = 0; k < 6; ++k) {
            pts.push_back(random_point(2, wide));
        }
        const auto aux = auxpoly::build_aux_polynomial(pts, 3, 0.3, 2000);
        bool all = aux.vanishes_exactly();
        for (const auto& p : pts) {
            all = all && aux.section.eval_exact(p.coords()) == 0;
        }
        ++built;
        exact += all ? 1 : 0;
    }
    const EntireCurve interp = config::load_curve(config::builtin_curve_config("interpolation"));
    const auto en = heights::enumerate_points(interp, 2.0, std::log(30.0));
    for (const int d : {2, 3, 4}) {
        const std::size_t m = static_cast<std::size_t>((d + 1) * (d + 2) / 2);
        std::vector<RationalPoint> pts;
        for (std::size_t k = 0; k < en.points.size() && pts.size() + 1 <= m / 2; ++k) {
            pts.push_back(en.points[k].point);
        }
        const auto aux = auxpoly::build_aux_polynomial(pts, d, 0.5, 2000);
        bool all = aux.vanishes_exactly();
        for (const auto& p : pts) {
            all = all && aux.section.eval_exact(p.coords()) == 0;
        }
        ++built;
        exact += all ? 1 : 0;
    }

    // Small systems against exhaustive search.
    struct Shape {
        int N, d, min_rows;
    };
    const std::vector<Shape> shapes{{1, 3, 1}, {1, 4, 2}, {1, 5, 3}, {2, 1, 1}, {2, 2, 3}};
    std::uniform_int_distribution<std::size_t> pick(0, shapes.size() - 1);
    std::size_t systems = 0, compared = 0, within = 0;
    double worst = 0.0;
    for (int t = 0; t < 40; ++t) {
        const Shape sh = shapes[pick(rng)];
        const std::size_t m = auxpoly::monomial_basis(sh.N, sh.d).size();
        std::uniform_int_distribution<std::size_t> rows(static_cast<std::size_t>(sh.min_rows), m - 1);
        std::vector<RationalPoint> pts;
        for (std::size_t k = rows(rng); k > 0; --k) {
            pts.push_back(random_point(sh.N, small));
        }
        const auxpoly::EvaluationSystem sys(pts, sh.d);
        const auto kv = auxpoly::siegel_small_kernel(sys);
        ++systems;
        if (!sys.in_kernel(kv.v) || sup_abs(kv.v) == 0) {
            continue;
        }
        if (kv.rank > 3) {
            continue;
        }
        const long best = oracle::brute_min_sup(sys.matrix(), 20);
        if (best == 0) {
            continue;
        }
        ++compared;
        const double ratio = sup_abs(kv.v).get_d() / static_cast<double>(best);
        worst = std::max(worst, ratio);
        within += ratio <= 2.0 ? 1 : 0;
    }
    out.checks = exact == built && compared > 0 && within == compared;
    out.data = {{"aux_built", built},
                {"aux_exact", exact},
                {"systems", systems},
                {"compared", compared},
                {"within_factor_2", within},
                {"worst_ratio", worst}};
    out.summary = std::to_string(exact) + "/" + std::to_string(built) + " exact vanishing, " + std::to_string(within) +
                  "/" + std::to_string(compared) + " kernels within 2x, worst " + fmt("%.2f", worst) + "x";
}

const std::vector<double> kCountRadii{0.5, 1.0, 1.5, 2.0};

void counting_table(CriterionResult& out, const Options&) {
    const EntireCurve interp = config::load_curve(config::builtin_curve_config("interpolation"));
    const std::vector<double> Hs = log_grid({2, 3, 5, 8, 13, 20, 32, 50});
    const auto tab = counting::count_table(interp, kCountRadii, Hs, 0.5);
    // Scan twice the height bound of the table.
    const auto small = oracle::small_values(100, 2.0, mpz_class(50), 2);
    std::size_t mismatches = 0;
    json rows = json::array();
    for (const auto& rec : tab) {
        std::size_t want = 0;
        for (const auto& [q, v] : small) {
            const auto p = heights::RationalPoint::from_affine({q, v});
            if (std::abs(q.get_d()) < rec.r && heights::within_height(heights::height(p).fs, rec.H)) {
                ++want;
            }
        }
        mismatches += rec.count == want ? 0 : 1;
        rows.push_back({{"r", rec.r}, {"H", rec.H}, {"count", rec.count}, {"oracle", want}, {"kappa", rec.kappa}});
    }
    const auto env = counting::bp_envelope_check(tab, 0.5);
    out.checks = mismatches == 0 && env.pass();
    out.data = {{"cells", rows}, {"max_kappa", env.max_kappa}, {"median_kappa", env.median_kappa}};
    out.summary = std::to_string(tab.size() - mismatches) + "/" + std::to_string(tab.size()) +
                  " cells match the oracle, kappa max/median " + fmt("%.2f", env.max_kappa / env.median_kappa);
}

void windows(CriterionResult& out, const Options&) {
    const EntireCurve interp = config::load_curve(config::builtin_curve_config("interpolation"));
    const auto tab = counting::count_table(interp, {0.5, 1.0, 1.5, 2.0, 3.0, 4.0},
                                           log_grid({2, 3, 5, 8, 13, 20, 32, 50}), 0.5);
    const auto w = counting::window_scan(interp, 2.5, 0.5, 1.0, tab);
    std::vector<counting::WindowEntry> geo;
    for (int k = 0; k < 12; ++k) {
        geo.push_back({std::ldexp(1.0, k), 0.0, std::size_t{1} << 50, false});
    }
    const auto synth = counting::window_scan(geo, 2.5, 0.5, 1.0, 2);
    const bool detected = synth.chains.size() == 1 && synth.chains[0].size() == geo.size() && synth.any_spanning();
    out.checks = w.headline && w.flags_consistent() && !w.any_spanning() && detected;
    out.data = {{"curve", io::to_json(w)}, {"synthetic", io::to_json(synth)}};
    out.summary = std::to_string(w.chains.size()) + " chains in the sampled complement, none spanning; synthetic chain " +
                  (detected ? "detected" : "missed");
}

void small_diameter(CriterionResult& out, const Options&) {
    const EntireCurve tuned = config::load_curve(config::builtin_curve_config("tuned"));
    const auto rep = counting::small_diam_vanishing_test(tuned, 2.0, std::log(3.0), 2, 1.0);
    bool zero = !rep.held_out_values.empty();
    for (const auto& v : rep.held_out_values) {
        zero = zero && v == 0;
    }
    out.checks = rep.status == counting::VanishingStatus::verified && zero;
    out.data = io::to_json(rep);
    out.summary = counting::to_string(rep.status) + ", " + std::to_string(rep.in_ball.size()) + " points in a ball of radius " +
                  fmt("%.3f", rep.ball_radius) + ", " + std::to_string(rep.held_out_values.size()) +
                  " held-out value(s) exactly zero";
    if (!zero) {
        out.summary = counting::to_string(rep.status) + ": " + rep.reason;
    }
}

struct Entry {
    int id;
    const char* title;
    double limit;
    void (*run)(CriterionResult&, const Options&);
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r{
        {1, "first main theorem fixtures", 20.0, fmt_identity},
        {2, "characteristic cross-validation", 60.0, characteristic_cross},
        {3, "affine base point comparison", 300.0, basepoint},
        {4, "Cartan exceptional disks", 120.0, cartan},
        {5, "projective exceptional set", 300.0, projective},
        {6, "hyperbolic covering", 30.0, covering},
        {7, "zero count constants", 300.0, zero_counts},
        {8, "heights and Liouville", 60.0, liouville},
        {9, "Siegel kernels and auxiliary polynomials", 120.0, siegel},
        {10, "counting table and envelope", 600.0, counting_table},
        {11, "window scan", 120.0, windows},
        {12, "small diameter vanishing", 120.0, small_diameter},
    };
    return r;
}

}  // namespace

std::vector<int> criterion_ids() {
    std::vector<int> ids;
    for (const auto& e : registry()) {
        ids.push_back(e.id);
    }
    return ids;
}

CriterionResult run_criterion(int id, const Options& opt) {
    for (const auto& e : registry()) {
        if (e.id != id) {
            continue;
        }
        CriterionResult out;
        out.id = id;
        out.title = e.title;
        out.limit = e.limit;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.run(out, opt);
        } catch (const std::exception& ex) {
            out.checks = false;
            out.summary = std::string("error: ") + ex.what();
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }
    throw InputError("no acceptance criterion " + std::to_string(id));
}

std::string format_line(const CriterionResult& r) {
    char head[160];
    std::snprintf(head, sizeof head, "criterion %2d %s  %-42s %7.2f s (limit %g s)  ", r.id, r.pass() ? "PASS" : "FAIL",
                  r.title.c_str(), r.seconds, r.limit);
    return head + r.summary;
}

}  // namespace nevlab::acceptance
