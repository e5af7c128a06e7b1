#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance/criteria.hpp"
#include "nevlab/auxpoly.hpp"
#include "nevlab/counting.hpp"
#include "nevlab/curve_config.hpp"
#include "nevlab/disk_geometry.hpp"
#include "nevlab/heights.hpp"
#include "nevlab/nevanlinna.hpp"
#include "nevlab/parallel.hpp"
#include "nevlab/report_io.hpp"
#include "nevlab/zeros.hpp"

using namespace nevlab;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

struct Global {
    std::string config = "identity";
    std::string out = ".";
    double tol = 1e-12;
    std::uint64_t seed = 0;
    unsigned jobs = 0;
};

// Builtin name, inline JSON or path to a JSON file.
json curve_json(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '"')) {
        try {
            return json::parse(arg);
        } catch (const json::exception& e) {
            throw InputError(std::string("curve config: ") + e.what());
        }
    }
    for (const auto& n : config::builtin_curve_names()) {
        if (n == arg) {
            return config::builtin_curve_config(arg);
        }
    }
    if (!std::filesystem::exists(arg)) {
        throw InputError("curve config \"" + arg + "\" is neither a builtin curve nor a file");
    }
    return config::read_json_file(arg);
}

class Run {
public:
    Run(const Global& g, std::string command, json params)
        : g_(g), curve_json_(curve_json(g.config)), curve_(config::load_curve(curve_json_)) {
        cfg_.command = std::move(command);
        cfg_.curve = curve_json_;
        cfg_.params = std::move(params);
        cfg_.seed = g.seed;
        cfg_.tol = g.tol;
        std::filesystem::create_directories(g.out);
    }

    const curves::EntireCurve& curve() const { return curve_; }
    const io::RunConfig& config() const { return cfg_; }

    void csv(const std::string& file, const std::string& schema, const std::vector<std::string>& cols,
             const io::Table& rows) const {
        write(file, io::csv_text(cfg_, schema, cols, rows));
    }
    void json_out(const std::string& file, const json& result) const { write(file, io::json_text(cfg_, result)); }

private:
    void write(const std::string& file, const std::string& text) const {
        const std::string path = (std::filesystem::path(g_.out) / file).string();
        io::write_file(path, text);
        std::printf("wrote %s\n", path.c_str());
    }

    Global g_;
    json curve_json_;
    curves::EntireCurve curve_;
    io::RunConfig cfg_;
};

cplx parse_complex(const std::vector<double>& v) {
    if (v.empty() || v.size() > 2) {
        throw InputError("complex numbers are given as re or re,im");
    }
    return {v[0], v.size() == 2 ? v[1] : 0.0};
}

std::vector<double> logs(const std::vector<double>& bounds) {
    std::vector<double> out;
    for (const double b : bounds) {
        if (!(b > 0.0)) {
            throw InputError("height bounds must be positive");
        }
        out.push_back(std::log(b));
    }
    return out;
}

int tcurve(const Global& g, const std::vector<double>& radii, const std::vector<double>& w0v, bool area) {
    const cplx w0 = parse_complex(w0v);
    Run run(g, "tcurve", {{"r", radii}, {"w0", {w0.real(), w0.imag()}}, {"area", area}});
    const auto prof = nevanlinna::characteristic_profile(run.curve(), w0, radii, g.tol);
    auto cols = io::profile_columns();
    io::Table rows = io::profile_rows(prof);
    if (area) {
        cols.push_back("T_area");
        for (std::size_t i = 0; i < radii.size(); ++i) {
            const double a = w0 == 0.0
                                 ? nevanlinna::characteristic_double_integral(run.curve(), radii[i]).value
                                 : nevanlinna::characteristic_based_double_integral(run.curve(), w0, radii[i]).value;
            rows[i].push_back(io::num(a));
        }
    }
    run.csv("tcurve.csv", "tcurve", cols, rows);
    for (const auto& s : prof.samples) {
        std::printf("r=%g T=%.12g\n", s.r, s.T);
    }
    return prof.nondecreasing() ? kPass : kViolation;
}

int fmt(const Global& g, const std::string& section, const std::vector<double>& radii,
        const std::vector<double>& w0v, double max_residual) {
    const cplx w0 = parse_complex(w0v);
    Run run(g, "fmt",
            {{"section", section}, {"r", radii}, {"w0", {w0.real(), w0.imag()}}, {"max_residual", max_residual}});
    const auto s = PolynomialSection::parse(section, run.curve().ambient_dim(), run.curve().kind() == curves::CurveKind::affine);
    io::Table rows;
    bool ok = true;
    for (const double r : radii) {
        const auto rep = nevanlinna::verify_fmt(run.curve(), s, w0, r, g.tol);
        rows.push_back(io::fmt_row(rep));
        ok = ok && std::abs(rep.residual) < max_residual;
        std::printf("r=%g zeros=%d residual=%.3e\n", rep.r, rep.zeros, rep.residual);
    }
    run.csv("fmt.csv", "fmt", io::fmt_columns(), rows);
    return ok ? kPass : kViolation;
}

int zeros(const Global& g, const std::string& section, double r) {
    Run run(g, "zeros", {{"section", section}, {"r", r}});
    const auto s = PolynomialSection::parse(section, run.curve().ambient_dim(), run.curve().kind() == curves::CurveKind::affine);
    const curves::Pullback pb(run.curve(), s);
    const auto res = curves::count_zeros([&](cplx z) { return pb.eval(z); }, r);
    io::Table rows;
    for (const auto& z : res.zeros) {
        rows.push_back({io::num(z.location.real()), io::num(z.location.imag()), std::to_string(z.multiplicity),
                        io::num(z.enclosure_radius)});
    }
    run.csv("zeros.csv", "zeros", {"re", "im", "multiplicity", "enclosure"}, rows);
    std::printf("zeros=%d winding=%d radius=%.17g\n", res.total(), res.winding, res.radius_used);
    return res.total() == res.winding ? kPass : kViolation;
}

int cover(const Global& g, double r, double eps, double alpha, std::size_t grid) {
    Run run(g, "cover", {{"r", r}, {"epsilon", eps}, {"alpha", alpha}, {"grid", grid}});
    const auto c = geometry::cover_disk(r, eps, alpha);
    const auto rep = geometry::verify_covering(c, r, eps, alpha, grid);
    io::Table rows;
    for (const auto& d : c.disks()) {
        rows.push_back({io::num(d.center.real()), io::num(d.center.imag()), io::num(d.radius)});
    }
    run.csv("cover.csv", "disks", {"re", "im", "radius"}, rows);
    run.json_out("cover.json", {{"disks", c.to_json()},
                                {"balls", rep.balls},
                                {"bound", rep.bound},
                                {"grid_points", rep.grid_points},
                                {"uncovered", rep.uncovered},
                                {"max_sampled_diam", rep.max_sampled_diam},
                                {"pass", rep.pass()}});
    std::printf("balls=%zu bound=%zu uncovered=%zu\n", rep.balls, rep.bound, rep.uncovered);
    return rep.pass() ? kPass : kViolation;
}

int cartan(const Global& g, double r, std::size_t samples, std::size_t measures, double H) {
    if (measures > 0) {
        Run run(g, "cartan", {{"measures", measures}, {"H", H}, {"samples", samples}});
        std::mt19937_64 rng(g.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::uniform_int_distribution<int> count(1, 100);
        json runs = json::array();
        bool ok = true;
        for (std::size_t m = 0; m < measures; ++m) {
            std::vector<geometry::Atom> atoms(static_cast<std::size_t>(count(rng)));
            for (auto& a : atoms) {
                a.location = cplx(2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0);
                a.mass = u(rng) / static_cast<double>(atoms.size());
            }
            const geometry::AtomicMeasure mu(atoms);
            const auto e = geometry::cartan_exceptional(mu, H);
            const auto rep = geometry::verify_cartan(mu, H, e, samples);
            ok = ok && rep.pass();
            runs.push_back({{"atoms", atoms.size()},
                            {"mass", mu.total_mass()},
                            {"disks", e.to_json()},
                            {"radii_sum", rep.radii_sum},
                            {"exterior", rep.exterior},
                            {"violations", rep.violations},
                            {"min_margin", rep.min_margin}});
        }
        run.json_out("cartan.json", {{"runs", runs}, {"pass", ok}});
        std::printf("measures=%zu pass=%d\n", measures, ok ? 1 : 0);
        return ok ? kPass : kViolation;
    }
    Run run(g, "cartan", {{"r", r}, {"samples", samples}});
    nevanlinna::ProjectiveBoundOptions po;
    po.samples = samples;
    const auto rep = nevanlinna::projective_basepoint_bound(run.curve(), r, po);
    run.json_out("cartan.json", io::to_json(rep));
    std::printf("applicable=%d radii_sum=%.6g bound=%.6g violations=%zu\n", rep.applicable ? 1 : 0, rep.radii_sum,
                rep.radii_bound, rep.violations);
    return rep.pass() ? kPass : kViolation;
}

int heights_cmd(const Global& g, double r, double bound, const std::string& section) {
    Run run(g, "heights", {{"r", r}, {"height_bound", bound}, {"section", section}});
    const auto e = heights::enumerate_points(run.curve(), r, std::log(bound));
    auto cols = io::points_columns(run.curve().ambient_dim());
    io::Table rows = io::points_rows(e.points);
    bool ok = true;
    if (!section.empty()) {
        const auto s = PolynomialSection::parse(section, run.curve().ambient_dim(), false);
        const double ls = std::log(s.sampled_sup(20000));
        cols.push_back("liouville");
        cols.push_back("margin");
        for (std::size_t i = 0; i < e.points.size(); ++i) {
            const auto rep = heights::liouville_check(s, e.points[i].point, ls);
            ok = ok && rep.status != heights::LiouvilleStatus::violated;
            rows[i].push_back(heights::to_string(rep.status));
            rows[i].push_back(io::num(rep.margin));
        }
    }
    run.csv("points.csv", "points", cols, rows);
    std::printf("points=%zu candidates=%zu\n", e.points.size(), e.candidates);
    return ok ? kPass : kViolation;
}

int auxpoly_cmd(const Global& g, double r, double bound, int d, double alpha) {
    Run run(g, "auxpoly", {{"r", r}, {"height_bound", bound}, {"d", d}, {"alpha", alpha}});
    const auto e = heights::enumerate_points(run.curve(), r, std::log(bound));
    std::vector<heights::RationalPoint> pts;
    for (const auto& p : e.points) {
        pts.push_back(p.point);
    }
    const auto aux = auxpoly::build_aux_polynomial(pts, d, alpha);
    run.json_out("auxpoly.json", aux.to_json());
    std::printf("points=%zu section=%s exact=%d\n", pts.size(), aux.section.to_string().c_str(),
                aux.vanishes_exactly() ? 1 : 0);
    return aux.vanishes_exactly() ? kPass : kViolation;
}

int count_cmd(const Global& g, const std::vector<double>& radii, const std::vector<double>& bounds, double eps) {
    Run run(g, "count", {{"r", radii}, {"height_bounds", bounds}, {"epsilon", eps}});
    const auto tab = counting::count_table(run.curve(), radii, logs(bounds), eps);
    const auto env = counting::bp_envelope_check(tab, eps);
    run.csv("counts.csv", "counts", io::count_columns(), io::count_rows(tab));
    run.csv("envelope.csv", "envelope", io::envelope_columns(), io::envelope_rows(tab, eps));
    run.json_out("envelope.json", {{"max_kappa", env.max_kappa},
                                   {"median_kappa", env.median_kappa},
                                   {"max_off_far_edge", env.max_off_far_edge},
                                   {"diagonal_decreasing", env.diagonal_decreasing},
                                   {"pass", env.pass()}});
    std::printf("cells=%zu max_kappa=%.6g median_kappa=%.6g\n", tab.size(), env.max_kappa, env.median_kappa);
    return env.pass() ? kPass : kViolation;
}

int windows_cmd(const Global& g, const std::vector<double>& radii, const std::vector<double>& bounds, double eps,
                double gamma, double A) {
    Run run(g, "windows", {{"r", radii}, {"height_bounds", bounds}, {"epsilon", eps}, {"gamma", gamma}, {"A", A}});
    const auto tab = counting::count_table(run.curve(), radii, logs(bounds), eps);
    const auto w = counting::window_scan(run.curve(), gamma, eps, A, tab);
    io::Table rows;
    for (const auto& e : w.entries) {
        rows.push_back({io::num(e.x), io::num(e.y), std::to_string(e.count), e.member ? "1" : "0"});
    }
    run.csv("windows.csv", "windows", {"x", "y", "C", "member"}, rows);
    run.json_out("windows.json", io::to_json(w));
    std::printf("chains=%zu spanning=%d largest_disk=%.6g\n", w.chains.size(), w.any_spanning() ? 1 : 0,
                w.largest_disk);
    const bool ok = w.flags_consistent() && !(w.headline && w.any_spanning());
    return ok ? kPass : kViolation;
}

int suite(const Global& g, std::vector<int> ids) {
    if (ids.empty()) {
        ids = acceptance::criterion_ids();
    }
    io::RunConfig cfg;
    cfg.command = "suite";
    cfg.params = {{"criteria", ids}};
    cfg.seed = g.seed;
    cfg.tol = g.tol;
    acceptance::Options opt;
    opt.seed = g.seed;
    json results = json::array();
    bool ok = true;
    for (const int id : ids) {
        const auto r = acceptance::run_criterion(id, opt);
        std::printf("%s\n", acceptance::format_line(r).c_str());
        std::fflush(stdout);
        ok = ok && r.pass();
        // Timings stay out of the file so reruns compare equal.
        results.push_back({{"id", r.id}, {"title", r.title}, {"checks", r.checks}, {"data", r.data}});
    }
    std::filesystem::create_directories(g.out);
    const std::string path = (std::filesystem::path(g.out) / "suite.json").string();
    io::write_file(path, io::json_text(cfg, results));
    std::printf("wrote %s\n", path.c_str());
    return ok ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nevanlinna theory and rational points laboratory"};
    app.set_version_flag("--version", io::version());
    app.require_subcommand(1);
    Global g;
    app.add_option("--config", g.config, "curve: builtin name, JSON file or inline JSON")->capture_default_str();
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_option("--tol", g.tol, "quadrature tolerance")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized sweeps")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads, 0 for all cores")->capture_default_str();

    std::function<int()> action;

    std::vector<double> radii{0.5, 1.0, 2.0, 4.0};
    std::vector<double> w0{0.0};
    bool area = false;
    auto* tc = app.add_subcommand("tcurve", "characteristic function profile");
    tc->add_option("--r", radii, "radii")->delimiter(',')->capture_default_str();
    tc->add_option("--w0", w0, "base point re[,im]")->delimiter(',');
    tc->add_flag("--area", area, "add the double-integral form");
    tc->callback([&] { action = [&] { return tcurve(g, radii, w0, area); }; });

    std::string section = "x1 - x0";
    std::vector<double> fmt_radii{7.0};
    std::vector<double> fmt_w0{0.1};
    double max_residual = 1e-6;
    auto* fm = app.add_subcommand("fmt", "first main theorem residuals");
    fm->add_option("--section", section, "section in x0..xN")->capture_default_str();
    fm->add_option("--r", fmt_radii, "radii")->delimiter(',')->capture_default_str();
    fm->add_option("--w0", fmt_w0, "base point re[,im]")->delimiter(',');
    fm->add_option("--max-residual", max_residual)->capture_default_str();
    fm->callback([&] { action = [&] { return fmt(g, section, fmt_radii, fmt_w0, max_residual); }; });

    double r = 1.0;
    auto* zc = app.add_subcommand("zeros", "zeros of a pulled-back section");
    zc->add_option("--section", section)->capture_default_str();
    zc->add_option("--r", r)->capture_default_str();
    zc->callback([&] { action = [&] { return zeros(g, section, r); }; });

    double eps = 1.0, alpha = 0.5;
    std::size_t grid = 200;
    auto* cv = app.add_subcommand("cover", "pseudo-hyperbolic covering of a disk");
    cv->add_option("--r", r)->capture_default_str();
    cv->add_option("--eps", eps)->capture_default_str();
    cv->add_option("--alpha", alpha)->capture_default_str();
    cv->add_option("--grid", grid)->capture_default_str();
    cv->callback([&] { action = [&] { return cover(g, r, eps, alpha, grid); }; });

    std::size_t samples = 500, measures = 0;
    double H = 0.1;
    auto* ct = app.add_subcommand("cartan", "exceptional disks: projective bound, or random measures");
    ct->add_option("--r", r)->capture_default_str();
    ct->add_option("--samples", samples)->capture_default_str();
    ct->add_option("--measures", measures, "random atomic measures instead of the curve")->capture_default_str();
    ct->add_option("--H", H)->capture_default_str();
    ct->callback([&] { action = [&] { return cartan(g, r, samples, measures, H); }; });

    double bound = 10.0;
    std::string liouville;
    auto* ht = app.add_subcommand("heights", "rational points of bounded height");
    ht->add_option("--r", r)->capture_default_str();
    ht->add_option("--height-bound", bound, "exp(H)")->capture_default_str();
    ht->add_option("--section", liouville, "integer section for the Liouville check");
    ht->callback([&] { action = [&] { return heights_cmd(g, r, bound, liouville); }; });

    int d = 2;
    double aux_alpha = 0.25;
    auto* ap = app.add_subcommand("auxpoly", "auxiliary polynomial through enumerated points");
    ap->add_option("--r", r)->capture_default_str();
    ap->add_option("--height-bound", bound)->capture_default_str();
    ap->add_option("--d", d)->capture_default_str();
    ap->add_option("--alpha", aux_alpha)->capture_default_str();
    ap->callback([&] { action = [&] { return auxpoly_cmd(g, r, bound, d, aux_alpha); }; });

    std::vector<double> count_radii{0.5, 1.0, 1.5, 2.0};
    std::vector<double> bounds{2, 3, 5, 8, 13, 20, 32, 50};
    double count_eps = 0.5;
    auto* cc = app.add_subcommand("count", "counting table and envelope");
    cc->add_option("--r", count_radii)->delimiter(',')->capture_default_str();
    cc->add_option("--height-bounds", bounds, "exp(H) values")->delimiter(',')->capture_default_str();
    cc->add_option("--eps", count_eps)->capture_default_str();
    cc->callback([&] { action = [&] { return count_cmd(g, count_radii, bounds, count_eps); }; });

    double gamma = 2.5, A = 1.0;
    auto* wc = app.add_subcommand("windows", "window membership and subgeometric chains");
    wc->add_option("--r", count_radii)->delimiter(',')->capture_default_str();
    wc->add_option("--height-bounds", bounds)->delimiter(',')->capture_default_str();
    wc->add_option("--eps", count_eps)->capture_default_str();
    wc->add_option("--gamma", gamma)->capture_default_str();
    wc->add_option("--A", A)->capture_default_str();
    wc->callback([&] { action = [&] { return windows_cmd(g, count_radii, bounds, count_eps, gamma, A); }; });

    std::vector<int> only;
    auto* st = app.add_subcommand("suite", "acceptance run");
    st->add_option("--only", only, "criterion ids")->delimiter(',');
    st->callback([&] { action = [&] { return suite(g, only); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kInputError;
    }
    set_default_jobs(g.jobs);
    try {
        return action();
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
    } catch (const DomainError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
    } catch (const CapabilityError& e) {
        std::fprintf(stderr, "unsupported: %s\n", e.what());
    } catch (const StructuralError& e) {
        std::fprintf(stderr, "structural error: %s\n", e.what());
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "precondition: %s\n", e.what());
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kViolation;
    }
    return kInputError;
}
