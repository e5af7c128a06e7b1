#include "nevlab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nevlab/nevanlinna.hpp"
#include "nevlab/parallel.hpp"

namespace nevlab::counting {

double CountRecord::envelope() const {
    return T_wide * std::exp(epsilon * (H + T_scaled));
}

std::vector<CountRecord> count_table(const EntireCurve& curve, std::vector<double> r_grid,
                                     std::vector<double> H_grid, double epsilon) {
    if (!curve.rational_locus()) {
        throw CapabilityError("curve \"" + curve.name() + "\" has no rational locus");
    }
    if (!(epsilon > 0.0)) {
        throw DomainError("epsilon must be positive");
    }
    std::sort(r_grid.begin(), r_grid.end());
    std::sort(H_grid.begin(), H_grid.end());
    const double H_top = H_grid.empty() ? -1.0 : H_grid.back();
    std::vector<CountRecord> out(r_grid.size() * H_grid.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const double r = r_grid[i];
        const double T_r = nevanlinna::characteristic(curve, r).value;
        const double T_s = nevanlinna::characteristic(curve, (1.0 + epsilon) * r).value;
        const double T_w = nevanlinna::characteristic(curve, (2.0 + epsilon) * r).value;
        geometry::DiskSet E(geometry::DiskLabel::exceptional);
        if (curve.kind() == curves::CurveKind::projective) {
            const auto pb = nevanlinna::projective_basepoint_bound(curve, r);
            if (pb.applicable) {
                E = pb.exceptional;
            }
        }
        const heights::Enumeration all = heights::enumerate_points(curve, r, H_top, &E);
        for (std::size_t j = 0; j < H_grid.size(); ++j) {
            CountRecord& rec = out[i * H_grid.size() + j];
            rec.r = r;
            rec.H = H_grid[j];
            rec.T_r = T_r;
            rec.T_scaled = T_s;
            rec.T_wide = T_w;
            rec.epsilon = epsilon;
            for (const auto& p : all.points) {
                rec.count += heights::within_height(p.h_fs, rec.H) ? 1 : 0;
            }
            for (const auto& p : all.excluded) {
                rec.excluded += heights::within_height(p.h_fs, rec.H) ? 1 : 0;
            }
            const double env = rec.envelope();
            rec.kappa = env > 0.0 ? static_cast<double>(rec.count) / env : 0.0;
        }
    }
    return out;
}

EnvelopeReport bp_envelope_check(const std::vector<CountRecord>& records, double epsilon) {
    EnvelopeReport rep;
    rep.epsilon = epsilon;
    if (records.empty()) {
        return rep;
    }
    double r_top = 0.0, H_top = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        CountRecord rec = records[i];
        rec.epsilon = epsilon;
        const double env = rec.envelope();
        rep.kappa.push_back(env > 0.0 ? static_cast<double>(rec.count) / env : 0.0);
        if (rep.kappa.back() > rep.max_kappa) {
            rep.max_kappa = rep.kappa.back();
            arg = i;
        }
        r_top = std::max(r_top, rec.r);
        H_top = std::max(H_top, rec.H);
    }
    std::vector<double> sorted = rep.kappa;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    rep.median_kappa = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    rep.max_off_far_edge = records[arg].r < r_top && records[arg].H < H_top;
    // Grid diagonal from the smallest to the largest (r, H).
    std::vector<double> rs, hs;
    for (const auto& rec : records) {
        rs.push_back(rec.r);
        hs.push_back(rec.H);
    }
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    std::vector<double> diag;
    const std::size_t steps = std::max(rs.size(), hs.size());
    for (std::size_t k = 0; k < steps; ++k) {
        const double f = steps > 1 ? static_cast<double>(k) / static_cast<double>(steps - 1) : 0.0;
        const double r = rs[static_cast<std::size_t>(std::lround(f * static_cast<double>(rs.size() - 1)))];
        const double h = hs[static_cast<std::size_t>(std::lround(f * static_cast<double>(hs.size() - 1)))];
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].r == r && records[i].H == h) {
                diag.push_back(rep.kappa[i]);
            }
        }
    }
    rep.diagonal_decreasing = true;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        rep.diagonal_decreasing = rep.diagonal_decreasing && diag[i] <= diag[i - 1];
    }
    return rep;
}

double vanishing_threshold(double T_scaled, double H, int d, int n) {
    return std::exp(-(T_scaled + H) / std::pow(static_cast<double>(d), n - 1));
}

double vanishing_threshold_projective(double T_r, double T_er, double H, int d, int n) {
    return std::exp(-(std::log(T_r) * T_er + H) / std::pow(static_cast<double>(d), n - 1));
}

std::string to_string(VanishingStatus s) {
    switch (s) {
        case VanishingStatus::verified:
            return "verified";
        case VanishingStatus::failed:
            return "failed";
        case VanishingStatus::vacuous:
            return "vacuous";
    }
    return "?";
}

SmallDiamReport small_diam_vanishing_test(const EntireCurve& curve, double r, double H, int d, double epsilon,
                                          const SmallDiamOptions& opt) {
    if (curve.kind() != curves::CurveKind::affine) {
        throw InputError("the small-diameter test needs an affine curve");
    }
    SmallDiamReport rep;
    rep.r = r;
    rep.r1 = (1.0 + epsilon) * r;
    rep.H = H;
    rep.d = d;
    rep.T_scaled = nevanlinna::characteristic(curve, rep.r1).value;
    const int n = std::max(curve.dimension(), 2);
    rep.threshold = vanishing_threshold(rep.T_scaled, H, d, n);
    // Pseudo-hyperbolic radius whose ball has diameter exactly the threshold.
    const double t = rep.threshold;
    rep.ball_radius = t / (1.0 + std::sqrt(1.0 - t * t));

    const heights::Enumeration S = heights::enumerate_points(curve, r, H);
    std::size_t best_count = 0;
    std::vector<heights::HeightedPoint> best;
    for (const auto& c : S.points) {
        const cplx center(c.w.get_d(), 0.0);
        std::vector<heights::HeightedPoint> in;
        for (const auto& p : S.points) {
            if (geometry::hyperbolic_distance(rep.r1, center, cplx(p.w.get_d(), 0.0)) < rep.ball_radius) {
                in.push_back(p);
            }
        }
        if (in.size() > best_count) {
            best_count = in.size();
            best = std::move(in);
            rep.ball_center = center;
        }
    }
    rep.in_ball = best;
    std::vector<cplx> zs;
    for (const auto& p : best) {
        zs.emplace_back(p.w.get_d(), 0.0);
    }
    rep.diameter = geometry::diam(rep.r1, zs);
    if (best.size() < 2) {
        rep.reason = "no ball of the allowed diameter holds two points of S(r, H)";
        return rep;
    }
    const int N = curve.ambient_dim();
    const std::size_t h0 = auxpoly::monomial_basis(N, d).size();
    const auto lo = static_cast<std::size_t>(std::max(1.0, std::ceil((1.0 - 2.0 * opt.alpha) * static_cast<double>(h0))));
    const auto hi = std::min(static_cast<std::size_t>(std::floor((1.0 - opt.alpha) * static_cast<double>(h0))),
                             best.size() - 1);
    if (hi < lo) {
        rep.reason = "no subset size in the admissible window leaves a point out";
        return rep;
    }
    rep.subset_size = hi;
    std::vector<heights::RationalPoint> subset;
    for (std::size_t i = 0; i < rep.subset_size; ++i) {
        subset.push_back(best[i].point);
    }
    const auxpoly::AuxPolynomial aux = auxpoly::build_aux_polynomial(subset, d, opt.alpha);
    rep.polynomial = aux.to_json();
    bool all_zero = aux.vanishes_exactly();
    for (std::size_t i = rep.subset_size; i < best.size(); ++i) {
        const mpz_class v = aux.section.eval_exact(best[i].point.coords());
        rep.held_out_values.emplace_back(v);
        all_zero = all_zero && v == 0;
    }
    rep.status = all_zero ? VanishingStatus::verified : VanishingStatus::failed;
    return rep;
}

bool window_member(std::size_t count, double x, double y, double epsilon, double gamma) {
    const double s = x + y;
    return static_cast<double>(count) <= epsilon * std::pow(std::max(s, 0.0), gamma);
}

bool WindowReport::any_spanning() const {
    return std::any_of(spanning.begin(), spanning.end(), [](bool b) { return b; });
}

bool WindowReport::flags_consistent() const {
    return std::all_of(entries.begin(), entries.end(), [&](const WindowEntry& e) {
        return e.member == window_member(e.count, e.x, e.y, epsilon, gamma);
    });
}

WindowReport window_scan(const std::vector<WindowEntry>& table, double gamma, double epsilon, double A, int n) {
    WindowReport rep;
    rep.gamma = gamma;
    rep.epsilon = epsilon;
    rep.A = A;
    rep.n = n;
    rep.headline = n > 1 && gamma > static_cast<double>(n) / static_cast<double>(n - 1);
    rep.entries = table;
    for (auto& e : rep.entries) {
        e.member = window_member(e.count, e.x, e.y, epsilon, gamma);
    }
    if (rep.entries.empty()) {
        return rep;
    }
    double nmin = std::numeric_limits<double>::infinity(), nmax = 0.0;
    for (const auto& e : rep.entries) {
        nmin = std::min(nmin, e.norm());
        nmax = std::max(nmax, e.norm());
    }
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        for (std::size_t j = i + 1; j < rep.entries.size(); ++j) {
            rep.span = std::max(rep.span, std::abs(rep.entries[i].x - rep.entries[j].x) +
                                              std::abs(rep.entries[i].y - rep.entries[j].y));
        }
    }
    std::vector<std::size_t> comp;
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        if (!rep.entries[i].member) {
            comp.push_back(i);
        }
    }
    std::stable_sort(comp.begin(), comp.end(),
                     [&](std::size_t a, std::size_t b) { return rep.entries[a].norm() < rep.entries[b].norm(); });
    // Maximal runs with consecutive norm ratios at most A + 1.
    std::vector<std::size_t> cur;
    auto flush = [&] {
        if (cur.size() >= 2) {
            const double first = rep.entries[cur.front()].norm();
            const double last = rep.entries[cur.back()].norm();
            rep.chains.push_back(cur);
            rep.spanning.push_back(first <= (A + 1.0) * nmin && last >= nmax / (A + 1.0) && last > first);
        }
        cur.clear();
    };
    for (const std::size_t i : comp) {
        if (!cur.empty() && rep.entries[i].norm() > (A + 1.0) * rep.entries[cur.back()].norm()) {
            flush();
        }
        cur.push_back(i);
    }
    flush();
    // Largest l1 disk around a member that avoids every non-member.
    if (comp.empty()) {
        rep.largest_disk = rep.span;
    } else {
        for (const auto& e : rep.entries) {
            if (!e.member) {
                continue;
            }
            double dmin = std::numeric_limits<double>::infinity();
            for (const std::size_t c : comp) {
                dmin = std::min(dmin, std::abs(e.x - rep.entries[c].x) + std::abs(e.y - rep.entries[c].y));
            }
            rep.largest_disk = std::max(rep.largest_disk, dmin);
        }
    }
    return rep;
}

WindowReport window_scan(const EntireCurve& curve, double gamma, double epsilon, double A,
                         const std::vector<CountRecord>& table) {
    std::vector<WindowEntry> entries;
    for (const auto& rec : table) {
        entries.push_back({rec.T_scaled, rec.H, rec.count, false});
    }
    return window_scan(entries, gamma, epsilon, A, std::max(curve.dimension(), 2));
}

}  // namespace nevlab::counting
