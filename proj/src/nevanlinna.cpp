#include "nevlab/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "nevlab/parallel.hpp"
#include "nevlab/quadrature.hpp"
#include "nevlab/zeros.hpp"

namespace nevlab::nevanlinna {

using geometry::GreenKernel;

namespace {

void check_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("radius must be positive and finite");
    }
}

void check_base(cplx w0, double r) {
    check_radius(r);
    if (!(std::abs(w0) < r)) {
        throw DomainError("base point must satisfy |w0| < r");
    }
}

// Polar integral int_0^R rho k(rho) int_0^{2pi} h(rho e^{i theta}) dtheta drho.
template <class Radial, class Integrand>
Estimate polar_integral(double R, const Radial& k, const Integrand& h, double tol) {
    double inner_err = 0.0;
    auto radial = [&](double rho) {
        const Estimate m = quadrature::periodic_mean(
            [&](double th) { return h(std::polar(rho, th)); }, 1e-3 * tol);
        inner_err = std::max(inner_err, m.error);
        return rho * k(rho) * kTwoPi * m.value;
    };
    Estimate out = quadrature::tanh_sinh(radial, 0.0, R, tol);
    out.error += kTwoPi * inner_err * R * R;
    return out;
}

}  // namespace

Estimate characteristic(const EntireCurve& curve, double r, double tol) {
    check_radius(r);
    const Estimate m = quadrature::periodic_mean([&](double th) { return curve.log_weight(std::polar(r, th)); }, tol);
    return {0.5 * m.value - 0.5 * curve.log_weight(0.0), 0.5 * m.error + 1e-15};
}

Estimate characteristic_double_integral(const EntireCurve& curve, double r, double tol) {
    check_radius(r);
    return polar_integral(
        r, [r](double rho) { return std::log(r / rho); }, [&](cplx z) { return curve.c1_density(z); }, tol);
}

Estimate characteristic_based(const EntireCurve& curve, cplx w0, double r, double tol) {
    check_base(w0, r);
    const GreenKernel k(r, w0);
    const Estimate m = quadrature::periodic_mean(
        [&](double th) { return geometry::poisson_weight(k, th) * curve.log_weight(std::polar(r, th)); }, tol);
    return {0.5 * m.value - 0.5 * curve.log_weight(w0), 0.5 * m.error + 1e-15};
}

Estimate characteristic_based_double_integral(const EntireCurve& curve, cplx w0, double r, double tol) {
    check_base(w0, r);
    const cplx a = w0 / r;
    const double jac0 = r * (1.0 - std::norm(a));
    auto h = [&](cplx u) {
        const cplx den = 1.0 + std::conj(a) * u;
        const cplx z = r * (u + a) / den;
        const double jac = jac0 / std::norm(den);
        return curve.c1_density(z) * jac * jac;
    };
    return polar_integral(1.0, [](double rho) { return -std::log(rho); }, h, tol);
}

bool CharacteristicProfile::nondecreasing() const {
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].T < samples[i - 1].T - 2.0 * (samples[i].error + samples[i - 1].error)) {
            return false;
        }
    }
    return true;
}

CharacteristicProfile characteristic_profile(const EntireCurve& curve, cplx w0, const std::vector<double>& radii,
                                             double tol) {
    CharacteristicProfile p;
    p.curve = curve.name();
    p.base_point = w0;
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end());
    p.samples.resize(rs.size());
    parallel_for(rs.size(), [&](std::size_t i) {
        const Estimate e = w0 == 0.0 ? characteristic(curve, rs[i], tol) : characteristic_based(curve, w0, rs[i], tol);
        p.samples[i] = {rs[i], e.value, e.error};
    });
    return p;
}

Estimate proximity(const EntireCurve& curve, const PolynomialSection& s, cplx w0, double r, double tol) {
    check_base(w0, r);
    const curves::Pullback pb(curve, s);
    const GreenKernel k(r, w0);
    return quadrature::periodic_mean(
        [&](double th) { return geometry::poisson_weight(k, th) * pb.log_norm(std::polar(r, th)); }, tol);
}

FmtReport verify_fmt(const EntireCurve& curve, const PolynomialSection& s, cplx w0, double r, double tol) {
    check_base(w0, r);
    const curves::Pullback pb(curve, s);
    const Jet at_w0 = pb.eval(w0);
    if (at_w0.value == 0.0 || std::abs(at_w0.value) < 1e-12 * r * std::abs(at_w0.deriv)) {
        throw PreconditionError("the section vanishes along the curve at w0; choose another base point");
    }
    const curves::Holomorphic g = [&pb](cplx z) { return pb.eval(z); };
    const curves::ZeroSearch zs = curves::count_zeros(g, r);
    FmtReport rep;
    rep.r = zs.radius_used;
    rep.w0 = w0;
    rep.section = s.to_string();
    rep.nudges = zs.nudges;
    rep.zeros = zs.total();
    const GreenKernel k(rep.r, w0);
    double zero_err = 0.0;
    for (const auto& z : zs.zeros) {
        rep.zero_sum += z.multiplicity * geometry::green(k, z.location);
        // Sensitivity of the Green function to the location error.
        const double grad = 1.0 / std::abs(z.location - w0) +
                            std::abs(w0) / std::abs(rep.r * rep.r - z.location * std::conj(w0));
        const double loc_err = std::min(z.enclosure_radius, 1e-13 * rep.r + 1e-15);
        zero_err += z.multiplicity * grad * loc_err;
    }
    const Estimate prox = proximity(curve, s, w0, rep.r, tol);
    const Estimate T = characteristic_based(curve, w0, rep.r, tol);
    rep.proximity = prox.value;
    rep.characteristic = T.value;
    rep.base_value = pb.log_norm(w0);
    rep.residual = rep.recompute_residual();
    rep.error = prox.error + T.error + zero_err + 1e-15 * (1.0 + std::abs(rep.base_value));
    return rep;
}

double basepoint_constant(const EntireCurve& curve, double epsilon) {
    if (curve.kind() != curves::CurveKind::affine) {
        throw InputError("the affine base-point comparison needs an affine curve");
    }
    if (!(epsilon > 0.0)) {
        throw DomainError("epsilon must be positive");
    }
    const curves::CurvePoint p = curve.evaluate(0.0, 0.0);
    double s = 1.0;
    for (const auto& v : p.values) {
        s += std::norm(v);
    }
    return std::max(2.0 / epsilon, 2.0 / epsilon * std::log(s));
}

BasepointReport basepoint_bound_check(const EntireCurve& curve, double r, double epsilon, std::size_t grid_size,
                                      double tol) {
    check_radius(r);
    BasepointReport rep;
    rep.r = r;
    rep.epsilon = epsilon;
    rep.A = basepoint_constant(curve, epsilon);
    rep.T_scaled = characteristic(curve, (1.0 + epsilon) * r, tol).value;
    rep.bound = rep.A * (rep.T_scaled + 1.0);
    const std::size_t n = grid_size;
    rep.grid_points = n * n;
    std::vector<double> ratio(n * n, 0.0);
    const double T0 = characteristic(curve, r, tol).value;
    parallel_for(n * n, [&](std::size_t idx) {
        const std::size_t i = idx / n;
        const std::size_t j = idx % n;
        if (i == 0) {
            ratio[idx] = T0 / rep.bound;
            return;
        }
        const cplx w = std::polar(r * static_cast<double>(i) / static_cast<double>(n),
                                  kTwoPi * static_cast<double>(j) / static_cast<double>(n));
        ratio[idx] = characteristic_based(curve, w, r, tol).value / rep.bound;
    });
    for (std::size_t idx = 0; idx < ratio.size(); ++idx) {
        if (ratio[idx] > 1.0) {
            ++rep.violations;
        }
        if (ratio[idx] > rep.worst_ratio) {
            rep.worst_ratio = ratio[idx];
            const std::size_t i = idx / n;
            const std::size_t j = idx % n;
            rep.worst_w = std::polar(r * static_cast<double>(i) / static_cast<double>(n),
                                     kTwoPi * static_cast<double>(j) / static_cast<double>(n));
        }
    }
    return rep;
}

ProjectiveBoundReport projective_basepoint_bound(const EntireCurve& curve, double r,
                                                 const ProjectiveBoundOptions& opt) {
    if (curve.kind() != curves::CurveKind::projective) {
        throw InputError("the projective base-point bound needs a projective curve");
    }
    check_radius(r);
    ProjectiveBoundReport rep;
    rep.r = r;
    rep.T_r = characteristic(curve, r, opt.tol).value;
    if (!(rep.T_r > 1.0)) {
        rep.applicable = false;
        return rep;
    }
    rep.applicable = true;
    rep.T_er = characteristic(curve, std::exp(1.0) * r, opt.tol).value;
    rep.H = 1.0 / rep.T_r;
    rep.bound = (std::log(rep.T_r) + std::log(r) + std::log(2.0)) * rep.T_er;
    rep.radii_bound = 5.0 / rep.T_r;

    // Cell masses: 3x3 Gauss-Legendre integral of the density, weighted by
    // log(er/|z|) at the cell centre.
    static constexpr double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const std::size_t nr = opt.radial_cells;
    const std::size_t nt = opt.angular_cells;
    std::vector<geometry::Atom> atoms(nr * nt);
    parallel_for(nr * nt, [&](std::size_t idx) {
        const std::size_t i = idx / nt;
        const std::size_t j = idx % nt;
        const double r0 = r * static_cast<double>(i) / static_cast<double>(nr);
        const double r1 = r * static_cast<double>(i + 1) / static_cast<double>(nr);
        const double t0 = kTwoPi * static_cast<double>(j) / static_cast<double>(nt);
        const double t1 = kTwoPi * static_cast<double>(j + 1) / static_cast<double>(nt);
        double mass = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double rho = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gx[a];
            for (int b = 0; b < 3; ++b) {
                const double th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[b];
                mass += gw[a] * gw[b] * rho * curve.c1_density(std::polar(rho, th));
            }
        }
        mass *= 0.25 * (r1 - r0) * (t1 - t0);
        const double rc = 0.5 * (r0 + r1);
        atoms[idx] = {std::polar(rc, 0.5 * (t0 + t1)), mass * std::log(std::exp(1.0) * r / rc)};
    });
    const geometry::AtomicMeasure mu(atoms);
    rep.atoms = atoms.size();
    rep.exceptional = geometry::cartan_exceptional(mu, rep.H);
    rep.radii_sum = rep.exceptional.radii_sum();

    std::vector<cplx> ws;
    for (std::uint64_t i = 0; ws.size() < opt.samples && i < 50 * opt.samples; ++i) {
        const cplx w = quadrature::halton_disk_point(i, 0.0, r * (1.0 - 1e-6));
        if (!rep.exceptional.contains(w)) {
            ws.push_back(w);
        }
    }
    rep.samples = ws.size();
    std::vector<double> tw(ws.size());
    parallel_for(ws.size(), [&](std::size_t k) { tw[k] = characteristic_based(curve, ws[k], r, opt.tol).value; });
    for (const double t : tw) {
        rep.max_T_w0 = std::max(rep.max_T_w0, t);
        if (t > rep.bound) {
            ++rep.violations;
        }
    }
    rep.slack = rep.max_T_w0 > 0.0 ? rep.bound / rep.max_T_w0 : std::numeric_limits<double>::infinity();
    return rep;
}

bool ZeroCountReport::consistent() const {
    for (const auto& row : counts) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k] > C1 * T_scaled[k] + C2 + 1e-9) {
                return false;
            }
        }
    }
    return true;
}

ZeroCountReport zero_count_bound_check(const EntireCurve& curve, int d, double epsilon,
                                       const std::vector<PolynomialSection>& sections,
                                       const std::vector<double>& radii) {
    if (radii.empty() || sections.empty()) {
        throw InputError("zero_count_bound_check needs sections and radii");
    }
    ZeroCountReport rep;
    rep.degree = d;
    rep.epsilon = epsilon;
    rep.radii = radii;
    std::sort(rep.radii.begin(), rep.radii.end());
    for (const auto& s : sections) {
        if (s.degree() != d) {
            throw InputError("section " + s.to_string() + " is not of degree " + std::to_string(d));
        }
        rep.sections.push_back(s.to_string());
    }
    rep.T_scaled.resize(rep.radii.size());
    parallel_for(rep.radii.size(), [&](std::size_t k) {
        rep.T_scaled[k] = characteristic(curve, (1.0 + epsilon) * rep.radii[k]).value;
    });
    rep.counts.assign(sections.size(), std::vector<int>(rep.radii.size(), 0));
    parallel_for(sections.size() * rep.radii.size(), [&](std::size_t idx) {
        const std::size_t si = idx / rep.radii.size();
        const std::size_t k = idx % rep.radii.size();
        const curves::Pullback pb(curve, sections[si]);
        double rr = rep.radii[k];
        int nudges = 0;
        rep.counts[si][k] = curves::winding_number_nudged([&pb](cplx z) { return pb.eval(z); }, rr, nudges);
    });
    for (const auto& row : rep.counts) {
        rep.C2 = std::max(rep.C2, static_cast<double>(row[0]));
        for (std::size_t k = 0; k < row.size(); ++k) {
            rep.max_ratio = std::max(rep.max_ratio, row[k] / rep.T_scaled[k]);
        }
    }
    for (const auto& row : rep.counts) {
        for (std::size_t k = 1; k < row.size(); ++k) {
            rep.C1 = std::max(rep.C1, std::max(0.0, row[k] - rep.C2) / rep.T_scaled[k]);
        }
    }
    return rep;
}

std::vector<PolynomialSection> random_sections(int ambient_dim, int d, std::size_t count, std::uint64_t seed,
                                               int coeff_bound) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-coeff_bound, coeff_bound);
    const auto monos = homogeneous_monomials(ambient_dim + 1, d);
    std::vector<PolynomialSection> out;
    while (out.size() < count) {
        RationalPolynomial p;
        for (const auto& m : monos) {
            const int c = coeff(rng);
            if (c != 0) {
                p[m] = c;
            }
        }
        if (!p.empty()) {
            out.emplace_back(ambient_dim, d, p);
        }
    }
    return out;
}

StabilityReport zero_count_stability(const EntireCurve& curve, int d, double epsilon,
                                     const std::vector<double>& radii, std::size_t sections_per_draw,
                                     std::size_t draws, std::uint64_t seed) {
    StabilityReport rep;
    for (std::size_t k = 0; k < draws; ++k) {
        const auto secs = random_sections(curve.ambient_dim(), d, sections_per_draw, seed + 1000003ULL * k);
        rep.C1.push_back(zero_count_bound_check(curve, d, epsilon, secs, radii).C1);
    }
    rep.mean = std::accumulate(rep.C1.begin(), rep.C1.end(), 0.0) / static_cast<double>(rep.C1.size());
    for (const double c : rep.C1) {
        rep.max_deviation = std::max(rep.max_deviation, std::abs(c - rep.mean) / rep.mean);
    }
    return rep;
}

GrowthReport growth_check(const curves::FunctionPtr& f, double r, double tol) {
    check_radius(r);
    const EntireCurve curve(curves::CurveKind::projective,
                            {std::make_shared<curves::ExpressionFunction>(Expression::parse("1")), f}, "growth");
    GrowthReport rep;
    rep.r = r;
    rep.T_2r = characteristic(curve, 2.0 * r, tol).value;
    double sup = 0.0;
    for (int k = 0; k < 4096; ++k) {
        sup = std::max(sup, std::abs(f->eval(std::polar(r, kTwoPi * k / 4096.0), 0.0).value));
    }
    rep.log_sup = std::max(0.0, std::log(sup));
    rep.slack = 1.5 * std::log(1.0 + std::norm(f->eval(0.0, 0.0).value));
    return rep;
}

CompactBasepointReport compact_basepoint_check(const EntireCurve& curve, double r0, double epsilon,
                                               const std::vector<double>& radii, std::size_t samples) {
    CompactBasepointReport rep;
    rep.r0 = r0;
    rep.epsilon = epsilon;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (const double r : radii) {
        if (r <= r0) {
            continue;
        }
        const double Ts = characteristic(curve, (1.0 + epsilon) * r).value;
        std::vector<double> ratio(samples);
        parallel_for(samples, [&](std::size_t i) {
            const cplx w = quadrature::halton_disk_point(i, 0.0, r0);
            ratio[i] = characteristic_based(curve, w, r).value / Ts;
        });
        for (const double q : ratio) {
            rep.min_ratio = std::min(rep.min_ratio, q);
            rep.max_ratio = std::max(rep.max_ratio, q);
            ++rep.evaluations;
        }
    }
    return rep;
}

}  // namespace nevlab::nevanlinna
