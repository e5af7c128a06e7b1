#include "nevlab/entire_curve.hpp"

#include <algorithm>
#include <cmath>

namespace nevlab::curves {

mpz_class RationalLocus::preimage_height_bound(double H) const {
    if (H < 0.0) {
        return 0;
    }
    return mpz_class(std::floor(std::exp(H) * (1.0 + 1e-12)));
}

EntireCurve::EntireCurve(CurveKind kind, std::vector<FunctionPtr> components, std::string name, int dimension)
    : kind_(kind), components_(std::move(components)), name_(std::move(name)) {
    if (components_.empty() || (kind_ == CurveKind::projective && components_.size() < 2)) {
        throw InputError("curve needs at least one affine or two projective components");
    }
    for (const auto& c : components_) {
        if (!c) {
            throw InputError("curve component is null");
        }
    }
    n_ambient_ = static_cast<int>(components_.size()) - (kind_ == CurveKind::projective ? 1 : 0);
    dimension_ = dimension > 0 ? dimension : n_ambient_;
}

CurvePoint EntireCurve::evaluate(cplx z, double tol) const {
    CurvePoint p;
    for (const auto& c : components_) {
        const FunctionValue v = c->eval(z, tol);
        p.values.push_back(v.value);
        p.error = std::max(p.error, v.error);
    }
    if (kind_ == CurveKind::projective &&
        std::all_of(p.values.begin(), p.values.end(), [](cplx v) { return v == 0.0; })) {
        throw DomainError("projective components vanish simultaneously");
    }
    return p;
}

std::vector<MpComplex> EntireCurve::evaluate_hp(const MpComplex& z, double tol, unsigned bits) const {
    std::vector<MpComplex> out;
    for (const auto& c : components_) {
        out.push_back(c->eval_hp(z, tol, bits));
    }
    return out;
}

void EntireCurve::lift(cplx z, std::vector<cplx>& F, std::vector<cplx>& dF) const {
    F.clear();
    dF.clear();
    if (kind_ == CurveKind::affine) {
        F.push_back(1.0);
        dF.push_back(0.0);
    }
    bool nonzero = kind_ == CurveKind::affine;
    for (const auto& c : components_) {
        const FunctionValue v = c->eval(z, 0.0);
        F.push_back(v.value);
        dF.push_back(v.deriv);
        nonzero = nonzero || v.value != 0.0;
    }
    if (!nonzero) {
        throw DomainError("projective components vanish simultaneously");
    }
}

double EntireCurve::log_weight(cplx z) const {
    std::vector<cplx> F, dF;
    lift(z, F, dF);
    double m = 0.0;
    for (const auto& f : F) {
        m = std::max(m, std::abs(f));
    }
    double s = 0.0;
    for (const auto& f : F) {
        s += std::norm(f / m);
    }
    return 2.0 * std::log(m) + std::log(s);
}

double EntireCurve::c1_density(cplx z) const {
    std::vector<cplx> F, dF;
    lift(z, F, dF);
    double m = 0.0;
    for (const auto& f : F) {
        m = std::max(m, std::abs(f));
    }
    double n2 = 0.0;
    for (auto& f : F) {
        f /= m;
        n2 += std::norm(f);
    }
    for (auto& f : dF) {
        f /= m;
    }
    double w = 0.0;
    for (std::size_t j = 0; j < F.size(); ++j) {
        for (std::size_t k = j + 1; k < F.size(); ++k) {
            w += std::norm(F[j] * dF[k] - F[k] * dF[j]);
        }
    }
    return w / (kPi * n2 * n2);
}

std::vector<mpz_class> primitive_vector(const std::vector<mpq_class>& x) {
    mpz_class l = 1;
    for (const auto& q : x) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    }
    std::vector<mpz_class> v;
    mpz_class g = 0;
    for (const auto& q : x) {
        v.push_back(q.get_num() * (l / q.get_den()));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.back().get_mpz_t());
    }
    if (g == 0) {
        throw DomainError("primitive_vector of the zero vector");
    }
    const auto first = std::find_if(v.begin(), v.end(), [](const mpz_class& c) { return c != 0; });
    if (*first < 0) {
        g = -g;
    }
    for (auto& c : v) {
        c /= g;
    }
    return v;
}

namespace {

bool is_poly(const FunctionPtr& f, const std::vector<mpq_class>& want) {
    const auto p = f->rational_polynomial();
    return p && *p == want;
}

class ComponentwiseLocus final : public RationalLocus {
public:
    ComponentwiseLocus(std::vector<FunctionPtr> comps, bool affine) : comps_(std::move(comps)), affine_(affine) {}

    std::optional<std::vector<mpz_class>> point(const mpq_class& w, double H) const override {
        const mpz_class bound = preimage_height_bound(H);
        std::vector<mpq_class> x;
        if (affine_) {
            x.emplace_back(1);
        }
        for (const auto& c : comps_) {
            std::optional<mpq_class> v;
            if (const auto* ns = dynamic_cast<const NewtonSeriesFunction*>(c.get())) {
                v = ns->exact_at_if_small(w, bound);
            } else {
                v = c->exact_at(w);
                if (v && (abs(v->get_num()) > bound || v->get_den() > bound)) {
                    v.reset();
                }
            }
            if (!v) {
                return std::nullopt;
            }
            x.push_back(*v);
        }
        return primitive_vector(x);
    }

private:
    std::vector<FunctionPtr> comps_;
    bool affine_;
};

}  // namespace

std::shared_ptr<const RationalLocus> componentwise_locus(const EntireCurve& curve) {
    const auto& comps = curve.components();
    const std::vector<mpq_class> zpoly{mpq_class(0), mpq_class(1)};
    bool has_z = false;
    if (curve.kind() == CurveKind::affine) {
        has_z = std::any_of(comps.begin(), comps.end(), [&](const FunctionPtr& f) { return is_poly(f, zpoly); });
    } else {
        has_z = is_poly(comps[0], {mpq_class(1)}) &&
                std::any_of(comps.begin() + 1, comps.end(), [&](const FunctionPtr& f) { return is_poly(f, zpoly); });
    }
    if (!has_z) {
        return nullptr;
    }
    for (const auto& c : comps) {
        if (!c->rational_polynomial() && !dynamic_cast<const NewtonSeriesFunction*>(c.get())) {
            return nullptr;
        }
    }
    return std::make_shared<ComponentwiseLocus>(comps, curve.kind() == CurveKind::affine);
}

namespace {

EntireCurve expression_curve(CurveKind kind, const std::vector<std::string>& components, const std::string& name) {
    std::vector<FunctionPtr> fs;
    for (const auto& s : components) {
        fs.push_back(std::make_shared<ExpressionFunction>(Expression::parse(s)));
    }
    EntireCurve c(kind, std::move(fs), name);
    c.set_rational_locus(componentwise_locus(c));
    return c;
}

}  // namespace

EntireCurve identity_curve() {
    return expression_curve(CurveKind::projective, {"1", "z"}, "identity");
}

EntireCurve affine_curve(const std::vector<std::string>& components, const std::string& name) {
    return expression_curve(CurveKind::affine, components, name);
}

EntireCurve projective_curve(const std::vector<std::string>& components, const std::string& name) {
    return expression_curve(CurveKind::projective, components, name);
}

EntireCurve build_rational_curve(long height_budget, InterpolationOptions options) {
    std::vector<FunctionPtr> fs{
        std::make_shared<ExpressionFunction>(Expression::parse("z")),
        std::make_shared<NewtonSeriesFunction>(options.rule, options.pattern, height_budget)};
    EntireCurve c(CurveKind::affine, std::move(fs), "interpolation", 2);
    c.set_rational_locus(componentwise_locus(c));
    return c;
}

Pullback::Pullback(const EntireCurve& curve, const PolynomialSection& section)
    : curve_(curve), section_(section) {
    if (section.ambient_dim() != curve.ambient_dim()) {
        throw InputError("section lives on P^" + std::to_string(section.ambient_dim()) +
                         " but the curve maps to dimension " + std::to_string(curve.ambient_dim()));
    }
}

Jet Pullback::eval(cplx z) const {
    std::vector<cplx> F, dF;
    curve_.lift(z, F, dF);
    return section_.eval_jet(F, dF);
}

double Pullback::norm(cplx z) const {
    return std::exp(log_norm(z));
}

double Pullback::log_norm(cplx z) const {
    std::vector<cplx> F, dF;
    curve_.lift(z, F, dF);
    return section_.log_norm_at(F);
}

}  // namespace nevlab::curves
