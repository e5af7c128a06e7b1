#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nevlab/common.hpp"
#include "nevlab/entire_function.hpp"
#include "nevlab/polynomial_section.hpp"

namespace nevlab::curves {

enum class CurveKind { affine, projective };

struct CurvePoint {
    std::vector<cplx> values;  // f_1..f_N (affine) or f_0..f_N (projective)
    double error = 0.0;        // max componentwise error bound
};

// Exact access to the rational points on the image of a curve.
class RationalLocus {
public:
    virtual ~RationalLocus() = default;
    // Primitive integer homogeneous coordinates of phi(w), first nonzero
    // coordinate positive, or nullopt when phi(w) is not rational or provably
    // has max-height above H (such points never pass a height filter <= H).
    virtual std::optional<std::vector<mpz_class>> point(const mpq_class& w, double H) const = 0;
    // Largest max(|a|, b) of a preimage a/b whose image can have height <= H.
    virtual mpz_class preimage_height_bound(double H) const;
};

class EntireCurve {
public:
    // Affine curves list f_1..f_N; projective curves list f_0..f_N.
    // `dimension` is the ambient variety dimension n (defaults to N).
    EntireCurve(CurveKind kind, std::vector<FunctionPtr> components, std::string name = {},
                int dimension = 0);

    CurveKind kind() const { return kind_; }
    const std::vector<FunctionPtr>& components() const { return components_; }
    const std::string& name() const { return name_; }
    int ambient_dim() const { return n_ambient_; }  // N
    int dimension() const { return dimension_; }    // n

    CurvePoint evaluate(cplx z, double tol) const;
    // Multiprecision componentwise values; tol may be far below 1e-16.
    std::vector<MpComplex> evaluate_hp(const MpComplex& z, double tol, unsigned bits = 256) const;

    // Homogeneous lift F = (f_0..f_N), with f_0 = 1 for affine curves, and
    // its derivative. Throws DomainError if every coordinate vanishes.
    void lift(cplx z, std::vector<cplx>& F, std::vector<cplx>& dF) const;

    // log sum_j |F_j(z)|^2
    double log_weight(cplx z) const;
    // Density of the pulled-back Fubini-Study form against Lebesgue measure:
    // (1/pi) sum_{j<k} |F_j F_k' - F_k F_j'|^2 / |F|^4.
    double c1_density(cplx z) const;

    const RationalLocus* rational_locus() const { return locus_.get(); }
    void set_rational_locus(std::shared_ptr<const RationalLocus> locus) { locus_ = std::move(locus); }

private:
    CurveKind kind_;
    std::vector<FunctionPtr> components_;
    std::string name_;
    int n_ambient_;
    int dimension_;
    std::shared_ptr<const RationalLocus> locus_;
};

// Locus for curves whose components take exact rational values at rational
// arguments and whose coordinate `z_index` (homogeneous index) equals z, with
// f_0 = 1 in the projective case. Attached automatically by the factories.
std::shared_ptr<const RationalLocus> componentwise_locus(const EntireCurve& curve);

// Primitive integer vector proportional to x, first nonzero entry positive.
std::vector<mpz_class> primitive_vector(const std::vector<mpq_class>& x);

// [1 : z]
EntireCurve identity_curve();
// Affine curve from expression strings in z.
EntireCurve affine_curve(const std::vector<std::string>& components, const std::string& name = {});
// Projective curve from expression strings in z.
EntireCurve projective_curve(const std::vector<std::string>& components, const std::string& name = {});

struct InterpolationOptions {
    CoefficientRule rule{};
    NewtonSeriesFunction::Pattern pattern{};
};

// phi(z) = (z, f(z)) with f the Newton interpolation series over the height
// enumeration of Q; every rational maps to a rational point.
EntireCurve build_rational_curve(long height_budget, InterpolationOptions options = {});

// Pullback of a section along a curve.
class Pullback {
public:
    Pullback(const EntireCurve& curve, const PolynomialSection& section);
    // s(F(z)) for the homogeneous lift F and its z-derivative.
    Jet eval(cplx z) const;
    double norm(cplx z) const;
    double log_norm(cplx z) const;

    const EntireCurve& curve() const { return curve_; }
    const PolynomialSection& section() const { return section_; }

private:
    EntireCurve curve_;
    PolynomialSection section_;
};

}  // namespace nevlab::curves
