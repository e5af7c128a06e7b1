#include "nevlab/polynomial_section.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nevlab/quadrature.hpp"

namespace nevlab {

PolynomialSection::PolynomialSection(int ambient_dim, int degree, const RationalPolynomial& coeffs)
    : n_(ambient_dim), d_(degree) {
    if (ambient_dim < 1 || degree < 1) {
        throw InputError("section needs ambient dimension >= 1 and degree >= 1");
    }
    for (const auto& [e, c] : coeffs) {
        if (c == 0) {
            continue;
        }
        if (static_cast<int>(e.size()) != n_ + 1) {
            throw InputError("section exponent vector has wrong length");
        }
        if (std::accumulate(e.begin(), e.end(), 0) != d_) {
            throw InputError("section is not homogeneous of degree " + std::to_string(d_));
        }
        terms_.push_back({e, c, cplx(c.get_d(), 0.0)});
    }
    if (terms_.empty()) {
        throw InputError("section has no nonzero coefficient");
    }
}

PolynomialSection PolynomialSection::parse(const std::string& text, int ambient_dim, bool affine, int degree) {
    const Expression e = Expression::parse(text, Expression::Variables::section);
    if (e.section_arity() > ambient_dim + 1) {
        throw InputError("section \"" + text + "\" uses variables beyond x" + std::to_string(ambient_dim));
    }
    RationalPolynomial p = e.expand(ambient_dim + 1);
    if (p.empty()) {
        throw InputError("section \"" + text + "\" is identically zero");
    }
    int total = 0;
    for (const auto& [ex, c] : p) {
        total = std::max(total, std::accumulate(ex.begin(), ex.end(), 0));
    }
    if (!affine) {
        return PolynomialSection(ambient_dim, degree > 0 ? degree : total, p);
    }
    for (const auto& [ex, c] : p) {
        if (ex[0] != 0) {
            throw InputError("affine section \"" + text + "\" must not use x0");
        }
    }
    const int d = degree > 0 ? degree : std::max(total, 1);
    if (total > d) {
        throw InputError("affine section \"" + text + "\" exceeds degree " + std::to_string(d));
    }
    RationalPolynomial h;
    for (const auto& [ex, c] : p) {
        std::vector<int> e2 = ex;
        e2[0] = d - std::accumulate(ex.begin(), ex.end(), 0);
        h[e2] = c;
    }
    return PolynomialSection(ambient_dim, d, h);
}

bool PolynomialSection::integer_coefficients() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff.get_den() == 1; });
}

namespace {

void check_arity(std::size_t got, int n) {
    if (got != static_cast<std::size_t>(n + 1)) {
        throw InputError("section evaluated at a point with " + std::to_string(got) +
                         " coordinates, expected " + std::to_string(n + 1));
    }
}

}  // namespace

cplx PolynomialSection::eval(const std::vector<cplx>& x) const {
    check_arity(x.size(), n_);
    cplx s = 0.0;
    for (const auto& t : terms_) {
        cplx m = t.coeff_d;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (int k = 0; k < t.exponents[i]; ++k) {
                m *= x[i];
            }
        }
        s += m;
    }
    return s;
}

Jet PolynomialSection::eval_jet(const std::vector<cplx>& x, const std::vector<cplx>& dx) const {
    check_arity(x.size(), n_);
    check_arity(dx.size(), n_);
    Jet out;
    for (const auto& t : terms_) {
        cplx v = t.coeff_d;
        cplx dv = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (int k = 0; k < t.exponents[i]; ++k) {
                dv = dv * x[i] + v * dx[i];
                v *= x[i];
            }
        }
        out.value += v;
        out.deriv += dv;
    }
    return out;
}

mpq_class PolynomialSection::eval_exact(const std::vector<mpq_class>& x) const {
    check_arity(x.size(), n_);
    mpq_class s = 0;
    for (const auto& t : terms_) {
        mpq_class m = t.coeff;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (int k = 0; k < t.exponents[i]; ++k) {
                m *= x[i];
            }
        }
        s += m;
    }
    return s;
}

mpz_class PolynomialSection::eval_exact(const std::vector<mpz_class>& x) const {
    if (!integer_coefficients()) {
        throw InputError("integer evaluation needs integer coefficients");
    }
    check_arity(x.size(), n_);
    mpz_class s = 0;
    for (const auto& t : terms_) {
        mpz_class m = t.coeff.get_num();
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (int k = 0; k < t.exponents[i]; ++k) {
                m *= x[i];
            }
        }
        s += m;
    }
    return s;
}

double PolynomialSection::norm_at(const std::vector<cplx>& x) const {
    return std::exp(log_norm_at(x));
}

double PolynomialSection::log_norm_at(const std::vector<cplx>& x) const {
    check_arity(x.size(), n_);
    double m = 0.0;
    for (const auto& c : x) {
        m = std::max(m, std::abs(c));
    }
    if (m == 0.0) {
        throw DomainError("section norm at the zero vector");
    }
    // Rescale so the largest coordinate has modulus 1 before evaluating.
    std::vector<cplx> y(x.size());
    double n2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] / m;
        n2 += std::norm(y[i]);
    }
    return std::log(std::abs(eval(y))) - 0.5 * d_ * std::log(n2);
}

namespace {

void monomials_rec(int var, int nvars, int left, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (var == nvars - 1) {
        cur[static_cast<std::size_t>(var)] = left;
        out.push_back(cur);
        return;
    }
    for (int k = left; k >= 0; --k) {
        cur[static_cast<std::size_t>(var)] = k;
        monomials_rec(var + 1, nvars, left - k, cur, out);
    }
}

}  // namespace

std::vector<std::vector<int>> homogeneous_monomials(int nvars, int d) {
    if (nvars < 1 || d < 0) {
        throw DomainError("homogeneous_monomials: need nvars >= 1 and d >= 0");
    }
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(nvars), 0);
    monomials_rec(0, nvars, d, cur, out);
    return out;
}

std::vector<cplx> fs_sample_point(int ambient_dim, std::uint64_t i) {
    static constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                           47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107};
    const int coords = ambient_dim + 1;
    if (2 * coords > static_cast<int>(std::size(kPrimes))) {
        throw DomainError("fs_sample_point: ambient dimension too large");
    }
    std::vector<cplx> x(static_cast<std::size_t>(coords));
    double n2 = 0.0;
    for (int k = 0; k < coords; ++k) {
        const double u1 = quadrature::radical_inverse(i + 1, kPrimes[2 * k]);
        const double u2 = quadrature::radical_inverse(i + 1, kPrimes[2 * k + 1]);
        const double rad = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
        x[static_cast<std::size_t>(k)] = std::polar(rad, kTwoPi * u2);
        n2 += rad * rad;
    }
    const double s = 1.0 / std::sqrt(n2);
    for (auto& c : x) {
        c *= s;
    }
    return x;
}

double PolynomialSection::sampled_sup(std::size_t samples) const {
    double best = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        best = std::max(best, std::abs(eval(fs_sample_point(n_, i))));
    }
    return best;
}

std::string PolynomialSection::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        const bool neg = t.coeff < 0;
        if (!first) {
            os << (neg ? " - " : " + ");
        } else if (neg) {
            os << "-";
        }
        first = false;
        const mpq_class a = abs(t.coeff);
        bool need_star = false;
        if (a != 1) {
            os << a.get_str();
            need_star = true;
        }
        bool any = false;
        for (std::size_t i = 0; i < t.exponents.size(); ++i) {
            if (t.exponents[i] == 0) {
                continue;
            }
            os << (need_star ? "*" : "") << "x" << i;
            if (t.exponents[i] > 1) {
                os << "^" << t.exponents[i];
            }
            need_star = true;
            any = true;
        }
        if (!any && a == 1) {
            os << "1";
        }
    }
    return os.str();
}

nlohmann::json PolynomialSection::to_json() const {
    nlohmann::json j;
    j["ambient_dim"] = n_;
    j["degree"] = d_;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : terms_) {
        j["terms"].push_back({{"exponents", t.exponents}, {"coeff", t.coeff.get_str()}});
    }
    j["text"] = to_string();
    return j;
}

}  // namespace nevlab
