#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "nevlab/common.hpp"
#include "nevlab/expression.hpp"

namespace nevlab {

// Homogeneous polynomial of degree d in x0..xN with rational coefficients,
// metrized by the Fubini-Study norm |s(x)| / |x|^d. Affine sections are
// stored homogenized by x0.
class PolynomialSection {
public:
    struct Term {
        std::vector<int> exponents;
        mpq_class coeff;
        cplx coeff_d;
    };

    // Throws InputError on a zero polynomial, wrong arity or inhomogeneity.
    PolynomialSection(int ambient_dim, int degree, const RationalPolynomial& coeffs);

    // Parses a projective section in x0..xN (homogeneous), or an affine one in
    // x1..xN homogenized to `degree` (total degree when degree <= 0).
    static PolynomialSection parse(const std::string& text, int ambient_dim, bool affine, int degree = 0);

    int ambient_dim() const { return n_; }
    int degree() const { return d_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool integer_coefficients() const;

    cplx eval(const std::vector<cplx>& x) const;
    // Value and derivative along x(t) given x and dx/dt.
    Jet eval_jet(const std::vector<cplx>& x, const std::vector<cplx>& dx) const;
    mpq_class eval_exact(const std::vector<mpq_class>& x) const;
    mpz_class eval_exact(const std::vector<mpz_class>& x) const;

    // |s(x)| / |x|^d and its logarithm.
    double norm_at(const std::vector<cplx>& x) const;
    double log_norm_at(const std::vector<cplx>& x) const;

    // Maximum of the pointwise norm over a deterministic low-discrepancy
    // sample of projective space (a lower bound for the sup norm).
    double sampled_sup(std::size_t samples = 100000) const;

    std::string to_string() const;
    nlohmann::json to_json() const;

private:
    int n_;
    int d_;
    std::vector<Term> terms_;
};

// Exponent vectors of the degree-d monomials in `nvars` variables, in
// lexicographically decreasing order (x0^d first).
std::vector<std::vector<int>> homogeneous_monomials(int nvars, int d);

// Unit vectors in C^{N+1} distributed like the Fubini-Study volume, built
// from Halton points through the Box-Muller map. Index i is reproducible.
std::vector<cplx> fs_sample_point(int ambient_dim, std::uint64_t i);

}  // namespace nevlab
