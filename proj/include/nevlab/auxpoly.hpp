#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "nevlab/heights.hpp"
#include "nevlab/polynomial_section.hpp"

namespace nevlab::auxpoly {

using heights::RationalPoint;

// Exponents of the degree-d monomials in x0..xN.
std::vector<std::vector<int>> monomial_basis(int ambient_dim, int d);

class EvaluationSystem {
public:
    // Rows are the monomials evaluated at the primitive coordinates of each
    // point, so every entry is an integer.
    EvaluationSystem(const std::vector<RationalPoint>& points, int d);
    // Raw integer matrix; rows x columns.
    explicit EvaluationSystem(std::vector<std::vector<mpz_class>> matrix);

    std::size_t rows() const { return matrix_.size(); }
    std::size_t cols() const { return cols_; }
    const std::vector<std::vector<mpz_class>>& matrix() const { return matrix_; }
    const std::vector<std::vector<int>>& monomials() const { return monomials_; }
    const std::vector<RationalPoint>& points() const { return points_; }
    int ambient_dim() const { return ambient_dim_; }
    int degree() const { return degree_; }
    // Largest Euclidean column norm, at least 1.
    double max_column_norm() const;
    bool in_kernel(const std::vector<mpz_class>& v) const;

private:
    std::vector<std::vector<mpz_class>> matrix_;
    std::size_t cols_ = 0;
    std::vector<std::vector<int>> monomials_;
    std::vector<RationalPoint> points_;
    int ambient_dim_ = 0;
    int degree_ = 0;
};

// Largest slope of a direct sum of rank one pieces.
double slope_max(const std::vector<double>& weights);

// Z-basis of the integer kernel by unimodular column operations.
std::vector<std::vector<mpz_class>> integer_kernel_basis(const EvaluationSystem& system);

struct KernelVector {
    std::vector<mpz_class> v;
    std::size_t m = 0;     // number of unknowns
    std::size_t rank = 0;  // kernel rank n
    double log_sup = 0.0;
    double C = 1.0;
    double mu_max = 0.0;
    double A_impl = 10.0;
    double bound = 0.0;  // (m/n) log C^2 + (m/n - 1) mu_max + 3 log n + A_impl
    bool within_bound() const { return log_sup <= bound; }
};

// Small nonzero kernel vector: kernel basis, pairwise size reduction, then the
// smallest sup norm among short integer combinations of the reduced basis.
// Throws StructuralError when the system is injective.
KernelVector siegel_small_kernel(const EvaluationSystem& system, double mu_max = 0.0, double A_impl = 10.0);

struct AuxPolynomial {
    PolynomialSection section;
    std::vector<RationalPoint> vanishing;
    KernelVector kernel;
    double log_sup_norm = 0.0;  // sampled
    double H_max = 0.0;         // largest h_fs over the vanishing set
    double C3 = 0.0;            // log_sup_norm / (d H_max)
    bool vanishes_exactly() const;
    nlohmann::json to_json() const;
};

// Integer section of degree d vanishing at every point. Needs
// #points <= (1 - alpha) binom(N + d, d).
AuxPolynomial build_aux_polynomial(const std::vector<RationalPoint>& points, int d, double alpha,
                                   std::size_t sup_samples = 20000);

struct GromovReport {
    int degree = 0;
    std::size_t trials = 0;
    std::size_t violations = 0;      // L2 norm above the sampled sup
    double max_log_ratio = 0.0;      // log(sup / L2)
    double mean_log_ratio = 0.0;
    double ceiling = 0.0;            // 1/2 log binom(d + 2, 2)
    bool pass() const { return violations == 0 && max_log_ratio <= ceiling + 1e-12; }
};

// L2 norm for the normalized Fubini-Study volume on P^N, exactly from the
// coefficients.
double l2_norm(const PolynomialSection& s);

// Random integer sections of degree d on P^2: sampled sup norm against the
// exact L2 norm.
GromovReport gromov_check(int d, std::size_t trials, std::uint64_t seed = 0, std::size_t samples = 20000);

struct GromovGrowth {
    std::vector<GromovReport> per_degree;
    double slope = 0.0;  // least squares slope of max log ratio against d
    bool linear() const;
};

GromovGrowth gromov_growth(int d_max, std::size_t trials, std::uint64_t seed = 0);

}  // namespace nevlab::auxpoly
