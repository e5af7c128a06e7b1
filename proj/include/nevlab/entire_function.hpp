#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nevlab/common.hpp"
#include "nevlab/expression.hpp"

namespace nevlab::curves {

struct FunctionValue {
    cplx value{};
    cplx deriv{};
    double error = 0.0;  // bound on |value - exact|
};

// Complex number with multiprecision parts.
struct MpComplex {
    mpf_class re;
    mpf_class im;
};

class EntireFunction {
public:
    virtual ~EntireFunction() = default;

    // Value and derivative in double precision. tol > 0 is an absolute error
    // target for the value; tol <= 0 asks for full working precision. Throws
    // PrecisionError if the reported error cannot be brought below tol.
    virtual FunctionValue eval(cplx z, double tol) const = 0;

    // Value at z to absolute error tol using `bits` of mantissa. Throws
    // CapabilityError when no multiprecision path exists.
    virtual MpComplex eval_hp(const MpComplex& z, double tol, unsigned bits) const;

    // Coefficients if the function is a polynomial with rational coefficients.
    virtual std::optional<std::vector<mpq_class>> rational_polynomial() const { return std::nullopt; }

    // Exact value at a rational argument when the function takes a provably
    // rational value there.
    virtual std::optional<mpq_class> exact_at(const mpq_class& q) const;

    virtual std::string describe() const = 0;
};

using FunctionPtr = std::shared_ptr<const EntireFunction>;

class ExpressionFunction final : public EntireFunction {
public:
    explicit ExpressionFunction(Expression e);
    FunctionValue eval(cplx z, double tol) const override;
    MpComplex eval_hp(const MpComplex& z, double tol, unsigned bits) const override;
    std::optional<std::vector<mpq_class>> rational_polynomial() const override { return poly_; }
    std::optional<mpq_class> exact_at(const mpq_class& q) const override;
    std::string describe() const override { return expr_.text(); }

private:
    Expression expr_;
    std::optional<std::vector<mpq_class>> poly_;
};

// Coefficient rules for series: c_n = 1/(n!)^p or c_n = base^(-n^2).
struct CoefficientRule {
    enum class Kind { factorial_power, geometric_square };
    Kind kind = Kind::factorial_power;
    int power = 2;  // p for factorial_power
    int base = 2;   // for geometric_square

    // c_{n-1}/c_n as an exact positive integer.
    mpz_class ratio(long n) const;
    // |c_n / c_{n-1}| in floating point.
    double ratio_inverse(long n) const;
    std::string describe() const;
};

// sum_n c_n z^n
class PowerSeriesFunction final : public EntireFunction {
public:
    explicit PowerSeriesFunction(CoefficientRule rule, long max_terms = 4000);
    FunctionValue eval(cplx z, double tol) const override;
    MpComplex eval_hp(const MpComplex& z, double tol, unsigned bits) const override;
    std::optional<mpq_class> exact_at(const mpq_class& q) const override;
    std::string describe() const override;

private:
    CoefficientRule rule_;
    long max_terms_;
};

// Rationals enumerated by height max(|a|, b), then |a|, then positive before
// negative, then b: 0, 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, ...
std::vector<mpq_class> rational_nodes(long max_height);
// Number of nodes of height <= h.
long rational_node_count(long h);
// 0-based position of q in the enumeration.
long rational_node_index(const mpq_class& q);

// f(z) = sum_{n>=0} eps_n c_n prod_{k=1..n} (z - q_k) over the node
// enumeration q_1, q_2, ...; eps_n in {0,1}.
class NewtonSeriesFunction final : public EntireFunction {
public:
    struct Pattern {
        long zero_block = 0;  // eps_n = 0 for 1 <= n < zero_block
        long stride = 1;      // otherwise eps_n = 1 iff n % stride == 0
        bool eps(long n) const;
    };

    NewtonSeriesFunction(CoefficientRule rule, Pattern pattern, long node_height);

    FunctionValue eval(cplx z, double tol) const override;
    MpComplex eval_hp(const MpComplex& z, double tol, unsigned bits) const override;
    // Exact value at a node of height <= node_height; nullopt elsewhere.
    std::optional<mpq_class> exact_at(const mpq_class& q) const override;
    std::string describe() const override;

    // Exact value at the node q if it is a rational whose numerator and
    // denominator are both at most `bound` in absolute value; nullopt
    // otherwise. A multiprecision evaluation and continued fraction rule out
    // most nodes before any exact arithmetic is done.
    std::optional<mpq_class> exact_at_if_small(const mpq_class& q, const mpz_class& bound) const;

    // Value at a node of 1-based index m, from the finite sum over n < m.
    mpq_class exact_at_index(long m) const;

    const std::vector<mpq_class>& nodes() const { return nodes_; }
    long node_height() const { return node_height_; }
    const CoefficientRule& rule() const { return rule_; }
    const Pattern& pattern() const { return pattern_; }

private:
    CoefficientRule rule_;
    Pattern pattern_;
    long node_height_;
    std::vector<mpq_class> nodes_;
    std::vector<double> node_d_;
    double node_abs_max_ = 0.0;
    long max_terms_;

    // Bound on |q_k| for every k >= 1.
    double node_bound(long k) const;
};

}  // namespace nevlab::curves
