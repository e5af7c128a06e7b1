#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nevlab/common.hpp"

namespace nevlab {

// Sparse multivariate polynomial with exact rational coefficients, keyed by
// exponent vectors of a fixed length.
using RationalPolynomial = std::map<std::vector<int>, mpq_class>;

// Parsed expression over a fixed grammar:
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' ['-'] integer)?
//   atom   := number | 'z' | 'i' | 'pi' | 'x' digits
//           | func '(' expr ')' | '(' expr ')'
//   func   := exp | sin | cos | sinh | cosh
//
// Numbers are decimal literals and are kept exact. The variable set is
// either {z} (curve components) or {x0..xN} (sections).
class Expression {
public:
    enum class Variables { curve, section };

    static Expression parse(const std::string& text, Variables vars = Variables::curve);

    const std::string& text() const { return text_; }
    Variables variables() const { return vars_; }
    // Number of x-variables referenced (max index + 1); 0 for curve expressions.
    int section_arity() const { return arity_; }

    // Value and z-derivative. `scale` receives the largest intermediate
    // magnitude, which bounds the rounding error of the evaluation.
    Jet eval(cplx z, double* scale = nullptr) const;

    // Coefficients c_0..c_n if the expression is a polynomial in z with
    // rational coefficients.
    std::optional<std::vector<mpq_class>> rational_polynomial_in_z() const;

    // Expansion in the variables x0..x_{nvars-1}; throws InputError unless the
    // expression is a polynomial with rational coefficients.
    RationalPolynomial expand(int nvars) const;

    struct Node;

private:
    std::string text_;
    Variables vars_ = Variables::curve;
    int arity_ = 0;
    std::shared_ptr<const Node> root_;
};

}  // namespace nevlab
