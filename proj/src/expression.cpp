#include "nevlab/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace nevlab {

struct Expression::Node {
    enum class Kind { number, imag, pi, z, x, add, sub, mul, div, neg, pow, exp, sin, cos, sinh, cosh };
    Kind kind;
    mpq_class number;
    int index = 0;  // variable index for x, exponent for pow
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    Parser(const std::string& s, Expression::Variables vars) : s_(s), vars_(vars) {}

    NodePtr parse_all() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        }
        return e;
    }

    int arity() const { return arity_; }

private:
    const std::string& s_;
    Expression::Variables vars_;
    std::size_t pos_ = 0;
    int arity_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("parse error at column " + std::to_string(pos_ + 1) + " in \"" + s_ + "\": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Kind::add, lhs, term());
            } else if (accept('-')) {
                lhs = make(Kind::sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Kind::mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make(Kind::div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            return make(Kind::neg, unary());
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) {
            bool negative = accept('-');
            skip();
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("exponent must be an integer literal");
            }
            auto n = std::make_shared<Node>();
            n->kind = Kind::pow;
            n->a = base;
            const std::string digits = s_.substr(start, pos_ - start);
            if (digits.size() > 6) {
                fail("exponent too large");
            }
            n->index = std::stoi(digits) * (negative ? -1 : 1);
            return n;
        }
        return base;
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        std::string whole = s_.substr(start, pos_ - start);
        std::string frac;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            const std::size_t f0 = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            frac = s_.substr(f0, pos_ - f0);
        }
        int exp10 = 0;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            bool neg = false;
            if (p < s_.size() && (s_[p] == '-' || s_[p] == '+')) {
                neg = s_[p] == '-';
                ++p;
            }
            const std::size_t e0 = p;
            while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                ++p;
            }
            if (p > e0 && p - e0 < 5) {
                exp10 = std::stoi(s_.substr(e0, p - e0)) * (neg ? -1 : 1);
                pos_ = p;
            }
        }
        if (whole.empty() && frac.empty()) {
            fail("malformed number");
        }
        mpz_class num((whole.empty() ? std::string("0") : whole) + frac, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exp10)));
        if (exp10 >= 0) {
            num *= p10;
        } else {
            den *= p10;
        }
        auto n = std::make_shared<Node>();
        n->kind = Kind::number;
        n->number = mpq_class(num, den);
        n->number.canonicalize();
        return n;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) {
            fail("unexpected end of input");
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            const std::string id = s_.substr(start, pos_ - start);
            if (id == "i") {
                return make(Kind::imag);
            }
            if (id == "pi") {
                return make(Kind::pi);
            }
            if (id == "z") {
                if (vars_ != Expression::Variables::curve) {
                    pos_ = start;
                    fail("variable z is not allowed in a section");
                }
                return make(Kind::z);
            }
            if (id.size() > 1 && id[0] == 'x' &&
                std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
                if (vars_ != Expression::Variables::section) {
                    pos_ = start;
                    fail("variable " + id + " is not allowed in a curve component");
                }
                auto n = std::make_shared<Node>();
                n->kind = Kind::x;
                n->index = std::stoi(id.substr(1));
                arity_ = std::max(arity_, n->index + 1);
                return n;
            }
            static const std::map<std::string, Kind> funcs{
                {"exp", Kind::exp}, {"sin", Kind::sin}, {"cos", Kind::cos}, {"sinh", Kind::sinh}, {"cosh", Kind::cosh}};
            const auto it = funcs.find(id);
            if (it == funcs.end()) {
                pos_ = start;
                fail("unknown identifier '" + id + "'");
            }
            if (!accept('(')) {
                fail("expected '(' after " + id);
            }
            NodePtr arg = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return make(it->second, arg);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

struct Dual {
    cplx v;
    cplx d;
};

Dual eval_node(const Node& n, cplx z, double& scale) {
    Dual r{};
    switch (n.kind) {
        case Kind::number:
            r = {cplx(n.number.get_d(), 0.0), 0.0};
            break;
        case Kind::imag:
            r = {cplx(0.0, 1.0), 0.0};
            break;
        case Kind::pi:
            r = {cplx(kPi, 0.0), 0.0};
            break;
        case Kind::z:
            r = {z, 1.0};
            break;
        case Kind::x:
            throw InputError("section variables cannot be evaluated at a point of C");
        case Kind::add: {
            const Dual a = eval_node(*n.a, z, scale);
            const Dual b = eval_node(*n.b, z, scale);
            r = {a.v + b.v, a.d + b.d};
            break;
        }
        case Kind::sub: {
            const Dual a = eval_node(*n.a, z, scale);
            const Dual b = eval_node(*n.b, z, scale);
            r = {a.v - b.v, a.d - b.d};
            break;
        }
        case Kind::mul: {
            const Dual a = eval_node(*n.a, z, scale);
            const Dual b = eval_node(*n.b, z, scale);
            r = {a.v * b.v, a.d * b.v + a.v * b.d};
            break;
        }
        case Kind::div: {
            const Dual a = eval_node(*n.a, z, scale);
            const Dual b = eval_node(*n.b, z, scale);
            if (b.v == 0.0) {
                throw DomainError("division by zero in expression");
            }
            r = {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
            break;
        }
        case Kind::neg: {
            const Dual a = eval_node(*n.a, z, scale);
            r = {-a.v, -a.d};
            break;
        }
        case Kind::pow: {
            const Dual a = eval_node(*n.a, z, scale);
            const int k = n.index;
            if (k == 0) {
                r = {1.0, 0.0};
            } else {
                if (k < 0 && a.v == 0.0) {
                    throw DomainError("negative power of zero in expression");
                }
                const cplx pk1 = std::pow(a.v, k - 1);
                r = {pk1 * a.v, static_cast<double>(k) * pk1 * a.d};
            }
            break;
        }
        case Kind::exp: {
            const Dual a = eval_node(*n.a, z, scale);
            const cplx e = std::exp(a.v);
            r = {e, e * a.d};
            break;
        }
        case Kind::sin: {
            const Dual a = eval_node(*n.a, z, scale);
            r = {std::sin(a.v), std::cos(a.v) * a.d};
            break;
        }
        case Kind::cos: {
            const Dual a = eval_node(*n.a, z, scale);
            r = {std::cos(a.v), -std::sin(a.v) * a.d};
            break;
        }
        case Kind::sinh: {
            const Dual a = eval_node(*n.a, z, scale);
            r = {std::sinh(a.v), std::cosh(a.v) * a.d};
            break;
        }
        case Kind::cosh: {
            const Dual a = eval_node(*n.a, z, scale);
            r = {std::cosh(a.v), std::sinh(a.v) * a.d};
            break;
        }
    }
    scale = std::max(scale, std::abs(r.v));
    return r;
}

RationalPolynomial poly_add(const RationalPolynomial& a, const RationalPolynomial& b, int sign) {
    RationalPolynomial r = a;
    for (const auto& [e, c] : b) {
        r[e] += sign * c;
        if (r[e] == 0) {
            r.erase(e);
        }
    }
    return r;
}

RationalPolynomial poly_mul(const RationalPolynomial& a, const RationalPolynomial& b) {
    RationalPolynomial r;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] = ea[i] + eb[i];
            }
            r[e] += ca * cb;
        }
    }
    for (auto it = r.begin(); it != r.end();) {
        it = it->second == 0 ? r.erase(it) : std::next(it);
    }
    return r;
}

// Variable index mapping: z is slot 0 for curve expressions.
std::optional<RationalPolynomial> expand_node(const Node& n, int nvars) {
    const std::vector<int> zero(static_cast<std::size_t>(nvars), 0);
    switch (n.kind) {
        case Kind::number: {
            RationalPolynomial p;
            if (n.number != 0) {
                p[zero] = n.number;
            }
            return p;
        }
        case Kind::z:
        case Kind::x: {
            const int idx = n.kind == Kind::z ? 0 : n.index;
            if (idx >= nvars) {
                return std::nullopt;
            }
            std::vector<int> e = zero;
            e[static_cast<std::size_t>(idx)] = 1;
            return RationalPolynomial{{e, mpq_class(1)}};
        }
        case Kind::add:
        case Kind::sub: {
            auto a = expand_node(*n.a, nvars);
            auto b = expand_node(*n.b, nvars);
            if (!a || !b) {
                return std::nullopt;
            }
            return poly_add(*a, *b, n.kind == Kind::add ? 1 : -1);
        }
        case Kind::mul: {
            auto a = expand_node(*n.a, nvars);
            auto b = expand_node(*n.b, nvars);
            if (!a || !b) {
                return std::nullopt;
            }
            return poly_mul(*a, *b);
        }
        case Kind::div: {
            auto a = expand_node(*n.a, nvars);
            auto b = expand_node(*n.b, nvars);
            if (!a || !b || b->size() != 1 || b->begin()->first != zero) {
                return std::nullopt;
            }
            const mpq_class d = b->begin()->second;
            for (auto& [e, c] : *a) {
                c /= d;
            }
            return a;
        }
        case Kind::neg: {
            auto a = expand_node(*n.a, nvars);
            if (!a) {
                return std::nullopt;
            }
            for (auto& [e, c] : *a) {
                c = -c;
            }
            return a;
        }
        case Kind::pow: {
            if (n.index < 0) {
                return std::nullopt;
            }
            auto a = expand_node(*n.a, nvars);
            if (!a) {
                return std::nullopt;
            }
            RationalPolynomial r{{zero, mpq_class(1)}};
            for (int k = 0; k < n.index; ++k) {
                r = poly_mul(r, *a);
            }
            return r;
        }
        default:
            return std::nullopt;
    }
}

}  // namespace

Expression Expression::parse(const std::string& text, Variables vars) {
    Parser p(text, vars);
    Expression e;
    e.root_ = p.parse_all();
    e.text_ = text;
    e.vars_ = vars;
    e.arity_ = p.arity();
    return e;
}

Jet Expression::eval(cplx z, double* scale) const {
    double s = 0.0;
    const Dual d = eval_node(*root_, z, s);
    if (scale != nullptr) {
        *scale = s;
    }
    return {d.v, d.d};
}

std::optional<std::vector<mpq_class>> Expression::rational_polynomial_in_z() const {
    if (vars_ != Variables::curve) {
        return std::nullopt;
    }
    auto p = expand_node(*root_, 1);
    if (!p) {
        return std::nullopt;
    }
    int deg = 0;
    for (const auto& [e, c] : *p) {
        deg = std::max(deg, e[0]);
    }
    std::vector<mpq_class> coeffs(static_cast<std::size_t>(deg) + 1, mpq_class(0));
    for (const auto& [e, c] : *p) {
        coeffs[static_cast<std::size_t>(e[0])] = c;
    }
    return coeffs;
}

RationalPolynomial Expression::expand(int nvars) const {
    if (vars_ != Variables::section) {
        throw InputError("expand: not a section expression");
    }
    auto p = expand_node(*root_, nvars);
    if (!p) {
        throw InputError("\"" + text_ + "\" is not a polynomial with rational coefficients in x0..x" +
                         std::to_string(nvars - 1));
    }
    return *p;
}

}  // namespace nevlab
