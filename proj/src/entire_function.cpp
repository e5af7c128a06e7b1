#include "nevlab/entire_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace nevlab::curves {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

MpComplex mp_make(unsigned bits) {
    return {mpf_class(0, bits), mpf_class(0, bits)};
}

void mp_mul(MpComplex& out, const MpComplex& a, const MpComplex& b, unsigned bits) {
    mpf_class re(a.re * b.re - a.im * b.im, bits);
    mpf_class im(a.re * b.im + a.im * b.re, bits);
    out.re = re;
    out.im = im;
}

double mp_abs(const MpComplex& a) {
    return std::hypot(a.re.get_d(), a.im.get_d());
}

}  // namespace

MpComplex EntireFunction::eval_hp(const MpComplex&, double, unsigned) const {
    throw CapabilityError("no multiprecision evaluation for " + describe());
}

std::optional<mpq_class> EntireFunction::exact_at(const mpq_class&) const {
    return std::nullopt;
}

ExpressionFunction::ExpressionFunction(Expression e) : expr_(std::move(e)) {
    if (expr_.variables() != Expression::Variables::curve) {
        throw InputError("curve components must be expressions in z");
    }
    poly_ = expr_.rational_polynomial_in_z();
}

FunctionValue ExpressionFunction::eval(cplx z, double tol) const {
    double scale = 0.0;
    const Jet j = expr_.eval(z, &scale);
    const double err = 64.0 * kEps * scale;
    if (tol > 0.0 && err > tol && poly_) {
        // Round a multiprecision value instead; the only error left is the
        // final rounding to double, measured exactly.
        const unsigned bits = 192;
        const MpComplex zz{mpf_class(z.real(), bits), mpf_class(z.imag(), bits)};
        const MpComplex v = eval_hp(zz, tol, bits);
        MpComplex dv = mp_make(bits);
        for (std::size_t k = poly_->size(); k-- > 1;) {
            mp_mul(dv, dv, zz, bits);
            dv.re += mpf_class((*poly_)[k] * static_cast<long>(k), bits);
        }
        const cplx val(v.re.get_d(), v.im.get_d());
        const mpf_class er(v.re - val.real(), bits), ei(v.im - val.imag(), bits);
        const double rerr = std::hypot(er.get_d(), ei.get_d());
        if (rerr > tol) {
            throw PrecisionError("expression \"" + expr_.text() + "\": value not representable within tol");
        }
        return {val, cplx(dv.re.get_d(), dv.im.get_d()), rerr};
    }
    if (tol > 0.0 && err > tol) {
        throw PrecisionError("expression \"" + expr_.text() + "\": double precision error " +
                             std::to_string(err) + " exceeds tol");
    }
    if (!std::isfinite(j.value.real()) || !std::isfinite(j.value.imag())) {
        throw PrecisionError("expression \"" + expr_.text() + "\" overflowed");
    }
    return {j.value, j.deriv, err};
}

MpComplex ExpressionFunction::eval_hp(const MpComplex& z, double, unsigned bits) const {
    if (!poly_) {
        throw CapabilityError("multiprecision evaluation needs a rational polynomial, got \"" +
                              expr_.text() + "\"");
    }
    MpComplex acc = mp_make(bits);
    for (auto it = poly_->rbegin(); it != poly_->rend(); ++it) {
        mp_mul(acc, acc, z, bits);
        acc.re += mpf_class(*it, bits);
    }
    return acc;
}

std::optional<mpq_class> ExpressionFunction::exact_at(const mpq_class& q) const {
    if (!poly_) {
        return std::nullopt;
    }
    mpq_class acc = 0;
    for (auto it = poly_->rbegin(); it != poly_->rend(); ++it) {
        acc = acc * q + *it;
    }
    return acc;
}

mpz_class CoefficientRule::ratio(long n) const {
    mpz_class r;
    if (kind == Kind::factorial_power) {
        mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(power));
    } else {
        mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(2 * n - 1));
    }
    return r;
}

double CoefficientRule::ratio_inverse(long n) const {
    if (kind == Kind::factorial_power) {
        return std::pow(static_cast<double>(n), -static_cast<double>(power));
    }
    return std::pow(static_cast<double>(base), -static_cast<double>(2 * n - 1));
}

std::string CoefficientRule::describe() const {
    if (kind == Kind::factorial_power) {
        return "1/(n!)^" + std::to_string(power);
    }
    return std::to_string(base) + "^(-n^2)";
}

PowerSeriesFunction::PowerSeriesFunction(CoefficientRule rule, long max_terms)
    : rule_(rule), max_terms_(max_terms) {
    if ((rule_.kind == CoefficientRule::Kind::factorial_power && rule_.power < 1) ||
        (rule_.kind == CoefficientRule::Kind::geometric_square && rule_.base < 2)) {
        throw InputError("power series coefficients must decay: need power >= 1 or base >= 2");
    }
}

FunctionValue PowerSeriesFunction::eval(cplx z, double tol) const {
    cplx term = 1.0;
    cplx dterm = 0.0;
    cplx sum = term;
    cplx dsum = 0.0;
    double abs_sum = 1.0;
    const double az = std::abs(z);
    for (long n = 1; n <= max_terms_; ++n) {
        const double c = rule_.ratio_inverse(n);
        dterm = c * (dterm * z + term);
        term = c * term * z;
        sum += term;
        dsum += dterm;
        abs_sum += std::abs(term);
        const double rho = az * rule_.ratio_inverse(n + 1);
        if (rho < 0.5) {
            const double tail = std::abs(term) * rho / (1.0 - rho);
            const double rounding = static_cast<double>(n + 8) * kEps * abs_sum;
            const double target = tol > 0.0 ? 0.5 * tol : kEps * std::abs(sum);
            if (tail <= target || tail == 0.0) {
                const double err = tail + rounding;
                if (tol > 0.0 && err > tol) {
                    throw PrecisionError("power series: rounding error exceeds tol");
                }
                return {sum, dsum, err};
            }
        }
    }
    throw PrecisionError("power series did not converge within max terms");
}

MpComplex PowerSeriesFunction::eval_hp(const MpComplex& z, double tol, unsigned bits) const {
    MpComplex term = mp_make(bits);
    term.re = 1;
    MpComplex sum = term;
    const double az = mp_abs(z);
    for (long n = 1; n <= max_terms_; ++n) {
        mp_mul(term, term, z, bits);
        const mpf_class c(mpq_class(1, rule_.ratio(n)), bits);
        term.re *= c;
        term.im *= c;
        sum.re += term.re;
        sum.im += term.im;
        const double rho = az * rule_.ratio_inverse(n + 1);
        if (rho < 0.5 && mp_abs(term) * rho / (1.0 - rho) <= 0.5 * tol) {
            return sum;
        }
    }
    throw PrecisionError("power series (multiprecision) did not converge");
}

std::optional<mpq_class> PowerSeriesFunction::exact_at(const mpq_class& q) const {
    if (q == 0) {
        return mpq_class(1);
    }
    return std::nullopt;
}

std::string PowerSeriesFunction::describe() const {
    return "power_series(" + rule_.describe() + ")";
}

namespace {

// Members of height exactly h as (a, b) pairs in enumeration order.
std::vector<std::pair<long, long>> node_level(long h) {
    std::vector<std::pair<long, long>> level;
    if (h == 1) {
        return {{0, 1}, {1, 1}, {-1, 1}};
    }
    for (long a = 1; a < h; ++a) {
        if (std::gcd(a, h) == 1) {
            level.emplace_back(a, h);
            level.emplace_back(-a, h);
        }
    }
    for (long b = 1; b < h; ++b) {
        if (std::gcd(h, b) == 1) {
            level.emplace_back(h, b);
            level.emplace_back(-h, b);
        }
    }
    std::sort(level.begin(), level.end(), [](const auto& x, const auto& y) {
        return std::make_tuple(std::labs(x.first), x.first < 0, x.second) <
               std::make_tuple(std::labs(y.first), y.first < 0, y.second);
    });
    return level;
}

long euler_phi(long n) {
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            result -= result / p;
        }
    }
    if (n > 1) {
        result -= result / n;
    }
    return result;
}

}  // namespace

std::vector<mpq_class> rational_nodes(long max_height) {
    std::vector<mpq_class> out;
    for (long h = 1; h <= max_height; ++h) {
        for (const auto& [a, b] : node_level(h)) {
            out.emplace_back(a, b);
        }
    }
    return out;
}

long rational_node_count(long h) {
    if (h < 1) {
        return 0;
    }
    long count = 3;
    for (long k = 2; k <= h; ++k) {
        count += 4 * euler_phi(k);
    }
    return count;
}

long rational_node_index(const mpq_class& q) {
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (!num.fits_slong_p() || !den.fits_slong_p()) {
        throw DomainError("rational_node_index: height too large");
    }
    const long a = num.get_si();
    const long b = den.get_si();
    const long h = std::max(std::labs(a), b);
    const auto level = node_level(h);
    const auto it = std::find(level.begin(), level.end(), std::make_pair(a, b));
    return rational_node_count(h - 1) + static_cast<long>(it - level.begin());
}

bool NewtonSeriesFunction::Pattern::eps(long n) const {
    if (n >= 1 && n < zero_block) {
        return false;
    }
    return n % stride == 0;
}

NewtonSeriesFunction::NewtonSeriesFunction(CoefficientRule rule, Pattern pattern, long node_height)
    : rule_(rule), pattern_(pattern), node_height_(node_height) {
    if (node_height < 1) {
        throw InputError("interpolation curve: height budget must be >= 1");
    }
    if ((rule_.kind == CoefficientRule::Kind::factorial_power && rule_.power < 2) ||
        (rule_.kind == CoefficientRule::Kind::geometric_square && rule_.base < 2)) {
        throw InputError("interpolation curve: need factorial power >= 2 or base >= 2");
    }
    if (pattern_.stride < 1 || pattern_.zero_block < 0) {
        throw InputError("interpolation curve: stride must be >= 1 and zero_block >= 0");
    }
    nodes_ = rational_nodes(std::max<long>(node_height, 24));
    for (const auto& q : nodes_) {
        node_d_.push_back(q.get_d());
        node_abs_max_ = std::max(node_abs_max_, std::abs(node_d_.back()));
    }
    max_terms_ = static_cast<long>(nodes_.size());
}

double NewtonSeriesFunction::node_bound(long k) const {
    // The integer n sits at position >= 2n - 1, so |q_k| <= (k+1)/2.
    return 0.5 * static_cast<double>(k + 1);
}

FunctionValue NewtonSeriesFunction::eval(cplx z, double tol) const {
    cplx prod = 1.0;  // c_n prod_{k<=n} (z - q_k)
    cplx dprod = 0.0;
    cplx sum = 1.0;
    cplx dsum = 0.0;
    double abs_sum = 1.0;
    const double az = std::abs(z);
    for (long n = 1; n < max_terms_; ++n) {
        const double c = rule_.ratio_inverse(n);
        const cplx w = z - node_d_[static_cast<std::size_t>(n - 1)];
        dprod = c * (dprod * w + prod);
        prod = c * prod * w;
        if (pattern_.eps(n)) {
            sum += prod;
            dsum += dprod;
            abs_sum += std::abs(prod);
        }
        const double rho = (az + node_bound(n + 1)) * rule_.ratio_inverse(n + 1);
        if (rho < 0.5) {
            const double tail = std::abs(prod) * rho / (1.0 - rho);
            const double target = tol > 0.0 ? 0.5 * tol : kEps * std::abs(sum);
            if (tail <= target || tail == 0.0) {
                const double err = tail + static_cast<double>(n + 8) * kEps * abs_sum;
                if (tol > 0.0 && err > tol) {
                    throw PrecisionError("interpolation series: rounding error exceeds tol");
                }
                return {sum, dsum, err};
            }
        }
    }
    throw PrecisionError("interpolation series: not enough nodes for |z| = " + std::to_string(az));
}

MpComplex NewtonSeriesFunction::eval_hp(const MpComplex& z, double tol, unsigned bits) const {
    MpComplex prod = mp_make(bits);
    prod.re = 1;
    MpComplex sum = prod;
    const double az = mp_abs(z);
    for (long n = 1; n < max_terms_; ++n) {
        MpComplex w = z;
        w.re -= mpf_class(nodes_[static_cast<std::size_t>(n - 1)], bits);
        mp_mul(prod, prod, w, bits);
        const mpf_class c(mpq_class(1, rule_.ratio(n)), bits);
        prod.re *= c;
        prod.im *= c;
        if (pattern_.eps(n)) {
            sum.re += prod.re;
            sum.im += prod.im;
        }
        const double rho = (az + node_bound(n + 1)) * rule_.ratio_inverse(n + 1);
        if (rho < 0.5 && mp_abs(prod) * rho / (1.0 - rho) <= 0.5 * tol) {
            return sum;
        }
    }
    throw PrecisionError("interpolation series (multiprecision): not enough nodes");
}

mpq_class NewtonSeriesFunction::exact_at_index(long m) const {
    if (m < 1 || m > static_cast<long>(nodes_.size())) {
        throw DomainError("exact_at_index: node index out of range");
    }
    const mpq_class& q = nodes_[static_cast<std::size_t>(m - 1)];
    const mpz_class& a = q.get_num();
    const mpz_class& b = q.get_den();
    // f(q_m) = sum_{n<m} eps_n prod_{k<=n} u_k / t_k with u_k = a b_k - a_k b
    // and t_k = b b_k c_{k-1}/c_k, accumulated in integer Horner form.
    mpz_class A = pattern_.eps(0) ? 1 : 0;
    mpz_class L = 1;
    mpz_class U = 1;
    for (long k = 1; k < m; ++k) {
        const mpq_class& qk = nodes_[static_cast<std::size_t>(k - 1)];
        const mpz_class u = a * qk.get_den() - qk.get_num() * b;
        const mpz_class t = b * qk.get_den() * rule_.ratio(k);
        U *= u;
        A *= t;
        L *= t;
        if (pattern_.eps(k)) {
            A += U;
        }
    }
    mpq_class f(A, L);
    f.canonicalize();
    return f;
}

std::optional<mpq_class> NewtonSeriesFunction::exact_at(const mpq_class& q) const {
    const mpz_class num_abs = abs(q.get_num());
    const mpz_class h = num_abs > q.get_den() ? num_abs : q.get_den();
    if (h > node_height_) {
        return std::nullopt;
    }
    return exact_at_index(rational_node_index(q) + 1);
}

std::string NewtonSeriesFunction::describe() const {
    std::string s = "interpolation(" + rule_.describe() + ", height " + std::to_string(node_height_);
    if (pattern_.zero_block > 0) {
        s += ", zero_block " + std::to_string(pattern_.zero_block);
    }
    if (pattern_.stride > 1) {
        s += ", stride " + std::to_string(pattern_.stride);
    }
    return s + ")";
}

}  // namespace nevlab::curves

namespace nevlab::curves {

std::optional<mpq_class> NewtonSeriesFunction::exact_at_if_small(const mpq_class& q,
                                                                 const mpz_class& bound) const {
    const mpz_class num_abs = abs(q.get_num());
    const mpz_class h = num_abs > q.get_den() ? num_abs : q.get_den();
    if (h > node_height_) {
        throw CapabilityError("interpolation curve: node " + q.get_str() + " exceeds height budget " +
                              std::to_string(node_height_));
    }
    // Two distinct rationals with denominators <= bound differ by more than
    // 1/bound^2, so the evaluation must resolve well below that.
    const long lb = static_cast<long>(mpz_sizeinbase(bound.get_mpz_t(), 2)) + 1;
    const unsigned bits = static_cast<unsigned>(std::max(320L, 4 * lb + 128));
    const mpf_class thr = mpf_class(1, bits) / mpf_class(mpz_class(1) << static_cast<mp_bitcnt_t>(2 * lb + 20), bits);
    MpComplex z{mpf_class(q, bits), mpf_class(0, bits)};
    const mpf_class v = eval_hp(z, std::ldexp(1.0, -static_cast<int>(std::min(2 * lb + 40, 1000L))), bits).re;
    // Continued fraction convergents of v with denominator <= bound.
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;  // previous and current convergent
    mpf_class x(v, bits);
    std::optional<mpq_class> candidate;
    for (int iter = 0; iter < 4 * lb + 200; ++iter) {
        mpf_class fl(0, bits);
        mpf_floor(fl.get_mpf_t(), x.get_mpf_t());
        const mpz_class a(fl);
    const mpz_class h2 = a * h1 + h0;
        const mpz_class k2 = a * k1 + k0;
        if (k2 > bound) {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const mpf_class diff = abs(v - mpf_class(mpq_class(h1, k1), bits));
        if (diff < thr) {
            candidate = mpq_class(h1, k1);
            break;
        }
        const mpf_class frac = x - fl;
        if (frac == 0) {
            break;
        }
        x = mpf_class(1, bits) / frac;
    }
    if (!candidate || abs(candidate->get_num()) > bound) {
        return std::nullopt;
    }
    mpq_class exact = exact_at_index(rational_node_index(q) + 1);
    if (exact != *candidate) {
        return std::nullopt;
    }
    return exact;
}

}  // namespace nevlab::curves
