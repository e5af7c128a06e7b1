#include "nevlab/auxpoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "nevlab/parallel.hpp"

namespace nevlab::auxpoly {

std::vector<std::vector<int>> monomial_basis(int ambient_dim, int d) {
    return homogeneous_monomials(ambient_dim + 1, d);
}

EvaluationSystem::EvaluationSystem(const std::vector<RationalPoint>& points, int d)
    : points_(points), degree_(d) {
    if (points.empty()) {
        throw InputError("evaluation system needs at least one point");
    }
    ambient_dim_ = points[0].ambient_dim();
    monomials_ = monomial_basis(ambient_dim_, d);
    cols_ = monomials_.size();
    for (const auto& p : points) {
        if (p.ambient_dim() != ambient_dim_) {
            throw InputError("points of different dimensions");
        }
        std::vector<mpz_class> row;
        for (const auto& mono : monomials_) {
            mpz_class v = 1;
            for (std::size_t j = 0; j < mono.size(); ++j) {
                mpz_class pw;
                mpz_pow_ui(pw.get_mpz_t(), p.coords()[j].get_mpz_t(), static_cast<unsigned long>(mono[j]));
                v *= pw;
            }
            row.push_back(v);
        }
        matrix_.push_back(std::move(row));
    }
}

EvaluationSystem::EvaluationSystem(std::vector<std::vector<mpz_class>> matrix) : matrix_(std::move(matrix)) {
    if (matrix_.empty() || matrix_[0].empty()) {
        throw InputError("empty evaluation matrix");
    }
    cols_ = matrix_[0].size();
    for (const auto& row : matrix_) {
        if (row.size() != cols_) {
            throw InputError("ragged evaluation matrix");
        }
    }
}

double EvaluationSystem::max_column_norm() const {
    double best = 1.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        mpz_class s = 0;
        for (const auto& row : matrix_) {
            s += row[j] * row[j];
        }
        best = std::max(best, std::exp(0.5 * heights::log_abs(s == 0 ? mpz_class(1) : s)));
    }
    return best;
}

bool EvaluationSystem::in_kernel(const std::vector<mpz_class>& v) const {
    if (v.size() != cols_) {
        return false;
    }
    for (const auto& row : matrix_) {
        mpz_class s = 0;
        for (std::size_t j = 0; j < cols_; ++j) {
            s += row[j] * v[j];
        }
        if (s != 0) {
            return false;
        }
    }
    return true;
}

double slope_max(const std::vector<double>& weights) {
    if (weights.empty()) {
        throw DomainError("slope_max of an empty list");
    }
    return *std::max_element(weights.begin(), weights.end());
}

namespace {

using Vec = std::vector<mpz_class>;

mpz_class dot(const Vec& a, const Vec& b) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

// round(a / b) for b > 0
mpz_class round_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    const mpz_class num = 2 * a + b;
    const mpz_class den = 2 * b;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

mpz_class sup_norm(const Vec& v) {
    mpz_class m = 0;
    for (const auto& x : v) {
        const mpz_class a = abs(x);
        if (a > m) {
            m = a;
        }
    }
    return m;
}

void normalize_sign(Vec& v) {
    const auto first = std::find_if(v.begin(), v.end(), [](const mpz_class& c) { return c != 0; });
    if (first != v.end() && *first < 0) {
        for (auto& c : v) {
            c = -c;
        }
    }
}

// Sup norm, then Euclidean norm, then lexicographic order.
bool better(const Vec& a, const Vec& b) {
    const mpz_class sa = sup_norm(a), sb = sup_norm(b);
    if (sa != sb) {
        return sa < sb;
    }
    const mpz_class na = dot(a, a), nb = dot(b, b);
    if (na != nb) {
        return na < nb;
    }
    return a < b;
}

void size_reduce(std::vector<Vec>& basis) {
    bool changed = true;
    for (int sweep = 0; changed && sweep < 1000; ++sweep) {
        changed = false;
        std::sort(basis.begin(), basis.end(), [](const Vec& a, const Vec& b) { return dot(a, a) < dot(b, b); });
        for (std::size_t i = 0; i < basis.size(); ++i) {
            for (std::size_t j = 0; j < basis.size(); ++j) {
                if (i == j) {
                    continue;
                }
                const mpz_class nj = dot(basis[j], basis[j]);
                const mpz_class mu = round_div(dot(basis[i], basis[j]), nj);
                if (mu == 0) {
                    continue;
                }
                Vec cand = basis[i];
                for (std::size_t k = 0; k < cand.size(); ++k) {
                    cand[k] -= mu * basis[j][k];
                }
                if (dot(cand, cand) < dot(basis[i], basis[i])) {
                    basis[i] = std::move(cand);
                    changed = true;
                }
            }
        }
    }
}

}  // namespace

std::vector<std::vector<mpz_class>> integer_kernel_basis(const EvaluationSystem& system) {
    const std::size_t m = system.cols();
    const std::size_t k = system.rows();
    // Columns of [M; I], stored column-major.
    std::vector<Vec> col(m, Vec(k + m, 0));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            col[j][i] = system.matrix()[i][j];
        }
        col[j][k + j] = 1;
    }
    std::vector<bool> active(m, true);
    for (std::size_t i = 0; i < k; ++i) {
        while (true) {
            std::size_t piv = m;
            for (std::size_t j = 0; j < m; ++j) {
                if (active[j] && col[j][i] != 0 && (piv == m || abs(col[j][i]) < abs(col[piv][i]))) {
                    piv = j;
                }
            }
            if (piv == m) {
                break;  // row already zero on the active columns
            }
            bool others = false;
            for (std::size_t j = 0; j < m; ++j) {
                if (j == piv || !active[j] || col[j][i] == 0) {
                    continue;
                }
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), col[j][i].get_mpz_t(), col[piv][i].get_mpz_t());
                for (std::size_t t = 0; t < k + m; ++t) {
                    col[j][t] -= q * col[piv][t];
                }
                others = others || col[j][i] != 0;
            }
            if (!others) {
                active[piv] = false;
                break;
            }
        }
    }
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < m; ++j) {
        if (active[j]) {
            basis.emplace_back(col[j].begin() + static_cast<std::ptrdiff_t>(k), col[j].end());
        }
    }
    return basis;
}

KernelVector siegel_small_kernel(const EvaluationSystem& system, double mu_max, double A_impl) {
    std::vector<Vec> basis = integer_kernel_basis(system);
    if (basis.empty()) {
        throw StructuralError("evaluation system is injective: no nonzero kernel vector");
    }
    size_reduce(basis);
    const std::size_t n = basis.size();
    // Search range for combination coefficients by kernel rank.
    static constexpr int kRange[] = {0, 1, 8, 4, 3, 2};
    const std::size_t used = std::min<std::size_t>(n, 6);
    const int range = used < 6 ? kRange[used] : 1;
    Vec best = basis[0];
    std::vector<int> coef(used, -range);
    while (true) {
        if (std::any_of(coef.begin(), coef.end(), [](int c) { return c != 0; })) {
            Vec v(system.cols(), 0);
            for (std::size_t b = 0; b < used; ++b) {
                if (coef[b] != 0) {
                    for (std::size_t t = 0; t < v.size(); ++t) {
                        v[t] += coef[b] * basis[b][t];
                    }
                }
            }
            normalize_sign(v);
            if (better(v, best) && std::any_of(v.begin(), v.end(), [](const mpz_class& c) { return c != 0; })) {
                best = v;
            }
        }
        std::size_t pos = 0;
        while (pos < used && coef[pos] == range) {
            coef[pos] = -range;
            ++pos;
        }
        if (pos == used) {
            break;
        }
        ++coef[pos];
    }
    normalize_sign(best);
    KernelVector out;
    out.v = best;
    out.m = system.cols();
    out.rank = n;
    out.log_sup = heights::log_abs(sup_norm(best));
    out.C = system.max_column_norm();
    out.mu_max = mu_max;
    out.A_impl = A_impl;
    const double ratio = static_cast<double>(out.m) / static_cast<double>(n);
    out.bound = ratio * std::log(out.C * out.C) + (ratio - 1.0) * mu_max + 3.0 * std::log(static_cast<double>(n)) +
                A_impl;
    return out;
}

bool AuxPolynomial::vanishes_exactly() const {
    return std::all_of(vanishing.begin(), vanishing.end(),
                       [&](const RationalPoint& p) { return section.eval_exact(p.coords()) == 0; });
}

nlohmann::json AuxPolynomial::to_json() const {
    nlohmann::json j;
    j["degree"] = section.degree();
    j["ambient_dim"] = section.ambient_dim();
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : section.terms()) {
        terms.push_back({{"exponents", t.exponents}, {"coeff", t.coeff.get_str()}});
    }
    j["terms"] = terms;
    j["log_sup_norm"] = log_sup_norm;
    j["H_max"] = H_max;
    j["C3"] = C3;
    j["kernel_rank"] = kernel.rank;
    j["monomials"] = kernel.m;
    j["siegel_log_sup"] = kernel.log_sup;
    j["siegel_bound"] = kernel.bound;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : vanishing) {
        pts.push_back(p.to_string());
    }
    j["vanishing"] = pts;
    return j;
}

AuxPolynomial build_aux_polynomial(const std::vector<RationalPoint>& points, int d, double alpha,
                                   std::size_t sup_samples) {
    if (points.empty()) {
        throw InputError("auxiliary polynomial needs at least one point");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
    const int N = points[0].ambient_dim();
    const std::size_t m = monomial_basis(N, d).size();
    if (static_cast<double>(points.size()) > (1.0 - alpha) * static_cast<double>(m)) {
        throw StructuralError(std::to_string(points.size()) + " points exceed (1 - alpha) * " + std::to_string(m) +
                              " monomials of degree " + std::to_string(d) + "; raise the degree");
    }
    const EvaluationSystem sys(points, d);
    std::vector<double> weights;
    double hmax = 0.0;
    for (const auto& p : points) {
        const double h = heights::height(p).fs;
        weights.push_back(d * h);
        hmax = std::max(hmax, h);
    }
    KernelVector kv = siegel_small_kernel(sys, slope_max(weights));
    RationalPolynomial poly;
    for (std::size_t j = 0; j < m; ++j) {
        if (kv.v[j] != 0) {
            poly[sys.monomials()[j]] = mpq_class(kv.v[j]);
        }
    }
    AuxPolynomial out{PolynomialSection(N, d, poly), points, std::move(kv), 0.0, hmax, 0.0};
    out.log_sup_norm = std::log(out.section.sampled_sup(sup_samples));
    out.C3 = hmax > 0.0 ? out.log_sup_norm / (d * hmax) : 0.0;
    return out;
}

double l2_norm(const PolynomialSection& s) {
    // E|x^a|^2 = a! N! / (N + d)! for the unitarily invariant probability
    // measure on the unit sphere of C^{N+1}.
    const int N = s.ambient_dim();
    const int d = s.degree();
    const double log_base = std::lgamma(N + 1.0) - std::lgamma(N + d + 1.0);
    double total = 0.0;
    for (const auto& t : s.terms()) {
        double lf = log_base;
        for (const int e : t.exponents) {
            lf += std::lgamma(e + 1.0);
        }
        total += std::norm(t.coeff_d) * std::exp(lf);
    }
    return std::sqrt(total);
}

GromovReport gromov_check(int d, std::size_t trials, std::uint64_t seed, std::size_t samples) {
    if (d < 1) {
        throw DomainError("gromov_check needs d >= 1");
    }
    GromovReport rep;
    rep.degree = d;
    rep.trials = trials;
    rep.ceiling = 0.5 * std::log((d + 2.0) * (d + 1.0) / 2.0);
    std::mt19937_64 rng(seed + 7919ULL * static_cast<std::uint64_t>(d));
    std::uniform_int_distribution<int> coeff(-9, 9);
    const auto monos = monomial_basis(2, d);
    std::vector<PolynomialSection> secs;
    while (secs.size() < trials) {
        RationalPolynomial p;
        for (const auto& mono : monos) {
            const int c = coeff(rng);
            if (c != 0) {
                p[mono] = c;
            }
        }
        if (!p.empty()) {
            secs.emplace_back(2, d, p);
        }
    }
    std::vector<double> ratio(trials);
    std::vector<char> bad(trials, 0);
    parallel_for(trials, [&](std::size_t t) {
        const double sup = secs[t].sampled_sup(samples);
        const double l2 = l2_norm(secs[t]);
        bad[t] = l2 > sup;
        ratio[t] = std::log(sup / l2);
    });
    rep.max_log_ratio = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        rep.violations += bad[t] ? 1 : 0;
        rep.max_log_ratio = std::max(rep.max_log_ratio, ratio[t]);
        sum += ratio[t];
    }
    rep.mean_log_ratio = trials ? sum / static_cast<double>(trials) : 0.0;
    return rep;
}

bool GromovGrowth::linear() const {
    for (const auto& r : per_degree) {
        if (!r.pass()) {
            return false;
        }
    }
    return true;
}

GromovGrowth gromov_growth(int d_max, std::size_t trials, std::uint64_t seed) {
    GromovGrowth g;
    for (int d = 1; d <= d_max; ++d) {
        g.per_degree.push_back(gromov_check(d, trials, seed));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(g.per_degree.size());
    for (const auto& r : g.per_degree) {
        sx += r.degree;
        sy += r.max_log_ratio;
        sxx += r.degree * r.degree;
        sxy += r.degree * r.max_log_ratio;
    }
    g.slope = n > 1 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    return g;
}

}  // namespace nevlab::auxpoly
