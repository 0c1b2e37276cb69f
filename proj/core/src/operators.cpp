#include "pshlab/operators.hpp"

#include <algorithm>
#include <cmath>

namespace pshlab {

Expr apply_operator(OperatorKind kind, const Expr& e) {
    const int n = e.dim();
    switch (kind) {
        case OperatorKind::L: {
            Expr acc = Expr::constant(Cplx{0.0, 0.0}, n);
            for (int j = 1; j <= n; ++j) {
                const Expr dbar = wirtinger_dzbar(e, j);
                acc = acc + wirtinger_dz(dbar, j) - Expr::conj_var(j, n) * dbar;
            }
            return acc;
        }
        case OperatorKind::Lbar: {
            Expr acc = Expr::constant(Cplx{0.0, 0.0}, n);
            for (int j = 1; j <= n; ++j) {
                const Expr d = wirtinger_dz(e, j);
                acc = acc + wirtinger_dzbar(d, j) - Expr::var(j, n) * d;
            }
            return acc;
        }
        case OperatorKind::OU:
            return Cplx{0.5, 0.0} * (apply_operator(OperatorKind::L, e) +
                                     apply_operator(OperatorKind::Lbar, e));
        case OperatorKind::R: {
            Expr acc = Expr::constant(Cplx{0.0, 0.0}, n);
            for (int j = 1; j <= n; ++j)
                acc = acc + Expr::var(j, n) * wirtinger_dz(e, j) -
                      Expr::conj_var(j, n) * wirtinger_dzbar(e, j);
            return Cplx{0.0, -1.0} * acc;
        }
    }
    throw std::out_of_range("unknown operator kind");
}

Expr apply_rejected_variant(const Expr& e) {
    const int n = e.dim();
    Expr acc = Expr::constant(Cplx{0.0, 0.0}, n);
    for (int j = 1; j <= n; ++j) {
        acc = acc + wirtinger_dz(wirtinger_dzbar(e, j), j) -
              Expr::conj_var(j, n) * wirtinger_dz(e, j);
    }
    return acc;
}

double check_divergence_form(const Expr& e, const std::vector<CPoint>& points) {
    const int n = e.dim();
    const Expr lhs = apply_operator(OperatorKind::L, e);

    // rhs_j = e^{|z_j|^2} d/dz_j ( e^{-|z_j|^2} d/dzbar_j e )
    Expr rhs = Expr::constant(Cplx{0.0, 0.0}, n);
    for (int j = 1; j <= n; ++j) {
        const Expr zj = Expr::var(j, n);
        const Expr zjbar = Expr::conj_var(j, n);
        const Expr gauss_neg = exp_expr(Cplx{-1.0, 0.0} * zj * zjbar);
        const Expr gauss_pos = exp_expr(zj * zjbar);
        rhs = rhs + gauss_pos * wirtinger_dz(gauss_neg * wirtinger_dzbar(e, j), j);
    }

    double worst = 0.0;
    for (const auto& w : points)
        worst = std::max(worst, std::abs(evaluate(lhs, w) - evaluate(rhs, w)));
    return worst;
}

std::vector<std::vector<Expr>> complex_hessian(const Expr& e) {
    const int n = e.dim();
    std::vector<std::vector<Expr>> h(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        const Expr dj = wirtinger_dz(e, j);
        auto& row = h[static_cast<std::size_t>(j - 1)];
        row.reserve(static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k) row.push_back(wirtinger_dzbar(dj, k));
    }
    return h;
}

EvaluatedHessian hessian_at(const Expr& e, const CPoint& w) {
    return HessianEvaluator(e).at(w);
}

HessianEvaluator::HessianEvaluator(const Expr& e) : n_(e.dim()) {
    const auto entries = complex_hessian(e);
    entries_.reserve(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
            entries_.emplace_back(
                entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
}

EvaluatedHessian HessianEvaluator::at(const CPoint& w) const {
    if (static_cast<int>(w.size()) != n_)
        throw DimensionMismatch("hessian_at: point dimension mismatch");
    EvaluatedHessian out{HermitianMatrix(n_), 0.0};
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
            out.matrix.at(j, k) = entries_[static_cast<std::size_t>(j * n_ + k)](w);
    out.deviation = out.matrix.hermiticity_deviation();
    out.matrix.symmetrize();
    return out;
}

SemigroupParams SemigroupParams::from_time(double t) {
    if (t < 0.0) throw std::out_of_range("semigroup time must be non-negative");
    SemigroupParams p;
    p.t = t;
    p.c = std::exp(-0.5 * t);
    p.s = std::sqrt(1.0 - std::exp(-t));
    return p;
}

namespace {

double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

double factorial(int n) {
    double v = 1.0;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
}

} // namespace

Poly mehler_apply_poly(const Poly& p, const SemigroupParams& params) {
    const int n = p.dim();
    const double c = params.c;
    const double s = params.s;
    Poly out(n);

    // coordinate j contributes
    //   sum_r C(a_j, r) C(b_j, r) r! c^{a_j+b_j-2r} s^{2r} z_j^{a_j-r} zbar_j^{b_j-r}
    std::vector<std::pair<BiDegree, double>> partial;
    for (const auto& [key, coeff] : p.terms()) {
        partial.clear();
        partial.push_back({{MultiIndex(static_cast<std::size_t>(n), 0),
                            MultiIndex(static_cast<std::size_t>(n), 0)},
                           1.0});
        for (int j = 0; j < n; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            const int aj = key.a[sj];
            const int bj = key.b[sj];
            std::vector<std::pair<BiDegree, double>> next;
            next.reserve(partial.size() * static_cast<std::size_t>(std::min(aj, bj) + 1));
            for (int r = 0; r <= std::min(aj, bj); ++r) {
                const double factor = binomial(aj, r) * binomial(bj, r) * factorial(r) *
                                      pow_int(Cplx{c, 0.0}, aj + bj - 2 * r).real() *
                                      pow_int(Cplx{s, 0.0}, 2 * r).real();
                if (factor == 0.0) continue;
                for (const auto& [deg, val] : partial) {
                    BiDegree d = deg;
                    d.a[sj] = aj - r;
                    d.b[sj] = bj - r;
                    next.push_back({std::move(d), val * factor});
                }
            }
            partial = std::move(next);
        }
        for (const auto& [deg, val] : partial) out.add_term(deg, coeff * val);
    }
    return out;
}

namespace {

// Detects k * exp(a |z|^2 + c0): returns (k * e^{c0}, a) for the normalized
// tree, or nullopt.
std::optional<std::pair<Cplx, double>> gaussian_profile(const Expr& e) {
    const Node& root = *e.root();
    Cplx prefactor{1.0, 0.0};
    const Node* exp_node = nullptr;
    if (root.kind == NodeKind::Exp) {
        exp_node = &root;
    } else if (root.kind == NodeKind::Prod && root.kids.size() == 2 &&
               root.kids[0]->kind == NodeKind::Const && root.kids[1]->kind == NodeKind::Exp) {
        prefactor = root.kids[0]->value;
        exp_node = root.kids[1].get();
    } else {
        return std::nullopt;
    }

    Poly q(0);
    try {
        q = to_polynomial(Expr::raw(exp_node->kids[0], e.dim()));
    } catch (const NotPolynomial&) {
        return std::nullopt;
    }

    const auto n = static_cast<std::size_t>(e.dim());
    double rate = 0.0;
    bool rate_set = false;
    Cplx constant{0.0, 0.0};
    for (const auto& [key, c] : q.terms()) {
        int total = 0;
        bool diagonal = true;
        for (std::size_t j = 0; j < n; ++j) {
            total += key.a[j] + key.b[j];
            if (key.a[j] != key.b[j]) diagonal = false;
        }
        if (total == 0) {
            constant = c;
            continue;
        }
        // require exactly a * |z|^2: every z_j zbar_j with one shared real
        // coefficient and nothing else
        if (total != 2 || !diagonal) return std::nullopt;
        if (std::abs(c.imag()) > 1e-14 * (1.0 + std::abs(c.real()))) return std::nullopt;
        if (!rate_set) {
            rate = c.real();
            rate_set = true;
        } else if (std::abs(rate - c.real()) > 1e-14 * (1.0 + std::abs(rate))) {
            return std::nullopt;
        }
    }
    if (!rate_set) return std::nullopt; // plain exp(const) folds away earlier
    // all n diagonal terms must be present with the common rate
    int diag_terms = 0;
    for (const auto& [key, c] : q.terms()) {
        int total = 0;
        for (std::size_t j = 0; j < n; ++j) total += key.a[j] + key.b[j];
        if (total == 2) ++diag_terms;
    }
    if (diag_terms != e.dim()) return std::nullopt;
    return std::make_pair(prefactor * std::exp(constant), rate);
}

Expr gaussian_expr(int n, Cplx prefactor, double rate) {
    Expr sq = Expr::constant(Cplx{0.0, 0.0}, n);
    for (int j = 1; j <= n; ++j) sq = sq + Expr::var(j, n) * Expr::conj_var(j, n);
    return Expr::constant(prefactor, n) * exp_expr(Cplx{rate, 0.0} * sq);
}

} // namespace

std::optional<Expr> mehler_apply_closed(const Expr& e, const SemigroupParams& params) {
    try {
        const Poly p = to_polynomial(e);
        return mehler_apply_poly(p, params).to_expr();
    } catch (const NotPolynomial&) {
    }
    const auto profile = gaussian_profile(e);
    if (!profile) return std::nullopt;
    const auto [prefactor, a] = *profile;
    const double s2 = params.s * params.s;
    const double denom = 1.0 - a * s2;
    if (denom <= 0.0) return std::nullopt; // noise integral diverges
    const int n = e.dim();
    const double scale = std::pow(denom, -n);
    const double new_rate = a * params.c * params.c / denom;
    return gaussian_expr(n, prefactor * scale, new_rate);
}

Cplx mehler_apply_quadrature(const Expr& e, const SemigroupParams& params, const CPoint& w,
                             const QuadratureRule& rule, std::int64_t budget) {
    if (static_cast<int>(w.size()) != e.dim())
        throw DimensionMismatch("mehler_apply_quadrature: point dimension mismatch");
    CPoint contracted(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) contracted[j] = params.c * w[j];
    // integrand in the noise variable u; Gaussian factors of e are absorbed
    // into the rule by integrate_quadrature
    const Expr integrand = substitute_affine(e, params.s, contracted);
    return integrate_quadrature(integrand, rule, budget).value;
}

EvaluatedHessian semigroup_hessian_at(const Expr& e, const SemigroupParams& params,
                                      const CPoint& w, const QuadratureRule& rule,
                                      std::int64_t budget) {
    if (const auto closed = mehler_apply_closed(e, params)) return hessian_at(*closed, w);

    const int n = e.dim();
    const auto entries = complex_hessian(e);
    const double c2 = params.c * params.c;
    EvaluatedHessian out{HermitianMatrix(n), 0.0};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            out.matrix.at(j, k) =
                c2 * mehler_apply_quadrature(
                         entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)], params,
                         w, rule, budget);
    out.deviation = out.matrix.hermiticity_deviation();
    out.matrix.symmetrize();
    return out;
}

double generator_check(const Expr& e, double t, const std::vector<CPoint>& points) {
    const double h = 1e-4 * (1.0 + t);
    if (t < h) throw std::out_of_range("generator_check requires t >= h = 1e-4 (1 + t)");
    const Poly p = to_polynomial(e);

    const Poly plus = mehler_apply_poly(p, SemigroupParams::from_time(t + h));
    const Poly minus = mehler_apply_poly(p, SemigroupParams::from_time(t - h));
    const Poly mid = mehler_apply_poly(p, SemigroupParams::from_time(t));

    Poly fd = plus - minus;
    fd *= Cplx{1.0 / (2.0 * h), 0.0};
    const Expr rhs = apply_operator(OperatorKind::OU, mid.to_expr());

    double worst = 0.0;
    for (const auto& w : points)
        worst = std::max(worst, std::abs(fd.evaluate(w) - evaluate(rhs, w)));
    return worst;
}

} // namespace pshlab
