#include "pshlab/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "pshlab/hermitian.hpp"
#include "pshlab/operators.hpp"
#include "pshlab/poly.hpp"
#include "pshlab/rng.hpp"

namespace pshlab {

std::string GrowthClass::str() const {
    if (kind == GrowthKind::Polynomial) return "polynomial(" + std::to_string(degree) + ")";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "subgaussian(%g)", rate);
    return buf;
}

namespace {

struct GrowthAccum {
    bool subgaussian = false;
    int degree = 0;
    double rate = 0.0;
};

GrowthAccum growth_max(const GrowthAccum& x, const GrowthAccum& y) {
    GrowthAccum out;
    out.subgaussian = x.subgaussian || y.subgaussian;
    out.degree = std::max(x.degree, y.degree);
    out.rate = std::max(x.rate, y.rate);
    return out;
}

GrowthAccum growth_mul(const GrowthAccum& x, const GrowthAccum& y) {
    GrowthAccum out;
    out.subgaussian = x.subgaussian || y.subgaussian;
    out.degree = x.degree + y.degree;
    out.rate = x.rate + y.rate;
    return out;
}

GrowthAccum growth_of(const Node& node, int dim) {
    switch (node.kind) {
        case NodeKind::Const:
            return {false, 0, 0.0};
        case NodeKind::Var:
        case NodeKind::ConjVar:
            return {false, 1, 0.0};
        case NodeKind::Conj:
            return growth_of(*node.kids[0], dim);
        case NodeKind::Sum: {
            GrowthAccum acc = growth_of(*node.kids[0], dim);
            for (std::size_t i = 1; i < node.kids.size(); ++i)
                acc = growth_max(acc, growth_of(*node.kids[i], dim));
            return acc;
        }
        case NodeKind::Prod: {
            GrowthAccum acc = growth_of(*node.kids[0], dim);
            for (std::size_t i = 1; i < node.kids.size(); ++i)
                acc = growth_mul(acc, growth_of(*node.kids[i], dim));
            return acc;
        }
        case NodeKind::IntPow: {
            const GrowthAccum base = growth_of(*node.kids[0], dim);
            GrowthAccum out = base;
            out.degree = base.degree * node.power;
            out.rate = base.rate * node.power;
            return out;
        }
        case NodeKind::Exp: {
            Poly q(dim);
            try {
                q = to_polynomial(Expr::raw(node.kids[0], dim));
            } catch (const NotPolynomial&) {
                throw UnboundedGrowth("exp argument is itself exponential");
            }
            if (q.total_degree() > 2) throw UnboundedGrowth("exp argument has degree > 2");
            double rate = 0.0;
            for (const auto& [key, c] : q.terms()) {
                int total = 0;
                bool diagonal = true;
                for (std::size_t j = 0; j < key.a.size(); ++j) {
                    total += key.a[j] + key.b[j];
                    if (key.a[j] != key.b[j]) diagonal = false;
                }
                if (total < 2) continue;
                if (!diagonal || std::abs(c.imag()) > 1e-14 * (1.0 + std::abs(c)))
                    throw UnboundedGrowth("exp quadratic part is not a multiple of |z|^2");
                rate = std::max(rate, c.real());
            }
            return {true, 0, rate};
        }
    }
    return {false, 0, 0.0};
}

} // namespace

GrowthClass check_growth(const Expr& e) {
    const GrowthAccum acc = growth_of(*e.root(), e.dim());
    GrowthClass out;
    if (!acc.subgaussian) {
        out.kind = GrowthKind::Polynomial;
        out.degree = acc.degree;
        return out;
    }
    if (acc.rate >= 1.0)
        throw UnboundedGrowth("subgaussian rate " + std::to_string(acc.rate) + " is not < 1");
    out.kind = GrowthKind::Subgaussian;
    out.rate = acc.rate;
    return out;
}

bool can_pair(const GrowthClass& f, const GrowthClass& g) {
    return f.pairing_rate() + g.pairing_rate() < 1.0;
}

ValidationReport check_psh(const Expr& e, const PshSampleSpec& spec, double tol) {
    ValidationReport report;
    report.check = "psh";
    report.tol = tol;
    const GaussianStream stream(spec.seed, 17);
    const HessianEvaluator hessian(e);

    double worst = std::numeric_limits<double>::infinity();
    CPoint worst_point;
    const int total = spec.gaussian_points + spec.dilated_points;
    for (int k = 0; k < total; ++k) {
        CPoint w = stream.point(static_cast<std::uint64_t>(k), e.dim());
        if (k >= spec.gaussian_points)
            for (auto& z : w) z *= spec.dilation;
        const double lambda = min_eigenvalue(hessian.at(w).matrix);
        if (lambda < worst) {
            worst = lambda;
            worst_point = w;
        }
    }
    report.worst_value = worst;
    report.worst_point = worst_point;
    report.pass = worst >= -tol;
    return report;
}

ValidationReport check_circular_symmetry(const Expr& e, double tol, std::uint64_t seed) {
    ValidationReport report;
    report.check = "circular-symmetry";
    report.tol = tol;
    const GaussianStream stream(seed, 23);

    double worst = 0.0;
    CPoint worst_point;
    for (int k = 0; k < 50; ++k) {
        CPoint w = stream.point(static_cast<std::uint64_t>(k), e.dim());
        const auto [u1, u2] = stream.uniforms(static_cast<std::uint64_t>(k), 1000);
        const double theta = (2.0 * u2 - 1.0) * M_PI;
        const Cplx phase = std::polar(1.0, theta);
        CPoint rotated = w;
        for (auto& z : rotated) z *= phase;
        const double dev = std::abs(evaluate(e, rotated) - evaluate(e, w));
        if (dev > worst) {
            worst = dev;
            worst_point = w;
        }
    }
    report.worst_value = worst;
    report.worst_point = worst_point;
    const bool numeric_pass = worst <= tol;

    // structural test on polynomials: every monomial must satisfy |a| = |b|
    bool structural_applicable = true;
    bool structural_pass = true;
    try {
        const Poly p = to_polynomial(e);
        for (const auto& [key, c] : p.terms()) {
            int da = 0;
            int db = 0;
            for (std::size_t j = 0; j < key.a.size(); ++j) {
                da += key.a[j];
                db += key.b[j];
            }
            if (da != db) {
                structural_pass = false;
                break;
            }
        }
    } catch (const NotPolynomial&) {
        structural_applicable = false;
    }

    report.pass = numeric_pass && (!structural_applicable || structural_pass == numeric_pass);
    return report;
}

ValidationReport check_real_valued(const Expr& e, std::uint64_t seed) {
    ValidationReport report;
    report.check = "real-valued";
    report.tol = 1e-12;

    const bool structural = is_real_valued(e);
    const GaussianStream stream(seed, 31);
    double worst = 0.0;
    CPoint worst_point;
    for (int k = 0; k < 20; ++k) {
        const CPoint w = stream.point(static_cast<std::uint64_t>(k), e.dim());
        const Cplx v = evaluate(e, w);
        const double scaled = std::abs(v.imag()) / (1.0 + std::abs(v));
        if (scaled > worst) {
            worst = scaled;
            worst_point = w;
        }
    }
    report.worst_value = worst;
    report.worst_point = worst_point;
    report.pass = structural && worst <= report.tol;
    return report;
}

namespace {

Expr abs_sq(int j, int n) { return Expr::var(j, n) * Expr::conj_var(j, n); }

Expr norm_sq(int n) {
    Expr acc = Expr::constant(Cplx{0.0, 0.0}, n);
    for (int j = 1; j <= n; ++j) acc = acc + abs_sq(j, n);
    return acc;
}

Expr re_part(const Expr& e) { return Cplx{0.5, 0.0} * (e + conj_expr(e)); }

CatalogEntry make_entry(std::string name, Expr expr, bool psh, bool circular) {
    CatalogEntry entry;
    entry.name = std::move(name);
    entry.dim = expr.dim();
    entry.expr = std::move(expr);
    entry.claimed_psh = psh;
    entry.claimed_circular = circular;
    entry.growth = check_growth(entry.expr);
    return entry;
}

} // namespace

std::vector<CatalogEntry> builtin_catalog(int n) {
    if (n < 1 || n > 4) throw std::out_of_range("catalog dimension must lie in [1, 4]");

    std::vector<CatalogEntry> entries;
    const Expr q = norm_sq(n);

    entries.push_back(make_entry("one", Expr::constant(Cplx{1.0, 0.0}, n), true, true));
    entries.push_back(make_entry("norm2", q, true, true));
    entries.push_back(make_entry("norm2_sq", pow_expr(q, 2), true, true));
    entries.push_back(make_entry("norm2_cube", pow_expr(q, 3), true, true));

    {
        // per-coordinate powers |z_1|^4 + sum_{j>=2} |z_j|^2
        Expr acc = pow_expr(abs_sq(1, n), 2);
        for (int j = 2; j <= n; ++j) acc = acc + abs_sq(j, n);
        entries.push_back(make_entry("coord_powers", acc, true, true));
    }

    {
        // Hermitian form sum A_{jk} z_j zbar_k with A positive semidefinite
        Expr herm = n == 1 ? Cplx{2.0, 0.0} * abs_sq(1, 1) : norm_sq(n);
        if (n >= 2) {
            herm = herm + Cplx{0.0, 0.5} * Expr::var(1, n) * Expr::conj_var(2, n) +
                   Cplx{0.0, -0.5} * Expr::var(2, n) * Expr::conj_var(1, n);
        }
        entries.push_back(make_entry("herm_form", herm, true, true));
    }

    entries.push_back(make_entry("gauss_quarter", exp_expr(Cplx{0.25, 0.0} * q), true, true));
    entries.push_back(make_entry("gauss_half", exp_expr(Cplx{0.5, 0.0} * q), true, true));

    {
        const Expr shifted = Expr::var(1, n) - Expr::constant(Cplx{1.0, 0.0}, n);
        entries.push_back(make_entry("shifted_abs2", shifted * conj_expr(shifted), true, false));
    }

    entries.push_back(make_entry("re_sq", pow_expr(re_part(Expr::var(1, n)), 2), true, false));
    entries.push_back(make_entry("exp_re", exp_expr(re_part(Expr::var(1, n))), true, false));

    {
        // |p(z)|^2 for a holomorphic polynomial p
        const Expr p = n == 1 ? pow_expr(Expr::var(1, 1), 2) + Cplx{1.0, 0.0}
                              : Expr::var(1, n) * Expr::var(2, n) + Cplx{1.0, 0.0};
        entries.push_back(make_entry("holo_sq", p * conj_expr(p), true, false));
    }

    entries.push_back(make_entry("neg_norm2", -q, false, true));
    entries.push_back(make_entry("re_z", re_part(Expr::var(1, n)), true, false));
    entries.push_back(make_entry("neg_re", -re_part(Expr::var(1, n)), true, false));

    return entries;
}

std::vector<ValidationReport> validate_entry(const CatalogEntry& entry) {
    std::vector<ValidationReport> reports;

    ValidationReport real = check_real_valued(entry.expr);
    real.entry = entry.name;
    reports.push_back(real);

    ValidationReport psh = check_psh(entry.expr, PshSampleSpec{});
    psh.entry = entry.name;
    psh.check = "psh-claim";
    psh.pass = psh.pass == entry.claimed_psh;
    reports.push_back(psh);

    ValidationReport circ = check_circular_symmetry(entry.expr);
    circ.entry = entry.name;
    circ.check = "circular-claim";
    circ.pass = circ.pass == entry.claimed_circular;
    reports.push_back(circ);

    ValidationReport growth;
    growth.entry = entry.name;
    growth.check = "growth-claim";
    try {
        growth.pass = check_growth(entry.expr) == entry.growth;
    } catch (const UnboundedGrowth&) {
        growth.pass = false;
    }
    reports.push_back(growth);

    return reports;
}

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, const std::string& name) {
    for (const auto& entry : catalog)
        if (entry.name == name) return entry;
    throw std::out_of_range("no catalog entry named '" + name + "'");
}

} // namespace pshlab
