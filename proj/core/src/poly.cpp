#include "pshlab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace pshlab {

Poly Poly::constant(int dim, Cplx c) {
    Poly p(dim);
    p.add_term({MultiIndex(static_cast<std::size_t>(dim), 0),
                MultiIndex(static_cast<std::size_t>(dim), 0)},
               c);
    return p;
}

Poly Poly::monomial(int dim, MultiIndex a, MultiIndex b, Cplx c) {
    Poly p(dim);
    p.add_term({std::move(a), std::move(b)}, c);
    return p;
}

void Poly::add_term(const BiDegree& key, Cplx c) {
    if (c == Cplx{0.0, 0.0}) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Cplx{0.0, 0.0}) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& other) {
    for (const auto& [key, c] : other.terms_) add_term(key, c);
    return *this;
}

Poly operator-(const Poly& lhs, const Poly& rhs) {
    Poly out = lhs;
    for (const auto& [key, c] : rhs.terms_) out.add_term(key, -c);
    return out;
}

Poly operator*(const Poly& lhs, const Poly& rhs) {
    Poly out(lhs.dim_);
    const auto n = static_cast<std::size_t>(lhs.dim_);
    for (const auto& [ka, ca] : lhs.terms_) {
        for (const auto& [kb, cb] : rhs.terms_) {
            BiDegree key;
            key.a.resize(n);
            key.b.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                key.a[j] = ka.a[j] + kb.a[j];
                key.b[j] = ka.b[j] + kb.b[j];
            }
            out.add_term(key, ca * cb);
        }
    }
    return out;
}

Poly& Poly::operator*=(Cplx scale) {
    if (scale == Cplx{0.0, 0.0}) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, c] : terms_) c *= scale;
    return *this;
}

Poly Poly::pow(int k) const {
    Poly result = Poly::constant(dim_, Cplx{1.0, 0.0});
    for (int i = 0; i < k; ++i) result = result * *this;
    return result;
}

Poly Poly::conjugate() const {
    Poly out(dim_);
    for (const auto& [key, c] : terms_) out.add_term({key.b, key.a}, std::conj(c));
    return out;
}

int Poly::total_degree() const {
    int deg = -1;
    for (const auto& [key, c] : terms_) {
        const int d = std::accumulate(key.a.begin(), key.a.end(), 0) +
                      std::accumulate(key.b.begin(), key.b.end(), 0);
        deg = std::max(deg, d);
    }
    return deg;
}

bool Poly::is_real_valued(double abs_tol) const {
    for (const auto& [key, c] : terms_) {
        const auto it = terms_.find({key.b, key.a});
        const Cplx mirror = it == terms_.end() ? Cplx{0.0, 0.0} : it->second;
        if (std::abs(mirror - std::conj(c)) > abs_tol) return false;
    }
    return true;
}

double Poly::max_coeff_delta(const Poly& p, const Poly& q) {
    double worst = 0.0;
    for (const auto& [key, c] : p.terms_) {
        const auto it = q.terms_.find(key);
        const Cplx other = it == q.terms_.end() ? Cplx{0.0, 0.0} : it->second;
        worst = std::max(worst, std::abs(c - other));
    }
    for (const auto& [key, c] : q.terms_) {
        if (p.terms_.find(key) == p.terms_.end()) worst = std::max(worst, std::abs(c));
    }
    return worst;
}

Cplx Poly::evaluate(const CPoint& w) const {
    if (static_cast<int>(w.size()) != dim_)
        throw DimensionMismatch("point dimension does not match polynomial dimension");
    Cplx acc{0.0, 0.0};
    for (const auto& [key, c] : terms_) {
        Cplx m = c;
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (key.a[j] != 0) m *= pow_int(w[j], key.a[j]);
            if (key.b[j] != 0) m *= pow_int(std::conj(w[j]), key.b[j]);
        }
        acc += m;
    }
    return acc;
}

Expr Poly::to_expr() const {
    std::vector<NodePtr> terms;
    for (const auto& [key, c] : terms_) {
        std::vector<NodePtr> factors;
        factors.push_back(Node::constant(c));
        for (int j = 0; j < dim_; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            if (key.a[sj] != 0) factors.push_back(Node::int_pow(Node::var(j + 1), key.a[sj]));
            if (key.b[sj] != 0)
                factors.push_back(Node::int_pow(Node::conj_var(j + 1), key.b[sj]));
        }
        terms.push_back(Node::prod(std::move(factors)));
    }
    if (terms.empty()) return Expr::constant(Cplx{0.0, 0.0}, dim_);
    return Expr(Node::sum(std::move(terms)), dim_);
}

namespace {

Poly convert(const Node& node, int dim) {
    switch (node.kind) {
        case NodeKind::Const:
            return Poly::constant(dim, node.value);
        case NodeKind::Var: {
            MultiIndex a(static_cast<std::size_t>(dim), 0);
            MultiIndex b(static_cast<std::size_t>(dim), 0);
            a[static_cast<std::size_t>(node.index - 1)] = 1;
            return Poly::monomial(dim, std::move(a), std::move(b), Cplx{1.0, 0.0});
        }
        case NodeKind::ConjVar: {
            MultiIndex a(static_cast<std::size_t>(dim), 0);
            MultiIndex b(static_cast<std::size_t>(dim), 0);
            b[static_cast<std::size_t>(node.index - 1)] = 1;
            return Poly::monomial(dim, std::move(a), std::move(b), Cplx{1.0, 0.0});
        }
        case NodeKind::Sum: {
            Poly acc(dim);
            for (const auto& k : node.kids) acc += convert(*k, dim);
            return acc;
        }
        case NodeKind::Prod: {
            Poly acc = Poly::constant(dim, Cplx{1.0, 0.0});
            for (const auto& k : node.kids) acc = acc * convert(*k, dim);
            return acc;
        }
        case NodeKind::IntPow:
            return convert(*node.kids[0], dim).pow(node.power);
        case NodeKind::Conj:
            return convert(*node.kids[0], dim).conjugate();
        case NodeKind::Exp:
            throw NotPolynomial("expression contains exp()");
    }
    return Poly(dim);
}

} // namespace

Poly to_polynomial(const Expr& e) { return convert(*e.root(), e.dim()); }

} // namespace pshlab
