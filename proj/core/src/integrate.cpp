#include "pshlab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <thread>
#include <vector>

namespace pshlab {

std::string method_name(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Quadrature: return "quadrature";
        case Method::MonteCarlo: return "mc";
    }
    return "?";
}

double exact_moment(const MomentIndex& idx) {
    if (idx.a.size() != idx.b.size())
        throw DimensionMismatch("moment multi-indices have different lengths");
    double value = 1.0;
    for (std::size_t j = 0; j < idx.a.size(); ++j) {
        if (idx.a[j] != idx.b[j]) return 0.0;
        for (int k = 2; k <= idx.a[j]; ++k) value *= k;
    }
    return value;
}

Cplx integrate_poly(const Poly& p) {
    Cplx acc{0.0, 0.0};
    for (const auto& [key, c] : p.terms()) acc += c * exact_moment({key.a, key.b});
    return acc;
}

namespace {

constexpr std::int64_t kChunk = 4096;

// Pairwise tree reduction over per-chunk partial sums; the combination order
// depends only on the chunk partition, never on scheduling.
template <typename T, typename Combine>
T tree_reduce(std::vector<T> leaves, Combine combine) {
    while (leaves.size() > 1) {
        std::vector<T> next;
        next.reserve((leaves.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < leaves.size(); i += 2)
            next.push_back(combine(leaves[i], leaves[i + 1]));
        if (leaves.size() % 2 == 1) next.push_back(leaves.back());
        leaves = std::move(next);
    }
    return leaves.front();
}

template <typename Task>
void run_chunks(std::int64_t chunk_count, Task&& task) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::int64_t>(chunk_count, static_cast<std::int64_t>(hw)));
    if (workers <= 1) {
        for (std::int64_t c = 0; c < chunk_count; ++c) task(c);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (unsigned wkr = 0; wkr < workers; ++wkr) {
        futures.push_back(std::async(std::launch::async, [&, wkr]() {
            for (std::int64_t c = wkr; c < chunk_count; c += workers) task(c);
        }));
    }
    for (auto& f : futures) f.get();
}

} // namespace

IntegrationResult integrate_quadrature_fn(int n, const std::function<Cplx(const CPoint&)>& f,
                                          const QuadratureRule& rule, std::int64_t budget) {
    const int m = rule.size();
    const int reals = 2 * n;
    double total_d = 1.0;
    for (int k = 0; k < reals; ++k) total_d *= m;
    if (total_d > static_cast<double>(budget))
        throw QuadratureBudgetExceeded("tensor grid of " + std::to_string(total_d) +
                                       " points exceeds budget " + std::to_string(budget));
    const std::int64_t total = n == 0 ? 1 : static_cast<std::int64_t>(total_d);

    const std::int64_t chunk_count = (total + kChunk - 1) / kChunk;
    std::vector<Cplx> partial(static_cast<std::size_t>(chunk_count));

    run_chunks(chunk_count, [&](std::int64_t c) {
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(begin + kChunk, total);

        // odometer over grid digits, most significant digit first
        std::vector<int> digit(static_cast<std::size_t>(reals), 0);
        std::int64_t rem = begin;
        for (int k = reals - 1; k >= 0; --k) {
            digit[static_cast<std::size_t>(k)] = static_cast<int>(rem % m);
            rem /= m;
        }

        CPoint w(static_cast<std::size_t>(n));
        Cplx acc{0.0, 0.0};
        for (std::int64_t idx = begin; idx < end; ++idx) {
            double weight = 1.0;
            for (int j = 0; j < n; ++j) {
                const auto dx = static_cast<std::size_t>(2 * j);
                const auto dy = static_cast<std::size_t>(2 * j + 1);
                w[static_cast<std::size_t>(j)] =
                    Cplx{rule.nodes[static_cast<std::size_t>(digit[dx])],
                         rule.nodes[static_cast<std::size_t>(digit[dy])]};
                weight *= rule.weights[static_cast<std::size_t>(digit[dx])] *
                          rule.weights[static_cast<std::size_t>(digit[dy])];
            }
            acc += weight * f(w);

            for (int k = reals - 1; k >= 0; --k) {
                auto& dk = digit[static_cast<std::size_t>(k)];
                if (++dk < m) break;
                dk = 0;
            }
        }
        partial[static_cast<std::size_t>(c)] = acc;
    });

    IntegrationResult out;
    out.value = tree_reduce(std::move(partial), [](Cplx x, Cplx y) { return x + y; });
    out.nodes = total;
    out.method = Method::Quadrature;
    return out;
}

namespace {

// Decomposition e = p * exp(q) with q = c0 + sum_j (beta_j z_j + conj(beta_j)
// zbar_j + sigma_j z_j zbar_j), sigma real and < 1. Such a factor can be
// absorbed exactly into the Gaussian weight by shifting and rescaling the
// quadrature nodes, which leaves the polynomial part to the rule itself.
struct GaussianFactor {
    NodePtr poly_part;
    std::vector<double> sigma;
    std::vector<Cplx> beta;
    double c0 = 0.0;
};

bool contains_exp(const Node& n) {
    if (n.kind == NodeKind::Exp) return true;
    for (const auto& k : n.kids)
        if (contains_exp(*k)) return true;
    return false;
}

// Recursively splits a normalized node into residual * exp(arg). Sums factor
// only when all terms carry the structurally identical exponent; products
// accumulate exponents. Returns false when no such split exists.
bool split_exp_factor(const NodePtr& n, NodePtr& residual, NodePtr& exp_arg) {
    if (!contains_exp(*n)) {
        residual = n;
        exp_arg = nullptr;
        return true;
    }
    switch (n->kind) {
        case NodeKind::Exp:
            if (contains_exp(*n->kids[0])) return false;
            residual = Node::constant(Cplx{1.0, 0.0});
            exp_arg = n->kids[0];
            return true;
        case NodeKind::Prod: {
            std::vector<NodePtr> rest;
            std::vector<NodePtr> args;
            for (const auto& k : n->kids) {
                NodePtr r;
                NodePtr a;
                if (!split_exp_factor(k, r, a)) return false;
                if (a) args.push_back(a);
                if (!(r->kind == NodeKind::Const && r->value == Cplx{1.0, 0.0}))
                    rest.push_back(r);
            }
            residual = rest.empty() ? Node::constant(Cplx{1.0, 0.0})
                                    : (rest.size() == 1 ? rest[0] : Node::prod(std::move(rest)));
            exp_arg = args.empty() ? nullptr
                                   : (args.size() == 1 ? args[0]
                                                       : normalize_node(Node::sum(std::move(args))));
            return true;
        }
        case NodeKind::Sum: {
            std::vector<NodePtr> parts;
            exp_arg = nullptr;
            for (const auto& k : n->kids) {
                NodePtr r;
                NodePtr a;
                if (!split_exp_factor(k, r, a)) return false;
                if (a == nullptr) return false; // mixed exp and exp-free terms
                if (exp_arg == nullptr)
                    exp_arg = a;
                else if (compare_nodes(*exp_arg, *a) != 0)
                    return false;
                parts.push_back(r);
            }
            residual = parts.size() == 1 ? parts[0] : Node::sum(std::move(parts));
            return true;
        }
        case NodeKind::IntPow: {
            NodePtr r;
            NodePtr a;
            if (!split_exp_factor(n->kids[0], r, a)) return false;
            residual = Node::int_pow(r, n->power);
            exp_arg = a ? normalize_node(Node::prod(
                              {Node::constant(Cplx(double(n->power), 0.0)), a}))
                        : nullptr;
            return true;
        }
        default:
            return false; // Conj does not survive normalization
    }
}

std::optional<GaussianFactor> factor_gaussian(const Expr& e) {
    const NodePtr& root = e.root();
    if (!contains_exp(*root)) return std::nullopt; // plain polynomial: raw rule is exact

    NodePtr poly;
    NodePtr exp_arg;
    if (!split_exp_factor(root, poly, exp_arg)) return std::nullopt;
    if (exp_arg == nullptr) return std::nullopt;

    Poly q(e.dim());
    try {
        q = to_polynomial(Expr::raw(exp_arg, e.dim()));
    } catch (const NotPolynomial&) {
        return std::nullopt;
    }

    const auto n = static_cast<std::size_t>(e.dim());
    GaussianFactor out;
    out.poly_part = poly;
    out.sigma.assign(n, 0.0);
    std::vector<Cplx> beta(n, Cplx{0.0, 0.0});
    std::vector<Cplx> gamma(n, Cplx{0.0, 0.0});
    for (const auto& [key, c] : q.terms()) {
        int da = 0;
        int db = 0;
        for (std::size_t j = 0; j < n; ++j) {
            da += key.a[j];
            db += key.b[j];
        }
        const double scale = 1.0 + std::abs(c);
        if (da + db == 0) {
            if (std::abs(c.imag()) > 1e-13 * scale) return std::nullopt;
            out.c0 = c.real();
        } else if (da == 1 && db == 0) {
            for (std::size_t j = 0; j < n; ++j)
                if (key.a[j] == 1) beta[j] = c;
        } else if (da == 0 && db == 1) {
            for (std::size_t j = 0; j < n; ++j)
                if (key.b[j] == 1) gamma[j] = c;
        } else if (da == 1 && db == 1) {
            std::size_t ja = n;
            std::size_t jb = n;
            for (std::size_t j = 0; j < n; ++j) {
                if (key.a[j] == 1) ja = j;
                if (key.b[j] == 1) jb = j;
            }
            if (ja != jb) return std::nullopt; // off-diagonal quadratic term
            if (std::abs(c.imag()) > 1e-13 * scale) return std::nullopt;
            out.sigma[ja] = c.real();
        } else {
            return std::nullopt; // z^2-type term or degree > 2
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double scale = 1.0 + std::abs(beta[j]);
        if (std::abs(gamma[j] - std::conj(beta[j])) > 1e-13 * scale)
            return std::nullopt; // exponent is not real-valued
        if (out.sigma[j] >= 1.0 - 1e-9) return std::nullopt; // not integrable
    }
    out.beta = std::move(beta);
    return out;
}

} // namespace

namespace {

// A Gauss rule with m' >= (d+2)/2 nodes already integrates a degree-d
// polynomial exactly; shrinking to that size changes the value only at
// rounding level while collapsing the tensor grid.
const QuadratureRule& reduced_rule_for(int degree, const QuadratureRule& rule,
                                       QuadratureRule& storage) {
    if (degree < 0) return rule;
    const int m_exact = degree / 2 + 1;
    if (m_exact >= rule.size()) return rule;
    storage = hermite_rule(m_exact);
    return storage;
}

} // namespace

IntegrationResult integrate_quadrature(const Expr& e, const QuadratureRule& rule,
                                       std::int64_t budget) {
    if (const auto factor = factor_gaussian(e)) {
        // absorb exp(q) into the weight: w_j = u_j / sqrt(tau_j) + conj(beta_j)/tau_j
        // with tau_j = 1 - sigma_j, against a constant exp(c0) prod_j
        // exp(|beta_j|^2 / tau_j) / tau_j.
        const auto n = static_cast<std::size_t>(e.dim());
        CPoint shift(n);
        double scale_common = 1.0;
        bool uniform_scale = true;
        std::vector<double> scale(n);
        double constant = std::exp(factor->c0);
        for (std::size_t j = 0; j < n; ++j) {
            const double tau = 1.0 - factor->sigma[j];
            scale[j] = 1.0 / std::sqrt(tau);
            if (j == 0)
                scale_common = scale[j];
            else if (scale[j] != scale_common)
                uniform_scale = false;
            shift[j] = std::conj(factor->beta[j]) / tau;
            constant *= std::exp(std::norm(factor->beta[j]) / tau) / tau;
        }

        IntegrationResult result;
        const Expr residual = Expr::raw(factor->poly_part, e.dim());
        QuadratureRule storage;
        const QuadratureRule& use = reduced_rule_for(structural_degree(residual), rule, storage);
        if (uniform_scale) {
            const Expr transformed = substitute_affine(residual, scale_common, shift);
            const CompiledExpr compiled(transformed);
            result = integrate_quadrature_fn(
                e.dim(), [&compiled](const CPoint& u) { return compiled(u); }, use, budget);
        } else {
            const CompiledExpr compiled(residual);
            result = integrate_quadrature_fn(
                e.dim(),
                [&](const CPoint& u) {
                    thread_local CPoint w;
                    w.resize(u.size());
                    for (std::size_t j = 0; j < u.size(); ++j)
                        w[j] = shift[j] + scale[j] * u[j];
                    return compiled(w);
                },
                use, budget);
        }
        result.value *= constant;
        return result;
    }

    QuadratureRule storage;
    const QuadratureRule& use = reduced_rule_for(structural_degree(e), rule, storage);
    const CompiledExpr compiled(e);
    return integrate_quadrature_fn(
        e.dim(), [&compiled](const CPoint& w) { return compiled(w); }, use, budget);
}

namespace {

struct McAccum {
    double sum_re = 0.0, sum_im = 0.0;
    double sumsq_re = 0.0, sumsq_im = 0.0;
    std::int64_t count = 0;
    bool finite = true;

    static McAccum combine(const McAccum& x, const McAccum& y) {
        McAccum out;
        out.sum_re = x.sum_re + y.sum_re;
        out.sum_im = x.sum_im + y.sum_im;
        out.sumsq_re = x.sumsq_re + y.sumsq_re;
        out.sumsq_im = x.sumsq_im + y.sumsq_im;
        out.count = x.count + y.count;
        out.finite = x.finite && y.finite;
        return out;
    }
};

} // namespace

IntegrationResult integrate_mc_fn(int n, const std::function<Cplx(const CPoint&)>& f,
                                  const MCConfig& cfg) {
    if (cfg.samples < 1) throw std::out_of_range("sample count must be positive");
    const GaussianStream stream(cfg.seed, cfg.stream);
    const std::int64_t total = cfg.samples;
    const std::int64_t chunk_count = (total + kChunk - 1) / kChunk;
    std::vector<McAccum> partial(static_cast<std::size_t>(chunk_count));

    run_chunks(chunk_count, [&](std::int64_t c) {
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(begin + kChunk, total);
        McAccum acc;
        CPoint w(static_cast<std::size_t>(n));
        for (std::int64_t k = begin; k < end; ++k) {
            for (int j = 0; j < n; ++j)
                w[static_cast<std::size_t>(j)] =
                    stream.coordinate(static_cast<std::uint64_t>(k), static_cast<std::uint32_t>(j));
            const Cplx v = f(w);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                acc.finite = false;
                break;
            }
            acc.sum_re += v.real();
            acc.sum_im += v.imag();
            acc.sumsq_re += v.real() * v.real();
            acc.sumsq_im += v.imag() * v.imag();
            ++acc.count;
        }
        partial[static_cast<std::size_t>(c)] = acc;
    });

    const McAccum acc = tree_reduce(std::move(partial), McAccum::combine);
    if (!acc.finite)
        throw NonFiniteSample("non-finite sample encountered during Monte Carlo integration");

    const auto num = static_cast<double>(total);
    IntegrationResult out;
    out.value = Cplx{acc.sum_re / num, acc.sum_im / num};
    if (total > 1) {
        const double var_re =
            std::max(0.0, (acc.sumsq_re - acc.sum_re * acc.sum_re / num) / (num - 1.0));
        const double var_im =
            std::max(0.0, (acc.sumsq_im - acc.sum_im * acc.sum_im / num) / (num - 1.0));
        out.stderr_re = std::sqrt(var_re / num);
        out.stderr_im = std::sqrt(var_im / num);
    }
    out.samples = total;
    out.method = Method::MonteCarlo;
    return out;
}

IntegrationResult integrate_mc(const Expr& e, const MCConfig& cfg) {
    const CompiledExpr compiled(e);
    return integrate_mc_fn(
        e.dim(), [&compiled](const CPoint& w) { return compiled(w); }, cfg);
}

} // namespace pshlab
