#include "pshlab/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace pshlab {

Cplx pow_int(Cplx base, int k) {
    Cplx result{1.0, 0.0};
    Cplx b = base;
    int e = k;
    while (e > 0) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

NodePtr Node::constant(Cplx v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Const;
    n->value = v;
    return n;
}

NodePtr Node::var(int j) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Var;
    n->index = j;
    return n;
}

NodePtr Node::conj_var(int j) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::ConjVar;
    n->index = j;
    return n;
}

NodePtr Node::sum(std::vector<NodePtr> kids) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Sum;
    n->kids = std::move(kids);
    return n;
}

NodePtr Node::prod(std::vector<NodePtr> kids) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Prod;
    n->kids = std::move(kids);
    return n;
}

NodePtr Node::int_pow(NodePtr base, int k) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::IntPow;
    n->power = k;
    n->kids = {std::move(base)};
    return n;
}

NodePtr Node::exp(NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Exp;
    n->kids = {std::move(arg)};
    return n;
}

NodePtr Node::conj(NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Conj;
    n->kids = {std::move(arg)};
    return n;
}

namespace {

int kind_rank(NodeKind k) {
    switch (k) {
        case NodeKind::Const: return 0;
        case NodeKind::Var: return 1;
        case NodeKind::ConjVar: return 2;
        case NodeKind::Exp: return 3;
        case NodeKind::IntPow: return 4;
        case NodeKind::Prod: return 5;
        case NodeKind::Sum: return 6;
        case NodeKind::Conj: return 7;
    }
    return 8;
}

int cmp_double(double a, double b) {
    if (a < b) return -1;
    if (a > b) return 1;
    return 0;
}

bool is_const(const NodePtr& n, Cplx v) {
    return n->kind == NodeKind::Const && n->value == v;
}

} // namespace

int compare_nodes(const Node& a, const Node& b) {
    const int ra = kind_rank(a.kind);
    const int rb = kind_rank(b.kind);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind) {
        case NodeKind::Const: {
            const int c = cmp_double(a.value.real(), b.value.real());
            if (c != 0) return c;
            return cmp_double(a.value.imag(), b.value.imag());
        }
        case NodeKind::Var:
        case NodeKind::ConjVar:
            return a.index < b.index ? -1 : (a.index > b.index ? 1 : 0);
        case NodeKind::IntPow: {
            const int c = compare_nodes(*a.kids[0], *b.kids[0]);
            if (c != 0) return c;
            return a.power < b.power ? -1 : (a.power > b.power ? 1 : 0);
        }
        case NodeKind::Exp:
        case NodeKind::Conj:
            return compare_nodes(*a.kids[0], *b.kids[0]);
        case NodeKind::Sum:
        case NodeKind::Prod: {
            const std::size_t m = std::min(a.kids.size(), b.kids.size());
            for (std::size_t i = 0; i < m; ++i) {
                const int c = compare_nodes(*a.kids[i], *b.kids[i]);
                if (c != 0) return c;
            }
            if (a.kids.size() != b.kids.size())
                return a.kids.size() < b.kids.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

namespace {

void sort_children(std::vector<NodePtr>& kids) {
    std::sort(kids.begin(), kids.end(),
              [](const NodePtr& x, const NodePtr& y) { return compare_nodes(*x, *y) < 0; });
}

NodePtr normalize_impl(const NodePtr& node);

// `arg` is already normalized (conj-free); distributes conjugation to leaves.
NodePtr push_conj(const NodePtr& arg) {
    switch (arg->kind) {
        case NodeKind::Const:
            return Node::constant(std::conj(arg->value));
        case NodeKind::Var:
            return Node::conj_var(arg->index);
        case NodeKind::ConjVar:
            return Node::var(arg->index);
        case NodeKind::Sum:
        case NodeKind::Prod: {
            std::vector<NodePtr> kids;
            kids.reserve(arg->kids.size());
            for (const auto& k : arg->kids) kids.push_back(push_conj(k));
            // child order may change under conjugation
            auto n = arg->kind == NodeKind::Sum ? Node::sum(std::move(kids))
                                                : Node::prod(std::move(kids));
            return normalize_impl(n);
        }
        case NodeKind::IntPow:
            return Node::int_pow(push_conj(arg->kids[0]), arg->power);
        case NodeKind::Exp:
            return Node::exp(push_conj(arg->kids[0]));
        case NodeKind::Conj:
            return arg->kids[0]; // unreachable on normalized input
    }
    return arg;
}

NodePtr normalize_sum(std::vector<NodePtr> raw_kids) {
    std::vector<NodePtr> kids;
    Cplx const_part{0.0, 0.0};
    for (auto& k : raw_kids) {
        if (k->kind == NodeKind::Sum) {
            for (const auto& g : k->kids) {
                if (g->kind == NodeKind::Const)
                    const_part += g->value;
                else
                    kids.push_back(g);
            }
        } else if (k->kind == NodeKind::Const) {
            const_part += k->value;
        } else {
            kids.push_back(std::move(k));
        }
    }
    if (const_part != Cplx{0.0, 0.0} || kids.empty())
        kids.push_back(Node::constant(const_part));
    sort_children(kids);
    if (kids.size() == 1) return kids[0];
    return Node::sum(std::move(kids));
}

NodePtr normalize_prod(std::vector<NodePtr> raw_kids) {
    std::vector<NodePtr> kids;
    std::vector<NodePtr> exp_args;
    Cplx const_part{1.0, 0.0};
    for (auto& k : raw_kids) {
        if (k->kind == NodeKind::Prod) {
            for (const auto& g : k->kids) {
                if (g->kind == NodeKind::Const)
                    const_part *= g->value;
                else if (g->kind == NodeKind::Exp)
                    exp_args.push_back(g->kids[0]);
                else
                    kids.push_back(g);
            }
        } else if (k->kind == NodeKind::Const) {
            const_part *= k->value;
        } else if (k->kind == NodeKind::Exp) {
            exp_args.push_back(k->kids[0]);
        } else {
            kids.push_back(std::move(k));
        }
    }
    if (const_part == Cplx{0.0, 0.0}) return Node::constant(const_part);
    if (!exp_args.empty()) {
        NodePtr merged = exp_args.size() == 1 ? exp_args[0]
                                              : normalize_sum(std::move(exp_args));
        if (merged->kind == NodeKind::Const)
            const_part *= std::exp(merged->value);
        else
            kids.push_back(Node::exp(std::move(merged)));
    }
    if (const_part != Cplx{1.0, 0.0} || kids.empty())
        kids.push_back(Node::constant(const_part));
    sort_children(kids);
    if (kids.size() == 1) return kids[0];
    return Node::prod(std::move(kids));
}

NodePtr normalize_impl(const NodePtr& node) {
    switch (node->kind) {
        case NodeKind::Const:
        case NodeKind::Var:
        case NodeKind::ConjVar:
            return node;
        case NodeKind::Conj:
            return push_conj(normalize_impl(node->kids[0]));
        case NodeKind::Sum: {
            std::vector<NodePtr> kids;
            kids.reserve(node->kids.size());
            for (const auto& k : node->kids) kids.push_back(normalize_impl(k));
            return normalize_sum(std::move(kids));
        }
        case NodeKind::Prod: {
            std::vector<NodePtr> kids;
            kids.reserve(node->kids.size());
            for (const auto& k : node->kids) kids.push_back(normalize_impl(k));
            return normalize_prod(std::move(kids));
        }
        case NodeKind::IntPow: {
            NodePtr base = normalize_impl(node->kids[0]);
            const int k = node->power;
            if (k == 0) return Node::constant(Cplx{1.0, 0.0});
            if (k == 1) return base;
            if (base->kind == NodeKind::Const)
                return Node::constant(pow_int(base->value, k));
            if (base->kind == NodeKind::IntPow)
                return normalize_impl(Node::int_pow(base->kids[0], base->power * k));
            if (base->kind == NodeKind::Exp)
                return normalize_impl(Node::exp(
                    Node::prod({Node::constant(Cplx(double(k), 0.0)), base->kids[0]})));
            if (base->kind == NodeKind::Prod) {
                std::vector<NodePtr> kids;
                kids.reserve(base->kids.size());
                for (const auto& g : base->kids) kids.push_back(Node::int_pow(g, k));
                return normalize_impl(Node::prod(std::move(kids)));
            }
            return Node::int_pow(std::move(base), k);
        }
        case NodeKind::Exp: {
            NodePtr arg = normalize_impl(node->kids[0]);
            if (arg->kind == NodeKind::Const)
                return Node::constant(std::exp(arg->value));
            return Node::exp(std::move(arg));
        }
    }
    return node;
}

int max_var_index(const Node& node) {
    switch (node.kind) {
        case NodeKind::Var:
        case NodeKind::ConjVar:
            return node.index;
        case NodeKind::Const:
            return 0;
        default: {
            int m = 0;
            for (const auto& k : node.kids) m = std::max(m, max_var_index(*k));
            return m;
        }
    }
}

int min_var_index(const Node& node) {
    switch (node.kind) {
        case NodeKind::Var:
        case NodeKind::ConjVar:
            return node.index;
        case NodeKind::Const:
            return 1 << 30;
        default: {
            int m = 1 << 30;
            for (const auto& k : node.kids) m = std::min(m, min_var_index(*k));
            return m;
        }
    }
}

} // namespace

NodePtr normalize_node(const NodePtr& node) { return normalize_impl(node); }

Expr::Expr(NodePtr root, int dim) : Expr(std::move(root), dim, false) {}

Expr::Expr(NodePtr root, int dim, bool skip_normalize) : root_(std::move(root)), dim_(dim) {
    if (dim_ < 0) throw std::out_of_range("expression dimension must be non-negative");
    if (!skip_normalize) {
        const int mx = max_var_index(*root_);
        if (mx > dim_)
            throw std::out_of_range("variable index " + std::to_string(mx) +
                                    " exceeds ambient dimension " + std::to_string(dim_));
        const int mn = min_var_index(*root_);
        if (mn < 1 && mn != (1 << 30))
            throw std::out_of_range("variable indices are 1-based");
        root_ = normalize_impl(root_);
    }
}

Expr Expr::constant(Cplx v, int dim) { return Expr(Node::constant(v), dim); }
Expr Expr::var(int j, int dim) { return Expr(Node::var(j), dim); }
Expr Expr::conj_var(int j, int dim) { return Expr(Node::conj_var(j), dim); }
Expr Expr::raw(NodePtr root, int dim) { return Expr(std::move(root), dim, true); }

bool structurally_equal(const Expr& a, const Expr& b) {
    return a.dim() == b.dim() && compare_nodes(*a.root(), *b.root()) == 0;
}

namespace {

int merged_dim(const Expr& a, const Expr& b) {
    if (a.dim() == b.dim()) return a.dim();
    // constants are dimension-agnostic
    if (a.is_constant()) return b.dim();
    if (b.is_constant()) return a.dim();
    throw DimensionMismatch("cannot combine expressions over C^" + std::to_string(a.dim()) +
                            " and C^" + std::to_string(b.dim()));
}

} // namespace

Expr operator+(const Expr& a, const Expr& b) {
    return Expr(Node::sum({a.root(), b.root()}), merged_dim(a, b));
}

Expr operator-(const Expr& a, const Expr& b) {
    return Expr(Node::sum({a.root(), Node::prod({Node::constant(Cplx{-1.0, 0.0}), b.root()})}),
                merged_dim(a, b));
}

Expr operator*(const Expr& a, const Expr& b) {
    return Expr(Node::prod({a.root(), b.root()}), merged_dim(a, b));
}

Expr operator-(const Expr& a) {
    return Expr(Node::prod({Node::constant(Cplx{-1.0, 0.0}), a.root()}), a.dim());
}

Expr operator+(const Expr& a, Cplx c) { return a + Expr::constant(c, a.dim()); }
Expr operator+(Cplx c, const Expr& a) { return a + c; }
Expr operator*(const Expr& a, Cplx c) { return a * Expr::constant(c, a.dim()); }
Expr operator*(Cplx c, const Expr& a) { return a * c; }

Expr pow_expr(const Expr& base, int k) {
    if (k < 0) throw std::out_of_range("integer powers must be non-negative");
    return Expr(Node::int_pow(base.root(), k), base.dim());
}

Expr exp_expr(const Expr& arg) { return Expr(Node::exp(arg.root()), arg.dim()); }

Expr normalize(const Expr& e) { return Expr(e.root(), e.dim()); }

Expr conj_expr(const Expr& e) { return Expr(Node::conj(e.root()), e.dim()); }

bool is_real_valued(const Expr& e) {
    const Expr n = normalize(e);
    return structurally_equal(n, conj_expr(n));
}

namespace {

NodePtr dz_node(const NodePtr& n, int j, bool bar);

NodePtr prod_rule(const std::vector<NodePtr>& kids, int j, bool bar) {
    std::vector<NodePtr> terms;
    terms.reserve(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
        std::vector<NodePtr> factors = kids;
        factors[i] = dz_node(kids[i], j, bar);
        terms.push_back(Node::prod(std::move(factors)));
    }
    return Node::sum(std::move(terms));
}

NodePtr dz_node(const NodePtr& n, int j, bool bar) {
    switch (n->kind) {
        case NodeKind::Const:
            return Node::constant(Cplx{0.0, 0.0});
        case NodeKind::Var:
            return Node::constant((!bar && n->index == j) ? Cplx{1.0, 0.0} : Cplx{0.0, 0.0});
        case NodeKind::ConjVar:
            return Node::constant((bar && n->index == j) ? Cplx{1.0, 0.0} : Cplx{0.0, 0.0});
        case NodeKind::Sum: {
            std::vector<NodePtr> kids;
            kids.reserve(n->kids.size());
            for (const auto& k : n->kids) kids.push_back(dz_node(k, j, bar));
            return Node::sum(std::move(kids));
        }
        case NodeKind::Prod:
            return prod_rule(n->kids, j, bar);
        case NodeKind::IntPow: {
            if (n->power == 0) return Node::constant(Cplx{0.0, 0.0});
            return Node::prod({Node::constant(Cplx(double(n->power), 0.0)),
                               Node::int_pow(n->kids[0], n->power - 1),
                               dz_node(n->kids[0], j, bar)});
        }
        case NodeKind::Exp:
            return Node::prod({Node::exp(n->kids[0]), dz_node(n->kids[0], j, bar)});
        case NodeKind::Conj:
            // d/dz conj(e) = conj(d/dzbar e), and vice versa
            return Node::conj(dz_node(n->kids[0], j, !bar));
    }
    return Node::constant(Cplx{0.0, 0.0});
}

} // namespace

Expr wirtinger_dz(const Expr& e, int j) {
    if (j < 1 || j > e.dim()) throw std::out_of_range("derivative index out of range");
    return Expr(dz_node(e.root(), j, false), e.dim());
}

Expr wirtinger_dzbar(const Expr& e, int j) {
    if (j < 1 || j > e.dim()) throw std::out_of_range("derivative index out of range");
    return Expr(dz_node(e.root(), j, true), e.dim());
}

namespace {

Cplx eval_node(const Node& n, const CPoint& w) {
    switch (n.kind) {
        case NodeKind::Const:
            return n.value;
        case NodeKind::Var:
            return w[static_cast<std::size_t>(n.index - 1)];
        case NodeKind::ConjVar:
            return std::conj(w[static_cast<std::size_t>(n.index - 1)]);
        case NodeKind::Sum: {
            Cplx acc = eval_node(*n.kids[0], w);
            for (std::size_t i = 1; i < n.kids.size(); ++i) acc += eval_node(*n.kids[i], w);
            return acc;
        }
        case NodeKind::Prod: {
            Cplx acc = eval_node(*n.kids[0], w);
            for (std::size_t i = 1; i < n.kids.size(); ++i) acc *= eval_node(*n.kids[i], w);
            return acc;
        }
        case NodeKind::IntPow:
            return pow_int(eval_node(*n.kids[0], w), n.power);
        case NodeKind::Exp:
            return std::exp(eval_node(*n.kids[0], w));
        case NodeKind::Conj:
            return std::conj(eval_node(*n.kids[0], w));
    }
    return Cplx{0.0, 0.0};
}

} // namespace

Cplx evaluate(const Expr& e, const CPoint& w) {
    if (static_cast<int>(w.size()) != e.dim())
        throw DimensionMismatch("point has " + std::to_string(w.size()) +
                                " coordinates, expression expects " + std::to_string(e.dim()));
    return eval_node(*e.root(), w);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_complex(Cplx v, int digits) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.*g%+.*gi", digits, v.real(), digits, v.imag());
    return buf;
}

namespace {

// precedence: 1 sum, 2 product, 3 power operand, 4 atom
std::string print_node(const Node& n, int context);

std::string print_const(Cplx v) {
    const bool re_zero = v.real() == 0.0;
    const bool im_zero = v.imag() == 0.0;
    if (im_zero) {
        std::string s = format_double(v.real());
        if (v.real() < 0.0) return "(" + s + ")";
        return s;
    }
    if (re_zero) {
        std::string s = format_double(v.imag()) + "i";
        if (v.imag() < 0.0) return "(" + s + ")";
        return s;
    }
    std::string s = format_double(v.real());
    if (v.imag() >= 0.0) s += "+";
    s += format_double(v.imag()) + "i";
    return "(" + s + ")";
}

std::string print_node(const Node& n, int context) {
    switch (n.kind) {
        case NodeKind::Const:
            return print_const(n.value);
        case NodeKind::Var:
            return "z" + std::to_string(n.index);
        case NodeKind::ConjVar:
            return "conj(z" + std::to_string(n.index) + ")";
        case NodeKind::Conj:
            return "conj(" + print_node(*n.kids[0], 1) + ")";
        case NodeKind::Exp:
            return "exp(" + print_node(*n.kids[0], 1) + ")";
        case NodeKind::Sum: {
            std::string s;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) s += "+";
                s += print_node(*n.kids[i], 2);
            }
            if (context > 1) return "(" + s + ")";
            return s;
        }
        case NodeKind::Prod: {
            std::string s;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) s += "*";
                s += print_node(*n.kids[i], 3);
            }
            if (context > 2) return "(" + s + ")";
            return s;
        }
        case NodeKind::IntPow: {
            std::string base = print_node(*n.kids[0], 4);
            return base + "^" + std::to_string(n.power);
        }
    }
    return "0";
}

} // namespace

std::string to_string(const Expr& e) { return print_node(*e.root(), 1); }

namespace {

NodePtr substitute_node(const NodePtr& n, double scale, const CPoint& shift) {
    switch (n->kind) {
        case NodeKind::Const:
            return n;
        case NodeKind::Var: {
            const Cplx c = shift[static_cast<std::size_t>(n->index - 1)];
            return Node::sum({Node::constant(c),
                              Node::prod({Node::constant(Cplx{scale, 0.0}), Node::var(n->index)})});
        }
        case NodeKind::ConjVar: {
            const Cplx c = std::conj(shift[static_cast<std::size_t>(n->index - 1)]);
            return Node::sum({Node::constant(c), Node::prod({Node::constant(Cplx{scale, 0.0}),
                                                             Node::conj_var(n->index)})});
        }
        default: {
            auto out = std::make_shared<Node>(*n);
            for (auto& k : out->kids) k = substitute_node(k, scale, shift);
            return out;
        }
    }
}

} // namespace

Expr substitute_affine(const Expr& e, double scale, const CPoint& shift) {
    if (static_cast<int>(shift.size()) != e.dim())
        throw DimensionMismatch("substitute_affine: shift dimension mismatch");
    return Expr(substitute_node(e.root(), scale, shift), e.dim());
}

namespace {

int degree_bound(const Node& n) {
    switch (n.kind) {
        case NodeKind::Const:
            return 0;
        case NodeKind::Var:
        case NodeKind::ConjVar:
            return 1;
        case NodeKind::Conj:
            return degree_bound(*n.kids[0]);
        case NodeKind::Sum: {
            int d = 0;
            for (const auto& k : n.kids) {
                const int dk = degree_bound(*k);
                if (dk < 0) return -1;
                d = std::max(d, dk);
            }
            return d;
        }
        case NodeKind::Prod: {
            int d = 0;
            for (const auto& k : n.kids) {
                const int dk = degree_bound(*k);
                if (dk < 0) return -1;
                d += dk;
            }
            return d;
        }
        case NodeKind::IntPow: {
            const int dk = degree_bound(*n.kids[0]);
            return dk < 0 ? -1 : dk * n.power;
        }
        case NodeKind::Exp:
            return -1;
    }
    return -1;
}

} // namespace

int structural_degree(const Expr& e) { return degree_bound(*e.root()); }

CompiledExpr::CompiledExpr(const Expr& e) : dim_(e.dim()) {
    code_.reserve(64);
    emit(*e.root(), 1);
}

void CompiledExpr::emit(const Node& node, int depth) {
    stack_size_ = std::max(stack_size_, depth);
    switch (node.kind) {
        case NodeKind::Const:
            code_.push_back({Op::PushConst, 0, node.value});
            return;
        case NodeKind::Var:
            code_.push_back({Op::PushVar, node.index - 1, {}});
            return;
        case NodeKind::ConjVar:
            code_.push_back({Op::PushConjVar, node.index - 1, {}});
            return;
        case NodeKind::Sum:
            emit(*node.kids[0], depth);
            for (std::size_t i = 1; i < node.kids.size(); ++i) {
                emit(*node.kids[i], depth + 1);
                code_.push_back({Op::Add, 0, {}});
            }
            return;
        case NodeKind::Prod:
            emit(*node.kids[0], depth);
            for (std::size_t i = 1; i < node.kids.size(); ++i) {
                emit(*node.kids[i], depth + 1);
                code_.push_back({Op::Mul, 0, {}});
            }
            return;
        case NodeKind::IntPow:
            emit(*node.kids[0], depth);
            code_.push_back({Op::PowInt, node.power, {}});
            return;
        case NodeKind::Exp:
            emit(*node.kids[0], depth);
            code_.push_back({Op::Exp, 0, {}});
            return;
        case NodeKind::Conj:
            emit(*node.kids[0], depth);
            code_.push_back({Op::Conj, 0, {}});
            return;
    }
}

Cplx CompiledExpr::operator()(const CPoint& w) const {
    // catalog expressions stay shallow; 256 slots is far beyond any of them
    Cplx fixed[256];
    std::vector<Cplx> spill;
    Cplx* stack = fixed;
    if (stack_size_ > 256) {
        spill.resize(static_cast<std::size_t>(stack_size_));
        stack = spill.data();
    }
    int top = -1;
    for (const Instr& ins : code_) {
        switch (ins.op) {
            case Op::PushConst:
                stack[++top] = ins.value;
                break;
            case Op::PushVar:
                stack[++top] = w[static_cast<std::size_t>(ins.arg)];
                break;
            case Op::PushConjVar:
                stack[++top] = std::conj(w[static_cast<std::size_t>(ins.arg)]);
                break;
            case Op::Add:
                stack[top - 1] += stack[top];
                --top;
                break;
            case Op::Mul:
                stack[top - 1] *= stack[top];
                --top;
                break;
            case Op::PowInt:
                stack[top] = pow_int(stack[top], ins.arg);
                break;
            case Op::Exp:
                stack[top] = std::exp(stack[top]);
                break;
            case Op::Conj:
                stack[top] = std::conj(stack[top]);
                break;
        }
    }
    return stack[0];
}

} // namespace pshlab
