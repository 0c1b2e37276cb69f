#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pshlab/errors.hpp"

namespace pshlab {

using Cplx = std::complex<double>;

/// A point w in C^n. Coordinate j of the ambient space is w[j-1].
using CPoint = std::vector<Cplx>;

/// Integer power with binary exponentiation; exact for k = 0 (returns 1).
Cplx pow_int(Cplx base, int k);

enum class NodeKind : std::uint8_t {
    Const,   // complex scalar
    Var,     // z_j
    ConjVar, // conj(z_j)
    Sum,     // n-ary sum
    Prod,    // n-ary product
    IntPow,  // base^k, k >= 0
    Exp,     // exp(arg)
    Conj     // conj(arg); eliminated by normalization
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable AST node. Shared subtrees are allowed; nodes are never mutated
/// after construction, so expressions are safe to use from concurrent workers.
struct Node {
    NodeKind kind = NodeKind::Const;
    Cplx value{0.0, 0.0};      // Const payload
    int index = 0;             // Var/ConjVar payload, 1-based
    int power = 0;             // IntPow exponent
    std::vector<NodePtr> kids; // children for composite kinds

    static NodePtr constant(Cplx v);
    static NodePtr var(int j);
    static NodePtr conj_var(int j);
    static NodePtr sum(std::vector<NodePtr> kids);
    static NodePtr prod(std::vector<NodePtr> kids);
    static NodePtr int_pow(NodePtr base, int k);
    static NodePtr exp(NodePtr arg);
    static NodePtr conj(NodePtr arg);
};

/// Total structural order on nodes; returns <0, 0, >0. Zero iff the trees are
/// structurally identical. Used for canonical child ordering and equality.
int compare_nodes(const Node& a, const Node& b);

/// Canonical form: conj pushed to leaves, sums/products flattened and sorted,
/// constants folded, trivial powers removed. Idempotent.
NodePtr normalize_node(const NodePtr& node);

/// Symbolic expression over z_1..z_n, closed under Wirtinger differentiation
/// and conjugation. Kept in normal form; the ambient dimension travels with
/// the value.
class Expr {
public:
    Expr() : Expr(Node::constant(Cplx{0.0, 0.0}), 0, true) {}

    /// Wraps (and normalizes) a node tree. Throws std::out_of_range if a
    /// variable index exceeds `dim`.
    Expr(NodePtr root, int dim);

    static Expr constant(Cplx v, int dim);
    static Expr var(int j, int dim);
    static Expr conj_var(int j, int dim);

    /// Test hook: wraps without normalizing.
    static Expr raw(NodePtr root, int dim);

    const NodePtr& root() const noexcept { return root_; }
    int dim() const noexcept { return dim_; }

    bool is_constant() const noexcept { return root_->kind == NodeKind::Const; }

private:
    Expr(NodePtr root, int dim, bool skip_normalize);

    NodePtr root_;
    int dim_ = 0;
};

bool structurally_equal(const Expr& a, const Expr& b);

// Arithmetic on expressions. Mixing ambient dimensions throws
// DimensionMismatch; constants promote to either side's dimension.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, Cplx c);
Expr operator+(Cplx c, const Expr& a);
Expr operator*(const Expr& a, Cplx c);
Expr operator*(Cplx c, const Expr& a);

Expr pow_expr(const Expr& base, int k);
Expr exp_expr(const Expr& arg);

/// Re-normalizes. With expressions produced by this library the result is
/// structurally identical to the input (normal forms are idempotent).
Expr normalize(const Expr& e);

/// Complex conjugate as an expression: evaluate(conj_expr(e), w) ==
/// conj(evaluate(e, w)) for every w.
Expr conj_expr(const Expr& e);

/// True iff the normalized expression equals its own conjugate, i.e. the
/// function is real-valued everywhere.
bool is_real_valued(const Expr& e);

/// Wirtinger derivative d/dz_j, 1 <= j <= dim.
Expr wirtinger_dz(const Expr& e, int j);

/// Wirtinger derivative d/dzbar_j, 1 <= j <= dim.
Expr wirtinger_dzbar(const Expr& e, int j);

/// Exact AST evaluation. Throws DimensionMismatch unless w.size() == e.dim().
Cplx evaluate(const Expr& e, const CPoint& w);

/// Grammar-conformant text; parse_expr(to_string(e), e.dim()) reproduces e.
std::string to_string(const Expr& e);

/// Substitutes z_j <- shift_j + scale * z_j (and the conjugate rule for
/// zbar_j). `scale` is real so conjugate coordinates stay consistent.
Expr substitute_affine(const Expr& e, double scale, const CPoint& shift);

/// Upper bound on the total polynomial degree, or -1 when the expression
/// contains exp() (no polynomial bound).
int structural_degree(const Expr& e);

/// Flattened postfix program for fast repeated evaluation. Performs exactly
/// the same floating-point operations in the same order as evaluate(), so the
/// two paths are bit-identical.
class CompiledExpr {
public:
    explicit CompiledExpr(const Expr& e);

    Cplx operator()(const CPoint& w) const;
    int dim() const noexcept { return dim_; }

private:
    enum class Op : std::uint8_t { PushConst, PushVar, PushConjVar, Add, Mul, PowInt, Exp, Conj };
    struct Instr {
        Op op;
        int arg = 0;
        Cplx value{};
    };

    void emit(const Node& node, int depth);

    std::vector<Instr> code_;
    int dim_ = 0;
    int stack_size_ = 0;
};

std::string format_double(double x);

/// "re+imi" rendering, e.g. "2+0i", "-1.5-2i". `digits` is the %g precision.
std::string format_complex(Cplx v, int digits = 12);

} // namespace pshlab
