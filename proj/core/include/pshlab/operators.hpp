#pragma once

#include <optional>
#include <vector>

#include "pshlab/expr.hpp"
#include "pshlab/hermitian.hpp"
#include "pshlab/integrate.hpp"
#include "pshlab/poly.hpp"

namespace pshlab {

/// Differential operators acting on expressions:
///   L    = sum_j (d2/dz_j dzbar_j  -  zbar_j d/dzbar_j)
///   Lbar = sum_j (d2/dz_j dzbar_j  -  z_j    d/dz_j)
///   OU   = (L + Lbar) / 2                (Ornstein-Uhlenbeck generator)
///   R    = -i sum_j (z_j d/dz_j - zbar_j d/dzbar_j)   (rotation generator)
/// They satisfy L = OU + (i/2) R and Lbar = OU - (i/2) R.
enum class OperatorKind { OU, L, Lbar, R };

Expr apply_operator(OperatorKind kind, const Expr& e);

/// The discarded conjugation placement sum_j (d2/dz_j dzbar_j - zbar_j d/dz_j),
/// kept so suites can demonstrate that it breaks the integration-by-parts
/// identity.
Expr apply_rejected_variant(const Expr& e);

/// Max pointwise |L e - sum_j e^{|z_j|^2} d/dz_j (e^{-|z_j|^2} d/dzbar_j e)|
/// over the given points.
double check_divergence_form(const Expr& e, const std::vector<CPoint>& points);

/// Matrix of mixed Wirtinger second derivatives; entry (j, k) is
/// d2 e / dz_j dzbar_k (0-based indexing into the returned vectors).
std::vector<std::vector<Expr>> complex_hessian(const Expr& e);

/// Evaluated complex Hessian, averaged with its conjugate transpose. The
/// pre-symmetrization deviation is recorded on the matrix.
struct EvaluatedHessian {
    HermitianMatrix matrix;
    double deviation = 0.0; // hermiticity deviation before symmetrization
};

EvaluatedHessian hessian_at(const Expr& e, const CPoint& w);

/// Pre-differentiated, pre-compiled Hessian for evaluation at many points.
class HessianEvaluator {
public:
    explicit HessianEvaluator(const Expr& e);

    EvaluatedHessian at(const CPoint& w) const;
    int dim() const noexcept { return n_; }

private:
    int n_;
    std::vector<CompiledExpr> entries_; // row-major n x n
};

/// Time parameters of the Mehler semigroup: contraction c = e^{-t/2} and
/// noise scale s = sqrt(1 - e^{-t}), so c^2 + s^2 = 1.
struct SemigroupParams {
    double t = 0.0;
    double c = 1.0;
    double s = 0.0;

    static SemigroupParams from_time(double t);
};

/// Exact Mehler action on polynomials: substitute z <- c z + s u and
/// integrate u out by exact moments. P_0 = id and P_s P_t = P_{s+t}.
Poly mehler_apply_poly(const Poly& p, const SemigroupParams& params);

/// Symbolic Mehler action where a closed form exists: polynomial expressions,
/// and Gaussian profiles k * exp(a |z|^2 + const) with a s^2 < 1. Returns
/// nullopt otherwise.
std::optional<Expr> mehler_apply_closed(const Expr& e, const SemigroupParams& params);

/// Pointwise Mehler action by quadrature in the noise variable:
/// integral over u of e(c w + s u) dgamma(u).
Cplx mehler_apply_quadrature(const Expr& e, const SemigroupParams& params, const CPoint& w,
                             const QuadratureRule& rule,
                             std::int64_t budget = kDefaultQuadratureBudget);

/// Complex Hessian of P_t e at w. Uses the symbolic route when available;
/// otherwise each Hessian entry h_{jk} of e is propagated by the chain rule
/// (D^2 P_t e)(w) = c^2 * P_t(D^2 e)(w) and integrated by quadrature.
EvaluatedHessian semigroup_hessian_at(const Expr& e, const SemigroupParams& params,
                                      const CPoint& w, const QuadratureRule& rule,
                                      std::int64_t budget = kDefaultQuadratureBudget);

/// Max over points of |(P_{t+h} e - P_{t-h} e)/(2h) - OU P_t e| with
/// h = 1e-4 (1 + t). Polynomial expressions only (the path is exact).
double generator_check(const Expr& e, double t, const std::vector<CPoint>& points);

} // namespace pshlab
