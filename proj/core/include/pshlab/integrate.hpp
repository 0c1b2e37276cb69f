#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "pshlab/expr.hpp"
#include "pshlab/poly.hpp"
#include "pshlab/quadrature.hpp"
#include "pshlab/rng.hpp"

namespace pshlab {

/// Indexes the monomial z^a zbar^b.
struct MomentIndex {
    MultiIndex a;
    MultiIndex b;
};

enum class Method { Exact, Quadrature, MonteCarlo };

std::string method_name(Method m); // "exact" | "quadrature" | "mc"

constexpr std::int64_t kDefaultQuadratureBudget = 100'000'000;

struct IntegrationResult {
    Cplx value{0.0, 0.0};
    double stderr_re = 0.0;
    double stderr_im = 0.0;
    std::int64_t nodes = 0;   // tensor grid size (quadrature)
    std::int64_t samples = 0; // sample count (mc)
    Method method = Method::Exact;

    double stderr_combined() const { return std::hypot(stderr_re, stderr_im); }
};

/// Gaussian moment of z^a zbar^b: the product over coordinates of
/// delta_{a_j b_j} * a_j!. Exact.
double exact_moment(const MomentIndex& idx);

/// Termwise exact integration of a polynomial against the standard complex
/// Gaussian measure.
Cplx integrate_poly(const Poly& p);

/// Tensor-product Gauss-Hermite integration of a callable over C^n (2n real
/// coordinates). The grid is enumerated in lexicographic order and reduced by
/// a fixed pairwise tree over fixed-size chunks, so the result is independent
/// of how chunks are scheduled across workers.
IntegrationResult integrate_quadrature_fn(int n, const std::function<Cplx(const CPoint&)>& f,
                                          const QuadratureRule& rule,
                                          std::int64_t budget = kDefaultQuadratureBudget);

IntegrationResult integrate_quadrature(const Expr& e, const QuadratureRule& rule,
                                       std::int64_t budget = kDefaultQuadratureBudget);

/// Monte Carlo mean over cfg.samples standard complex Gaussian points, with
/// per-part standard errors. Deterministic given (seed, stream, samples).
/// Throws NonFiniteSample if an evaluation is not finite.
IntegrationResult integrate_mc_fn(int n, const std::function<Cplx(const CPoint&)>& f,
                                  const MCConfig& cfg);

IntegrationResult integrate_mc(const Expr& e, const MCConfig& cfg);

} // namespace pshlab
