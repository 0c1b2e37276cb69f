#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/integrate.hpp"
#include "pshlab/operators.hpp"

namespace pshlab {

/// Outcome record of one verified identity.
struct CheckResult {
    std::string suite;
    std::string identity;
    std::string f;
    std::string g;
    int dim = 0;
    Method method = Method::Exact;
    Cplx lhs{0.0, 0.0};
    Cplx rhs{0.0, 0.0};
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tol = 0.0;
    double stderr_val = 0.0;
    std::int64_t nodes = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    bool pass = false;
};

/// Shared numeric configuration for checks. Monte Carlo stream ids are
/// allocated sequentially from here, so a fixed execution order replays
/// identical results.
class CheckContext {
public:
    int nodes = 32;
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 12345;
    std::int64_t budget = kDefaultQuadratureBudget;
    double tol_exact = 1e-10;
    double tol_quadrature = 1e-8;
    double tol_pointwise = 1e-10;

    CheckContext() : rule_(hermite_rule(32)) {}
    explicit CheckContext(int quad_nodes) : nodes(quad_nodes), rule_(hermite_rule(quad_nodes)) {}

    const QuadratureRule& rule() const { return rule_; }
    void set_nodes(int m) {
        nodes = m;
        rule_ = hermite_rule(m);
    }
    std::uint64_t take_stream() { return next_stream_++; }
    double tol_for(Method m) const {
        return m == Method::Quadrature ? tol_quadrature : tol_exact;
    }

    /// Deterministic points from the shared sampler (fixed stream).
    std::vector<CPoint> sample_points(int n, int count, std::uint64_t stream = 101) const;

private:
    QuadratureRule rule_;
    std::uint64_t next_stream_ = 0;
};

/// Method auto-selection for a pairing: exact when both factors are
/// polynomial, tensor quadrature while the grid fits the budget, Monte Carlo
/// above that. Respects the Monte Carlo variance rule (combined rate < 1/2).
Method resolve_method(std::optional<Method> requested, const CatalogEntry& f,
                      const CatalogEntry& g, const CheckContext& ctx);

/// True when fg has a finite Monte Carlo variance certificate:
/// rate(f) + rate(g) < 1/2.
bool can_pair_mc(const GrowthClass& f, const GrowthClass& g);

IntegrationResult integrate_with(const Expr& e, Method method, CheckContext& ctx);

// ---- integration-by-parts -------------------------------------------------

/// First-order identity: integral (L f) g = -integral del_zbar f . del_z g
/// = integral f (Lbar g). Emits the two equalities (left=middle,
/// middle=right).
std::pair<CheckResult, CheckResult> check_ibp_first(const CatalogEntry& f, const CatalogEntry& g,
                                                    std::optional<Method> method,
                                                    CheckContext& ctx);

/// Second-order identity for circular-symmetric f: integral (OU^2 f) g =
/// sum_{j,k} integral H(f)_{jk} H(g)_{kj}.
CheckResult check_ibp_second(const CatalogEntry& f, const CatalogEntry& g,
                             std::optional<Method> method, CheckContext& ctx);

// ---- pointwise operator identities ----------------------------------------

/// Pointwise commutation of L with every d/dz_j.
CheckResult check_commutation(const CatalogEntry& f, const std::vector<CPoint>& points,
                              CheckContext& ctx);

/// Counter-control documenting that OU itself does not commute with d/dz:
/// passes when the residual on z_1^2 is at least 0.1 at some sampled point.
CheckResult check_commutation_counter(int dim, const std::vector<CPoint>& points,
                                      CheckContext& ctx);

/// Operator relations L = OU + (i/2) R and Lbar = OU - (i/2) R, the
/// divergence form of L, and for circular-symmetric entries the collapse
/// R f = 0, OU f = L f = Lbar f.
std::vector<CheckResult> check_relations(const CatalogEntry& f, const std::vector<CPoint>& points,
                                         CheckContext& ctx);

/// Residual of the first IBP identity when L is replaced by the rejected
/// conjugation placement; passes when the residual is large (>= 0.5).
CheckResult check_rejected_variant(int dim, CheckContext& ctx);

// ---- Dirichlet form --------------------------------------------------------

/// integral (-L f) conj(f) = integral |del_zbar f|^2 >= 0, for a named
/// expression (catalog entries or complex-valued probes).
CheckResult check_dirichlet_expr(const std::string& name, const Expr& f,
                                 std::optional<Method> method, CheckContext& ctx);

CheckResult check_dirichlet(const CatalogEntry& f, std::optional<Method> method,
                            CheckContext& ctx);

// ---- correlation -----------------------------------------------------------

/// Covariance integral fg - integral f integral g. In hypothesis mode the
/// check asserts covariance >= -tol (>= -4 stderr for mc); in control mode it
/// compares the signed value against `expected`.
CheckResult check_correlation(const CatalogEntry& f, const CatalogEntry& g,
                              std::optional<Method> method, CheckContext& ctx,
                              std::optional<double> expected = std::nullopt);

/// Pointwise trace pairing Tr(D^2(P_t f) D^2 g) >= -tol at sample points.
CheckResult check_trace_nonneg(const CatalogEntry& f, const CatalogEntry& g, double t,
                               const std::vector<CPoint>& points, CheckContext& ctx);

/// Sampled minimum Hessian eigenvalue of P_t f over t in `ts`; psh entries
/// must stay >= -tol.
CheckResult check_psh_preservation(const CatalogEntry& f, const std::vector<double>& ts,
                                   const std::vector<CPoint>& points, CheckContext& ctx);

// ---- semigroup interpolation ----------------------------------------------

struct AlphaGrid {
    double start = 0.0;
    double stop = 5.0;
    double step = 0.25;
    double proxy = 20.0; // "infinity" consistency point; <= 0 disables

    std::vector<double> points() const; // uniform part followed by the proxy
};

/// alpha(t) = integral (P_t f) g dgamma on a grid, with finite-difference
/// derivatives, the trace-formula second derivative, and the independent
/// endpoint alpha(inf) = integral f * integral g.
struct AlphaStudy {
    std::string f;
    std::string g;
    int dim = 0;
    Method method = Method::Exact;
    std::vector<double> t;
    std::vector<double> alpha;
    std::vector<double> dalpha_fd;    // NaN at ends and at the proxy
    std::vector<double> d2alpha_fd;   // NaN at ends and at the proxy
    std::vector<double> d2alpha_trace;
    double alpha_inf = 0.0;
    int regular_count = 0; // entries [0, regular_count) are uniformly spaced

    // flags are recomputed from the stored values
    double worst_convexity() const;    // min of d2alpha_trace
    double worst_monotonicity() const; // max of alpha[i+1] - alpha[i]
    double endpoint_gap() const;       // alpha(0) - alpha_inf
    double proxy_gap() const;          // |alpha(proxy) - alpha_inf|, 0 if no proxy
    /// max over interior points of |d2_fd - d2_trace| / max(1e-6, 1e-3 |d2_trace|).
    double fd_trace_excess() const;
};

/// Runs the interpolation study. f must be validated psh + circular-symmetric
/// and g psh; the deterministic backends are used (exact for polynomial
/// pairs, otherwise quadrature via the symbolic semigroup route).
AlphaStudy alpha_study(const CatalogEntry& f, const CatalogEntry& g, const AlphaGrid& grid,
                       std::optional<Method> method, CheckContext& ctx);

/// Converts study flags into suite check results.
std::vector<CheckResult> alpha_study_checks(const AlphaStudy& study, CheckContext& ctx);

} // namespace pshlab
