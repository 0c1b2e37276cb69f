#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pshlab/expr.hpp"

namespace pshlab {

enum class GrowthKind { Polynomial, Subgaussian };

/// Growth bookkeeping used to decide integrability before any integral is
/// attempted: polynomial(total degree) or subgaussian(rate), the latter
/// meaning |f| <= poly * exp(rate |z|^2) with rate < 1.
struct GrowthClass {
    GrowthKind kind = GrowthKind::Polynomial;
    int degree = 0;  // polynomial total degree
    double rate = 0; // subgaussian rate

    double pairing_rate() const noexcept { return kind == GrowthKind::Polynomial ? 0.0 : rate; }
    std::string str() const;

    friend bool operator==(const GrowthClass& x, const GrowthClass& y) {
        if (x.kind != y.kind) return false;
        if (x.kind == GrowthKind::Polynomial) return x.degree == y.degree;
        return std::abs(x.rate - y.rate) <= 1e-12;
    }
};

/// Certifies integrability against dgamma by coefficient inspection.
/// Throws UnboundedGrowth when no certificate exists (nested exp, exp of
/// degree > 2, non-|z|^2 quadratic part, or rate >= 1).
GrowthClass check_growth(const Expr& e);

/// Two functions may be paired inside one integral iff the sum of their
/// subgaussian rates stays below 1.
bool can_pair(const GrowthClass& f, const GrowthClass& g);

struct CatalogEntry {
    std::string name;
    Expr expr;
    int dim = 1;
    bool claimed_psh = false;
    bool claimed_circular = false;
    GrowthClass growth;
};

struct ValidationReport {
    std::string entry;
    std::string check;
    CPoint worst_point;
    double worst_value = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct PshSampleSpec {
    int gaussian_points = 200;
    int dilated_points = 50;
    double dilation = 3.0;
    std::uint64_t seed = 2026;
};

/// Sampled plurisubharmonicity check: minimum Hessian eigenvalue over
/// Gaussian sample points plus a dilated ring; passes iff >= -tol.
ValidationReport check_psh(const Expr& e, const PshSampleSpec& spec, double tol = 1e-10);

/// Invariance under the common phase rotation z -> e^{i theta} z: numeric max
/// deviation over random (theta, w), and for polynomials the structural
/// bidegree test |a| = |b|, which must agree with the numeric verdict.
ValidationReport check_circular_symmetry(const Expr& e, double tol = 1e-9,
                                         std::uint64_t seed = 2026);

/// Real-valuedness: structural conj-invariance plus an imaginary-part bound
/// |Im e(w)| <= 1e-12 (1 + |e(w)|) at sampled points.
ValidationReport check_real_valued(const Expr& e, std::uint64_t seed = 2026);

/// The built-in function library at dimension n (1 <= n <= 4): circular psh
/// entries (Hermitian forms, powers of |z|^2, exp(a|z|^2)), non-symmetric psh
/// entries, and the negative controls -|z|^2 and re z1.
std::vector<CatalogEntry> builtin_catalog(int n);

/// All claim-consistency checks for one entry (real-valuedness, psh claim,
/// circular claim, growth class).
std::vector<ValidationReport> validate_entry(const CatalogEntry& entry);

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, const std::string& name);

} // namespace pshlab
