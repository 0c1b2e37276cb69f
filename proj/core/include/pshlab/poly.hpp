#pragma once

#include <map>
#include <vector>

#include "pshlab/expr.hpp"

namespace pshlab {

using MultiIndex = std::vector<int>;

/// Bidegree (a, b) of a monomial z^a zbar^b; both multi-indices have length n.
struct BiDegree {
    MultiIndex a;
    MultiIndex b;

    friend bool operator<(const BiDegree& x, const BiDegree& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    }
    friend bool operator==(const BiDegree& x, const BiDegree& y) {
        return x.a == y.a && x.b == y.b;
    }
};

/// Canonical polynomial sum c_{a,b} z^a zbar^b: keys sorted lexicographically
/// (std::map), no exactly-zero coefficients stored.
class Poly {
public:
    explicit Poly(int dim) : dim_(dim) {}

    static Poly constant(int dim, Cplx c);
    static Poly monomial(int dim, MultiIndex a, MultiIndex b, Cplx c);

    int dim() const noexcept { return dim_; }
    const std::map<BiDegree, Cplx>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Merges a term into the map, dropping the key if it cancels to zero.
    void add_term(const BiDegree& key, Cplx c);

    Poly& operator+=(const Poly& other);
    friend Poly operator+(Poly lhs, const Poly& rhs) { return lhs += rhs; }
    friend Poly operator-(const Poly& lhs, const Poly& rhs);
    friend Poly operator*(const Poly& lhs, const Poly& rhs);
    Poly& operator*=(Cplx scale);

    Poly pow(int k) const;

    /// Swaps holomorphic/antiholomorphic degrees and conjugates coefficients.
    Poly conjugate() const;

    /// max |a| + |b| over stored monomials; -1 for the zero polynomial.
    int total_degree() const;

    /// Real-valued iff c_{b,a} = conj(c_{a,b}) for all keys (within abs_tol).
    bool is_real_valued(double abs_tol = 0.0) const;

    /// Largest |c_{a,b} - d_{a,b}| over the union of keys.
    static double max_coeff_delta(const Poly& p, const Poly& q);

    Cplx evaluate(const CPoint& w) const;

    Expr to_expr() const;

private:
    int dim_;
    std::map<BiDegree, Cplx> terms_;
};

/// Canonical expansion of a polynomial expression. Throws NotPolynomial when
/// the (normalized) expression contains an exp node.
Poly to_polynomial(const Expr& e);

} // namespace pshlab
