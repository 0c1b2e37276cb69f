#pragma once

#include <vector>

namespace pshlab {

/// One-dimensional Gauss-Hermite rule for the normalized weight
/// exp(-x^2)/sqrt(pi): weights sum to 1, nodes symmetric about 0, exact on
/// monomials x^d for d <= 2m-1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const noexcept { return static_cast<int>(nodes.size()); }
};

/// Golub-Welsch construction: eigenvalues of the Jacobi matrix of the Hermite
/// recurrence, weights from the first eigenvector components. 1 <= m <= 200.
QuadratureRule hermite_rule(int m);

} // namespace pshlab
