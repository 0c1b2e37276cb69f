#pragma once

#include <vector>

#include "pshlab/expr.hpp"

namespace pshlab {

/// Dense n x n complex matrix intended to be Hermitian (e.g. a complex
/// Hessian evaluated at a point). Entries are stored row-major.
class HermitianMatrix {
public:
    explicit HermitianMatrix(int n)
        : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Cplx{0.0, 0.0}) {}

    int size() const noexcept { return n_; }

    Cplx& at(int j, int k) { return a_[static_cast<std::size_t>(j * n_ + k)]; }
    const Cplx& at(int j, int k) const { return a_[static_cast<std::size_t>(j * n_ + k)]; }

    /// max |H_{jk} - conj(H_{kj})|.
    double hermiticity_deviation() const;

    /// Replaces H by (H + H^dagger)/2.
    void symmetrize();

private:
    int n_;
    std::vector<Cplx> a_;
};

/// All eigenvalues in ascending order, via cyclic Jacobi sweeps on the real
/// symmetric embedding [[X, -Y], [Y, X]] of H = X + iY. Throws NotHermitian
/// when the input deviates from Hermitian symmetry by more than herm_tol.
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& h, double herm_tol = 1e-8);

double min_eigenvalue(const HermitianMatrix& h, double herm_tol = 1e-8);

} // namespace pshlab
