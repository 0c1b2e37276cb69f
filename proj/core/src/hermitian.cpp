#include "pshlab/hermitian.hpp"

#include <algorithm>
#include <cmath>

namespace pshlab {

double HermitianMatrix::hermiticity_deviation() const {
    double worst = 0.0;
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
            worst = std::max(worst, std::abs(at(j, k) - std::conj(at(k, j))));
    return worst;
}

void HermitianMatrix::symmetrize() {
    for (int j = 0; j < n_; ++j) {
        for (int k = j; k < n_; ++k) {
            const Cplx v = 0.5 * (at(j, k) + std::conj(at(k, j)));
            at(j, k) = v;
            at(k, j) = std::conj(v);
        }
        at(j, j) = Cplx{at(j, j).real(), 0.0};
    }
}

namespace {

// Cyclic Jacobi for a small dense real symmetric matrix (row-major, in place).
std::vector<double> jacobi_eigenvalues(std::vector<double>& s, int m) {
    auto el = [&](int r, int c) -> double& { return s[static_cast<std::size_t>(r * m + c)]; };

    double scale = 0.0;
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) scale = std::max(scale, std::abs(el(r, c)));
    if (scale == 0.0) return std::vector<double>(static_cast<std::size_t>(m), 0.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int r = 0; r < m; ++r)
            for (int c = r + 1; c < m; ++c) off += el(r, c) * el(r, c);
        if (std::sqrt(off) <= 1e-15 * scale * m) break;

        for (int p = 0; p < m - 1; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const double apq = el(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double theta = (el(q, q) - el(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < m; ++k) {
                    const double akp = el(k, p);
                    const double akq = el(k, q);
                    el(k, p) = c * akp - sn * akq;
                    el(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    const double apk = el(p, k);
                    const double aqk = el(q, k);
                    el(p, k) = c * apk - sn * aqk;
                    el(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> ev(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) ev[static_cast<std::size_t>(r)] = el(r, r);
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& h, double herm_tol) {
    const double dev = h.hermiticity_deviation();
    if (dev > herm_tol)
        throw NotHermitian("matrix deviates from Hermitian symmetry by " + std::to_string(dev));

    HermitianMatrix sym = h;
    sym.symmetrize();

    const int n = h.size();
    const int m = 2 * n;
    // real embedding [[X, -Y], [Y, X]]; its spectrum is that of H, doubled
    std::vector<double> s(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
    auto put = [&](int r, int c, double v) { s[static_cast<std::size_t>(r * m + c)] = v; };
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const Cplx v = sym.at(j, k);
            put(j, k, v.real());
            put(j, k + n, -v.imag());
            put(j + n, k, v.imag());
            put(j + n, k + n, v.real());
        }
    }

    const std::vector<double> doubled = jacobi_eigenvalues(s, m);
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto lo = static_cast<std::size_t>(2 * i);
        ev[static_cast<std::size_t>(i)] = 0.5 * (doubled[lo] + doubled[lo + 1]);
    }
    return ev;
}

double min_eigenvalue(const HermitianMatrix& h, double herm_tol) {
    return hermitian_eigenvalues(h, herm_tol).front();
}

} // namespace pshlab
