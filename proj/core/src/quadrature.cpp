#include "pshlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pshlab {

namespace {

// Symmetric tridiagonal QL with implicit shifts, tracking one row of the
// eigenvector matrix (enough to recover Gauss weights). d = diagonal,
// e = off-diagonal in e[0..n-2], v = row vector rotated along.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& v) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e.resize(static_cast<std::size_t>(n), 0.0);
    constexpr double eps = 2.22e-16;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd + 1e-300) break;
            }
            if (m == l) break;
            if (++iter > 50) throw std::runtime_error("quadrature eigensolver failed to converge");

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = v[static_cast<std::size_t>(i + 1)];
                v[static_cast<std::size_t>(i + 1)] = s * v[static_cast<std::size_t>(i)] + c * f;
                v[static_cast<std::size_t>(i)] = c * v[static_cast<std::size_t>(i)] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

} // namespace

QuadratureRule hermite_rule(int m) {
    if (m < 1 || m > 200)
        throw std::out_of_range("hermite_rule: node count " + std::to_string(m) +
                                " outside [1, 200]");

    // Jacobi matrix for physicists' Hermite: zero diagonal, off-diagonal
    // beta_k = sqrt(k/2).
    std::vector<double> diag(static_cast<std::size_t>(m), 0.0);
    std::vector<double> off(static_cast<std::size_t>(m > 1 ? m - 1 : 0));
    for (int k = 1; k < m; ++k) off[static_cast<std::size_t>(k - 1)] = std::sqrt(0.5 * k);
    std::vector<double> first_row(static_cast<std::size_t>(m), 0.0);
    first_row[0] = 1.0;

    tridiag_ql(diag, off, first_row);

    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return diag[static_cast<std::size_t>(i)] < diag[static_cast<std::size_t>(j)];
    });

    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const auto src = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
        rule.nodes[static_cast<std::size_t>(i)] = diag[src];
        // total mass of the normalized weight is 1, so the Gauss weight is the
        // squared first eigenvector component with no extra factor
        rule.weights[static_cast<std::size_t>(i)] = first_row[src] * first_row[src];
    }

    // enforce the symmetry x_i = -x_{m-1-i} exactly
    for (int i = 0, j = m - 1; i < j; ++i, --j) {
        const auto si = static_cast<std::size_t>(i);
        const auto sj = static_cast<std::size_t>(j);
        const double x = 0.5 * (rule.nodes[sj] - rule.nodes[si]);
        rule.nodes[si] = -x;
        rule.nodes[sj] = x;
        const double w = 0.5 * (rule.weights[si] + rule.weights[sj]);
        rule.weights[si] = w;
        rule.weights[sj] = w;
    }
    if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;

    return rule;
}

} // namespace pshlab
