#pragma once

#include <cmath>
#include <vector>

#include "pshlab/expr.hpp"
#include "pshlab/rng.hpp"

namespace pshlab::testing {

inline bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(Cplx a, Cplx b, double tol) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
}

// central difference in the x- or y-direction of coordinate j
inline Cplx fd_real_dir(const Expr& e, const CPoint& w, int j, bool y_dir, double h) {
    CPoint plus = w;
    CPoint minus = w;
    const Cplx dh = y_dir ? Cplx{0.0, h} : Cplx{h, 0.0};
    plus[static_cast<std::size_t>(j - 1)] += dh;
    minus[static_cast<std::size_t>(j - 1)] -= dh;
    return (evaluate(e, plus) - evaluate(e, minus)) / (2.0 * h);
}

// finite-difference Wirtinger derivatives: (dx -/+ i dy)/2
inline Cplx fd_dz(const Expr& e, const CPoint& w, int j, double h = 1e-5) {
    return 0.5 * (fd_real_dir(e, w, j, false, h) - Cplx{0.0, 1.0} * fd_real_dir(e, w, j, true, h));
}

inline Cplx fd_dzbar(const Expr& e, const CPoint& w, int j, double h = 1e-5) {
    return 0.5 * (fd_real_dir(e, w, j, false, h) + Cplx{0.0, 1.0} * fd_real_dir(e, w, j, true, h));
}

inline std::vector<CPoint> random_points(int n, int count, std::uint64_t seed = 7) {
    const GaussianStream stream(seed, 0);
    std::vector<CPoint> points;
    for (int k = 0; k < count; ++k) points.push_back(stream.point(static_cast<std::uint64_t>(k), n));
    return points;
}

// bounded-depth random expression over C^n, driven by the counter stream
class ExprGen {
public:
    ExprGen(int n, std::uint64_t seed) : n_(n), stream_(seed, 909) {}

    Expr next() {
        Expr e = Expr::raw(gen(3), n_);
        return normalize(e);
    }

private:
    double uniform() {
        const auto [u1, u2] = stream_.uniforms(counter_++, 0);
        return u2;
    }

    int uniform_int(int bound) { return static_cast<int>(uniform() * bound) % bound; }

    NodePtr gen(int depth) {
        const int leaf_choice = uniform_int(4);
        if (depth == 0) {
            switch (leaf_choice) {
                case 0: return Node::var(1 + uniform_int(n_));
                case 1: return Node::conj_var(1 + uniform_int(n_));
                default:
                    return Node::constant(Cplx{uniform() * 4.0 - 2.0, uniform() * 4.0 - 2.0});
            }
        }
        switch (uniform_int(6)) {
            case 0: return Node::sum({gen(depth - 1), gen(depth - 1)});
            case 1: return Node::prod({gen(depth - 1), gen(depth - 1)});
            case 2: return Node::int_pow(gen(depth - 1), uniform_int(4));
            case 3: return Node::conj(gen(depth - 1));
            case 4:
                // keep exp arguments small so evaluation stays finite
                return Node::exp(Node::prod(
                    {Node::constant(Cplx{0.1, 0.0}), gen(std::min(depth - 1, 1))}));
            default: return gen(0);
        }
    }

    int n_;
    GaussianStream stream_;
    std::uint64_t counter_ = 0;
};

} // namespace pshlab::testing
