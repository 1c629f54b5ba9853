#pragma once

// Reference computations used only by tests. None of them call the LP solver
// or the containment code they check.

#include "polycover/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

using polycover::Matrix;
using polycover::Polytope;
using polycover::Scalar;
using polycover::Vec;

/// Jarvis march on planar points; counter-clockwise, collinear points dropped.
inline std::vector<Eigen::Vector2d> gift_wrap(const Polytope& p) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < p.size(); ++i) pts.emplace_back(p.vertex(i)[0], p.vertex(i)[1]);
    const auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::size_t start = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].x() < pts[start].x() || (pts[i].x() == pts[start].x() && pts[i].y() < pts[start].y())) start = i;
    std::vector<Eigen::Vector2d> hull;
    std::size_t cur = start;
    do {
        hull.push_back(pts[cur]);
        std::size_t next = (cur + 1) % pts.size();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Scalar c = cross(pts[cur], pts[next], pts[i]);
            const bool farther = (pts[i] - pts[cur]).squaredNorm() > (pts[next] - pts[cur]).squaredNorm();
            if (c < -1e-14 || (std::abs(c) <= 1e-14 && farther)) next = i;
        }
        cur = next;
    } while (cur != start && hull.size() <= pts.size());
    return hull;
}

/// Half-planes a.x <= b of a convex polygon.
struct HalfPlanes {
    std::vector<Eigen::Vector2d> a;
    std::vector<Scalar> b;
};

inline HalfPlanes half_planes(const Polytope& l) {
    const auto hull = gift_wrap(l);
    HalfPlanes h;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Eigen::Vector2d e = hull[(i + 1) % hull.size()] - hull[i];
        const Eigen::Vector2d n(e.y(), -e.x());
        h.a.push_back(n.normalized());
        h.b.push_back(h.a.back().dot(hull[i]));
    }
    return h;
}

/// Is there v with t*K + v inside L? Exact up to rounding: the feasible v form
/// a bounded polygon, nonempty iff some pair of boundary lines meets inside it.
inline bool scaled_fits_2d(const Polytope& k, const HalfPlanes& l, Scalar t) {
    const std::size_t m = l.a.size();
    std::vector<Scalar> rhs(m);
    for (std::size_t e = 0; e < m; ++e) {
        Scalar hk = -std::numeric_limits<Scalar>::infinity();
        for (int i = 0; i < k.size(); ++i) hk = std::max(hk, l.a[e].dot(Eigen::Vector2d(k.vertex(i)[0], k.vertex(i)[1])));
        rhs[e] = l.b[e] - t * hk;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            Eigen::Matrix2d a;
            a << l.a[i].transpose(), l.a[j].transpose();
            if (std::abs(a.determinant()) < 1e-12) continue;
            const Eigen::Vector2d v = a.inverse() * Eigen::Vector2d(rhs[i], rhs[j]);
            bool ok = true;
            for (std::size_t e = 0; e < m && ok; ++e) ok = l.a[e].dot(v) <= rhs[e] + 1e-12;
            if (ok) return true;
        }
    }
    return false;
}

/// Largest grid value t = k * step with t*K translating into L.
inline Scalar grid_sigma_2d(const Polytope& k, const Polytope& l, Scalar step = 1e-3, Scalar t_max = 20.0) {
    const HalfPlanes h = half_planes(l);
    Scalar best = 0.0;
    for (Scalar t = step; t <= t_max; t += step) {
        if (!scaled_fits_2d(k, h, t)) break;
        best = t;
    }
    return best;
}

inline Scalar width(const Polytope& p, const Vec& w) {
    Scalar hi = -std::numeric_limits<Scalar>::infinity();
    Scalar lo = std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i < p.size(); ++i) {
        hi = std::max(hi, p.vertex(i).dot(w));
        lo = std::min(lo, p.vertex(i).dot(w));
    }
    return hi - lo;
}

/// Sigma of the 1D shadows of planar K, L along u (onto the line orthogonal to u).
inline Scalar line_shadow_sigma_2d(const Polytope& k, const Polytope& l, const Vec& u) {
    Vec w(2);
    w << -u[1], u[0];
    return width(l, w) / width(k, w);
}

struct BruteLp {
    bool feasible = false;
    Scalar objective = -std::numeric_limits<Scalar>::infinity();
};

/// max c.z, A z = b, z >= 0 by enumerating every basis (A of full row rank,
/// bounded feasible region assumed).
inline BruteLp brute_force_lp(const Matrix& a, const Vec& b, const Vec& c) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    BruteLp r;
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    for (;;) {
        Matrix basis(m, m);
        for (int i = 0; i < m; ++i) basis.col(i) = a.col(idx[i]);
        Eigen::FullPivLU<Matrix> lu(basis);
        if (lu.isInvertible()) {
            const Vec zb = lu.solve(b);
            if (zb.minCoeff() >= -1e-10) {
                Scalar obj = 0.0;
                for (int i = 0; i < m; ++i) obj += c[idx[i]] * zb[i];
                r.feasible = true;
                r.objective = std::max(r.objective, obj);
            }
        }
        int i = m - 1;
        while (i >= 0 && idx[i] == n - m + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return r;
}

/// Barycentric coordinates of x with respect to the simplex's vertices.
inline Vec barycentric(const Polytope& simplex, const Vec& x) {
    const int n = simplex.dim();
    Matrix a(n + 1, n + 1);
    a.topRows(n) = simplex.vertices();
    a.row(n).setOnes();
    Vec rhs(n + 1);
    rhs.head(n) = x;
    rhs[n] = 1.0;
    return a.fullPivLu().solve(rhs);
}

}  // namespace oracle
