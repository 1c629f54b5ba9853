#include "polycover/bodies.hpp"

#include "polycover/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace polycover {

Polytope::Polytope(Matrix vertices) : v_(std::move(vertices)) {
    if (v_.rows() < 1) throw PreconditionError("polytope dimension must be positive");
    if (v_.cols() < 1) throw PreconditionError("polytope needs at least one vertex");
    if (!v_.allFinite()) throw PreconditionError("vertex coordinates must be finite");
}

Polytope Polytope::from_points(const std::vector<Vec>& points) {
    if (points.empty()) throw PreconditionError("polytope needs at least one vertex");
    Matrix m(points.front().size(), static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != m.rows()) throw PreconditionError("ragged vertex list");
        m.col(static_cast<Eigen::Index>(i)) = points[i];
    }
    return Polytope(std::move(m));
}

Polytope Polytope::translated(const Vec& w) const {
    if (w.size() != v_.rows()) throw PreconditionError("translation dimension mismatch");
    Polytope out(v_.colwise() + w);
    out.canonical_ = canonical_;
    return out;
}

Polytope Polytope::scaled(Scalar c) const {
    Polytope out(v_ * c);
    out.canonical_ = canonical_ && c != 0.0;
    return out;
}

Polytope Polytope::subset(const std::vector<int>& indices) const {
    if (indices.empty()) throw PreconditionError("empty vertex subset");
    Matrix m(v_.rows(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const int i = indices[k];
        if (i < 0 || i >= size()) throw PreconditionError("vertex index out of range");
        m.col(static_cast<Eigen::Index>(k)) = v_.col(i);
    }
    Polytope out(std::move(m));
    out.canonical_ = canonical_;
    return out;
}

Polytope Polytope::with_canonical_flag(bool flag) const {
    Polytope out = *this;
    out.canonical_ = flag;
    return out;
}

Scalar Flat::distance(const Vec& x) const {
    const Vec d = x - origin;
    return (d - basis * (basis.transpose() * d)).norm();
}

Scalar support(const Polytope& p, const Vec& u) {
    if (u.size() != p.dim()) throw PreconditionError("support: dimension mismatch");
    return (p.vertices().transpose() * u).maxCoeff();
}

std::vector<int> support_set(const Polytope& p, const Vec& u, Scalar tol) {
    if (u.size() != p.dim()) throw PreconditionError("support_set: dimension mismatch");
    const Scalar norm = u.norm();
    if (!(norm > 0.0)) throw PreconditionError("support_set: zero direction");
    const Vec values = p.vertices().transpose() * u;
    const Scalar h = values.maxCoeff();
    std::vector<int> out;
    for (int i = 0; i < p.size(); ++i)
        if (values[i] >= h - tol * norm) out.push_back(i);
    return out;
}

Polytope project(const Polytope& p, const Subspace& s) {
    if (s.ambient() != p.dim()) throw PreconditionError("project: dimension mismatch");
    return Polytope(s.basis().transpose() * p.vertices());
}

Polytope hyperplane_shadow(const Polytope& p, const Vec& u) {
    if (u.size() != p.dim()) throw PreconditionError("hyperplane_shadow: dimension mismatch");
    return project(p, orthogonal_complement(u));
}

Polytope linear_image(const Polytope& p, const Matrix& m) {
    if (m.cols() != p.dim()) throw PreconditionError("linear_image: shape mismatch");
    return Polytope(m * p.vertices());
}

namespace {
Matrix centered(const Polytope& p, Vec& centroid) {
    centroid = p.vertices().rowwise().mean();
    return p.vertices().colwise() - centroid;
}
}  // namespace

int affine_dim(const Polytope& p, Scalar tol) {
    return affine_hull(p, tol).dim();
}

Flat affine_hull(const Polytope& p, Scalar tol) {
    Flat f;
    const Matrix d = centered(p, f.origin);
    if (p.size() == 1) {
        f.basis = Matrix(p.dim(), 0);
        return f;
    }
    const Eigen::JacobiSVD<Matrix> svd(d, Eigen::ComputeThinU);
    const Vec& sv = svd.singularValues();
    const Scalar threshold = tol * std::max<Scalar>(1.0, sv.size() > 0 ? sv[0] : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > threshold) ++rank;
    f.basis = svd.matrixU().leftCols(rank);
    return f;
}

Scalar diameter(const Polytope& p) {
    Scalar best = 0.0;
    for (int i = 0; i < p.size(); ++i)
        for (int j = i + 1; j < p.size(); ++j)
            best = std::max(best, (p.vertices().col(i) - p.vertices().col(j)).squaredNorm());
    return std::sqrt(best);
}

namespace {

/// min |x - sum_j lambda_j v_j|_1 over convex weights, as an LP over the given columns.
Scalar l1_distance_to_hull(const Matrix& cols, const Vec& x) {
    const auto n = cols.rows();
    const auto m = cols.cols();
    // variables: lambda (m), s_plus (n), s_minus (n)
    lp::LpProblem prob;
    prob.A = Matrix::Zero(n + 1, m + 2 * n);
    prob.A.topLeftCorner(n, m) = cols;
    prob.A.block(0, m, n, n).setIdentity();
    prob.A.block(0, m + n, n, n) = -Matrix::Identity(n, n);
    prob.A.block(n, 0, 1, m).setOnes();
    prob.b = Vec::Zero(n + 1);
    prob.b.head(n) = x;
    prob.b[n] = 1.0;
    prob.c = Vec::Zero(m + 2 * n);
    prob.c.tail(2 * n).setConstant(-1.0);
    prob.nonneg.assign(static_cast<std::size_t>(m + 2 * n), true);
    const lp::LpOutcome out = lp::solve(prob);
    if (out.status != lp::LpStatus::optimal) throw NumericalError("hull distance LP did not reach optimum");
    return std::max<Scalar>(0.0, -*out.objective);
}

}  // namespace

Scalar hull_distance(const Polytope& p, const Vec& x) {
    if (x.size() != p.dim()) throw PreconditionError("hull_distance: dimension mismatch");
    return l1_distance_to_hull(p.vertices(), x);
}

bool contains_point(const Polytope& p, const Vec& x, Scalar tol) { return hull_distance(p, x) <= tol; }

Polytope canonicalize(const Polytope& p, Scalar tol) {
    std::vector<int> keep(static_cast<std::size_t>(p.size()));
    std::iota(keep.begin(), keep.end(), 0);
    // sequential removal is safe: dropping a non-extreme point leaves the hull unchanged
    for (int i = 0; i < p.size() && keep.size() > 1; ++i) {
        std::vector<int> others;
        others.reserve(keep.size());
        for (int k : keep)
            if (k != i) others.push_back(k);
        Matrix cols(p.dim(), static_cast<Eigen::Index>(others.size()));
        for (std::size_t k = 0; k < others.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = p.vertices().col(others[k]);
        if (l1_distance_to_hull(cols, p.vertices().col(i)) <= tol) keep = std::move(others);
    }
    return p.subset(keep).with_canonical_flag(true);
}

namespace {

/// Indices of the planar hull vertices (monotone chain, collinear points dropped).
std::vector<int> hull_indices_2d(const std::vector<Eigen::Vector2d>& pts) {
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && pts[a].y() < pts[b].y());
    });
    const auto cross = [&](int o, int a, int b) {
        return (pts[a] - pts[o]).x() * (pts[b] - pts[o]).y() - (pts[a] - pts[o]).y() * (pts[b] - pts[o]).x();
    };
    std::vector<int> hull(2 * order.size());
    std::size_t k = 0;
    for (int i : order) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], i) <= 0) --k;
        hull[k++] = i;
    }
    for (std::size_t i = order.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], order[i]) <= 0) --k;
        hull[k++] = order[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

std::optional<std::pair<Vec, Scalar>> exposing_direction(const Polytope& p, const std::vector<int>& face,
                                                         Scalar tol) {
    if (face.empty()) throw PreconditionError("exposing_direction: empty face");
    const int n = p.dim();
    const int m = p.size();
    std::vector<bool> in_face(static_cast<std::size_t>(m), false);
    for (int i : face) {
        if (i < 0 || i >= m) throw PreconditionError("exposing_direction: index out of range");
        in_face[i] = true;
    }
    const Vec anchor = p.vertex(face.front());
    std::vector<int> outside;
    for (int k = 0; k < m; ++k)
        if (!in_face[k]) outside.push_back(k);
    const int eq_rows = static_cast<int>(face.size()) - 1;
    const int out_rows = static_cast<int>(outside.size());

    // variables: u (n, free), delta (free), s_k (outside, >= 0), box slacks (2n, >= 0)
    const int nv = n + 1 + out_rows + 2 * n;
    const int nr = eq_rows + out_rows + 2 * n;
    lp::LpProblem prob;
    prob.A = Matrix::Zero(nr, nv);
    prob.b = Vec::Zero(nr);
    prob.c = Vec::Zero(nv);
    prob.c[n] = 1.0;
    prob.nonneg.assign(static_cast<std::size_t>(nv), true);
    for (int j = 0; j <= n; ++j) prob.nonneg[j] = false;

    int row = 0;
    for (std::size_t k = 1; k < face.size(); ++k, ++row)
        prob.A.block(row, 0, 1, n) = (p.vertex(face[k]) - anchor).transpose();
    for (int k = 0; k < out_rows; ++k, ++row) {
        prob.A.block(row, 0, 1, n) = (anchor - p.vertex(outside[k])).transpose();
        prob.A(row, n) = -1.0;
        prob.A(row, n + 1 + k) = -1.0;
    }
    for (int l = 0; l < n; ++l) {
        prob.A(row, l) = 1.0;
        prob.A(row, n + 1 + out_rows + l) = 1.0;
        prob.b[row++] = 1.0;
        prob.A(row, l) = -1.0;
        prob.A(row, n + 1 + out_rows + n + l) = 1.0;
        prob.b[row++] = 1.0;
    }
    const lp::LpOutcome out = lp::solve(prob);
    if (out.status == lp::LpStatus::unbounded) {
        // every vertex is in the face: any admissible u works
        return std::make_pair(Vec(Vec::Zero(n)), std::numeric_limits<Scalar>::infinity());
    }
    if (out.status != lp::LpStatus::optimal) return std::nullopt;
    const Scalar margin = (*out.z)[n];
    if (margin <= tol) return std::nullopt;
    return std::make_pair(Vec(out.z->head(n)), margin);
}

std::vector<std::pair<int, int>> edges(const Polytope& p, Scalar tol) {
    if (!p.canonical()) throw PreconditionError("edges: non-canonical input");
    if (affine_dim(p) != 3 || p.dim() != 3) throw PreconditionError("edges: requires a full-dimensional 3-polytope");
    const int m = p.size();
    // candidates: the edges at vertex i are extreme rays of the cone spanned by
    // x_k - x_i; a central projection along the exposing direction of i turns
    // them into vertices of a planar hull
    std::vector<std::vector<bool>> candidate(static_cast<std::size_t>(m), std::vector<bool>(m, false));
    for (int i = 0; i < m; ++i) {
        const auto exposed = exposing_direction(p, {i}, tol);
        bool all = !exposed;
        std::vector<int> ids;
        std::vector<Eigen::Vector2d> pts;
        if (exposed) {
            const Vec u = exposed->first.normalized();
            const Subspace frame = orthogonal_complement(u);
            for (int k = 0; k < m && !all; ++k) {
                if (k == i) continue;
                const Vec d = p.vertex(k) - p.vertex(i);
                const Scalar depth = -u.dot(d);
                if (depth <= tol * d.norm()) {
                    all = true;
                    break;
                }
                const Vec w = frame.coords(d) / depth;
                ids.push_back(k);
                pts.emplace_back(w[0], w[1]);
            }
        }
        if (all || ids.size() < 3) {
            for (int k = 0; k < m; ++k) candidate[i][k] = candidate[k][i] = k != i;
            continue;
        }
        for (int h : hull_indices_2d(pts)) candidate[i][ids[h]] = candidate[ids[h]][i] = true;
    }
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (candidate[i][j] && exposing_direction(p, {i, j}, tol)) out.emplace_back(i, j);
    return out;
}

SimplexFacets simplex_facets(const Polytope& s) {
    const int n = s.dim();
    if (s.size() != n + 1) throw PreconditionError("simplex_facets: need exactly n+1 vertices");
    SimplexFacets f{Matrix(n, n + 1), Vec(n + 1)};
    for (int i = 0; i <= n; ++i) {
        const int ref = (i == 0) ? 1 : 0;
        Vec u;
        if (n == 1) {
            u = Vec::Ones(1);
        } else {
            Matrix diffs(n - 1, n);
            int r = 0;
            for (int k = 0; k <= n; ++k) {
                if (k == i || k == ref) continue;
                diffs.row(r++) = (s.vertex(k) - s.vertex(ref)).transpose();
            }
            const Eigen::JacobiSVD<Matrix> svd(diffs, Eigen::ComputeFullV);
            u = svd.matrixV().col(n - 1);
        }
        const Scalar side = u.dot(s.vertex(i) - s.vertex(ref));
        if (std::abs(side) < 1e-12 * std::max<Scalar>(1.0, diameter(s)))
            throw PreconditionError("simplex_facets: degenerate simplex");
        if (side > 0.0) u = -u;
        f.normals.col(i) = u.normalized();
        f.offsets[i] = f.normals.col(i).dot(s.vertex(ref));
    }
    return f;
}

std::vector<Vec> convex_hull_2d(const Polytope& p) {
    if (p.dim() != 2) throw PreconditionError("convex_hull_2d: planar input required");
    std::vector<Vec> pts;
    for (int i = 0; i < p.size(); ++i) pts.push_back(p.vertex(i));
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    if (pts.size() < 3) return pts;
    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Vec> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace polycover
