#pragma once

#include "polycover/core.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace polycover {

/// A convex polytope in R^n given as the convex hull of a finite vertex list
/// (stored column-wise, n x m). The list may contain redundant points unless
/// the polytope came out of canonicalize().
class Polytope {
public:
    /// Empty placeholder (0 x 0).
    Polytope() = default;
    explicit Polytope(Matrix vertices);
    static Polytope from_points(const std::vector<Vec>& points);

    int dim() const { return static_cast<int>(v_.rows()); }
    int size() const { return static_cast<int>(v_.cols()); }
    const Matrix& vertices() const { return v_; }
    Vec vertex(int i) const { return v_.col(i); }

    /// Set only by canonicalize() (or by constructions that produce extreme
    /// points by design): no vertex lies in the hull of the others.
    bool canonical() const { return canonical_; }

    Polytope translated(const Vec& w) const;
    /// Homothety about the origin.
    Polytope scaled(Scalar c) const;
    /// Polytope spanned by the listed vertices.
    Polytope subset(const std::vector<int>& indices) const;
    Polytope with_canonical_flag(bool flag) const;

private:
    Matrix v_;
    bool canonical_ = false;
};

/// An affine flat origin + span(basis); basis has orthonormal columns and may
/// have zero columns (a single point).
struct Flat {
    Vec origin;
    Matrix basis;

    int dim() const { return static_cast<int>(basis.cols()); }
    /// Euclidean distance from x to the flat.
    Scalar distance(const Vec& x) const;
    Vec coords(const Vec& x) const { return basis.transpose() * (x - origin); }
    Vec lift(const Vec& w) const { return origin + basis * w; }
};

/// h_P(u) = max over vertices of x.u.
Scalar support(const Polytope& p, const Vec& u);

/// Indices of vertices within tol * |u| of h_P(u). A singleton certifies an
/// exposed vertex with u a regular normal.
std::vector<int> support_set(const Polytope& p, const Vec& u, Scalar tol = 1e-6);

/// Orthogonal projection, expressed in the coordinates of s's basis (R^d).
Polytope project(const Polytope& p, const Subspace& s);

/// Projection onto u^perp using orthogonal_complement(u) as the frame.
Polytope hyperplane_shadow(const Polytope& p, const Vec& u);

/// Image under the linear map m (n' x n). Rank-deficient maps are allowed.
Polytope linear_image(const Polytope& p, const Matrix& m);

/// Dimension of the affine hull.
int affine_dim(const Polytope& p, Scalar tol = 1e-9);

/// Affine hull as a Flat through the vertex centroid.
Flat affine_hull(const Polytope& p, Scalar tol = 1e-9);

Scalar diameter(const Polytope& p);

/// L1 distance from x to p, from a small LP (0 when x lies in p).
Scalar hull_distance(const Polytope& p, const Vec& x);
bool contains_point(const Polytope& p, const Vec& x, Scalar tol = 1e-6);

/// Drops vertices that lie (within tol, L1) in the hull of the remaining ones.
/// The result keeps the original relative order and has canonical() set.
Polytope canonicalize(const Polytope& p, Scalar tol = 1e-6);

/// Direction u (box-normalized, |u_i| <= 1) maximizing the margin by which
/// the face exposed by u equals exactly the given vertex set. Returns the
/// direction and margin when the margin exceeds tol, nullopt otherwise.
std::optional<std::pair<Vec, Scalar>> exposing_direction(const Polytope& p,
                                                         const std::vector<int>& face,
                                                         Scalar tol = 1e-6);

/// 1-skeleton of a canonical 3-polytope: pairs (i, j), i < j, exposed as a face.
std::vector<std::pair<int, int>> edges(const Polytope& p, Scalar tol = 1e-6);

/// Outward facet normals and offsets of an n-simplex given by its n+1
/// vertices: facet i is opposite vertex i and is {x : normals.col(i).x = offsets[i]}.
struct SimplexFacets {
    Matrix normals;
    Vec offsets;
};
SimplexFacets simplex_facets(const Polytope& simplex);

/// Counter-clockwise convex hull of planar points (Andrew's monotone chain).
std::vector<Vec> convex_hull_2d(const Polytope& p);

}  // namespace polycover
