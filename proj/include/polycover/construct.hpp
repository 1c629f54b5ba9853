#pragma once

#include "polycover/bodies.hpp"
#include "polycover/containment.hpp"
#include "polycover/shadows.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace polycover {

/// n+1 regular unit normals of K at distinct vertices whose positive
/// combination vanishes: sum_i coefficients[i] * normals.col(i) = 0.
struct NormalSelection {
    Matrix normals;                  ///< n x (n+1), unit columns
    std::vector<int> touch_indices;  ///< vertex of K exposed by each normal
    Vec coefficients;                ///< positive, summing to 1
};

/// Raised when the restart budget of the normal selection is used up.
class SelectionFailed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// True when every invariant of the selection holds for K.
bool selection_valid(const Polytope& k, const NormalSelection& sel, const Tolerances& tol = {});

/// Builds a selection from given normals: touch indices from the support
/// sets, coefficients from the interior-origin LP. Throws PreconditionError
/// when the normals are not regular, share a vertex, or do not surround the origin.
NormalSelection make_selection(const Polytope& k, const Matrix& normals, const Tolerances& tol = {});

/// Randomized selection: n regular normals at fresh vertices, then a last one
/// drawn from -C intersected with the polar of C (C = spherical hull of the
/// first n). Accepted once the LP margin of the origin inside their hull
/// exceeds tol.geom.
///
/// K must be a canonical full-dimensional polytope; `allow_flat` lifts the
/// dimension requirement (used for lower-dimensional bodies with at least
/// n+1 vertices, where sampled normals carry the off-flat tilt).
NormalSelection select_regular_normals(const Polytope& k, Rng& rng, int restarts = 50,
                                       const Tolerances& tol = {}, bool allow_flat = false);

/// The simplex {x : u_i.x <= h_K(u_i)} in vertex form.
Polytope circumscribe_simplex(const Polytope& k, const NormalSelection& sel);

/// Each facet of S meets K in exactly one vertex, and that vertex stays at
/// least tol.geom inside every other facet. Requires K inside S.
bool verify_touching(const Polytope& k, const Polytope& s, const Tolerances& tol = {});

struct EpsilonGap {
    Scalar epsilon = 0.0;       ///< min of sampled and refined values
    Scalar sampled_min = 0.0;
    int directions = 0;
    Vec argmin_direction;       ///< sampled direction with the smallest sigma
    std::vector<Scalar> sigmas;  ///< per-direction sigma of (K_u, S_u)
};

/// Sampled infimum over hyperplane directions of sigma(K_u, S_u), refined by
/// local descent from the `refine_starts` smallest samples.
EpsilonGap epsilon_gap(const Polytope& k, const Polytope& s, const std::vector<Vec>& directions,
                       const Tolerances& tol = {}, int refine_starts = 5, int refine_steps = 80,
                       std::uint64_t seed = 0);

struct CounterexampleOptions {
    std::uint64_t seed = 0;
    int restarts = 50;
    int directions = 2000;    ///< epsilon-gap sweep size
    int sweep_samples = 1000;  ///< final shadow sweep size
    int refine_starts = 5;
    int refine_steps = 80;
    int flat_checks = 200;     ///< ambient subspaces for the lifted case
};

struct CounterexampleChecks {
    bool touching = false;
    bool maximal = false;         ///< sigma(K, S) = 1 within 10 tol.geom
    bool epsilon_above_one = false;
    bool no_translate = false;    ///< translate_fits(eps K, S) is false
    bool farkas_certified = false;
    bool shadows_cover = false;   ///< sweep of (eps K, S) at d covers
    bool flat_lift = true;        ///< every flat_lift_check passed (lifted case only)
    int flat_lift_runs = 0;

    bool all() const {
        return touching && maximal && epsilon_above_one && no_translate && farkas_certified && shadows_cover &&
               flat_lift;
    }
};

/// S covers every d-shadow of epsilon K while no translate of epsilon K fits
/// in S. The scaled body is taken about the centroid of K's vertices.
struct Counterexample {
    Polytope body;
    Polytope cover;
    Scalar epsilon = 0.0;          ///< certified factor, halfway between 1 and the gap
    Scalar epsilon_gap = 0.0;      ///< sampled and refined gap
    Scalar scale_sigma = 0.0;      ///< sigma(K, S)
    Scalar sweep_min_sigma = 0.0;  ///< min sigma of the final (eps K, S) sweep
    int d = 0;
    std::uint64_t seed = 0;
    int sweep_samples = 0;
    int attempts = 0;
    bool lifted = false;
    std::vector<Vec> log_directions;
    std::vector<Scalar> log_sigmas;
    NormalSelection certificate;
    CounterexampleChecks checks;
};

/// Homothety of K by eps about the centroid of its vertices.
Polytope scale_about_centroid(const Polytope& k, Scalar eps);

/// Full-dimensional K with at least n+1 vertices.
Counterexample build_counterexample(const Polytope& k, const CounterexampleOptions& opt = {},
                                    const Tolerances& tol = {});

/// K with at least d+2 vertices, 1 <= d <= n-1. Lower-dimensional K is
/// handled inside a flat of dimension max(dim K, d+1) and lifted back.
Counterexample build_counterexample_d(const Polytope& k, int d, const CounterexampleOptions& opt = {},
                                      const Tolerances& tol = {});

/// Regular tetrahedron conv{(1,1,1),(1,-1,-1),(-1,1,-1),(-1,-1,1)} and the
/// planar quadrilateral cut from it by z = 0: for each facet, the midpoint of
/// the segment in which the facet meets the plane.
std::pair<Polytope, Polytope> canonical_tetra_quad();

}  // namespace polycover
