#pragma once

#include "polycover/bodies.hpp"
#include "polycover/lp.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace polycover {

enum class FitStatus { ok, degenerate };

/// Largest homothety factor sigma with sigma K + v inside L, plus the witness v.
/// `degenerate` marks an unbounded LP (K is a single point); sigma is then +inf.
struct FitResult {
    Scalar sigma = 0.0;
    Vec translation;
    FitStatus status = FitStatus::ok;
};

/// sigma(K, L) from the LP  max t  s.t.  t x_i + v = sum_j lambda_ij y_j,
/// sum_j lambda_ij = 1, lambda >= 0. K fits in L by translation iff sigma >= 1 - tol.
FitResult scale_fit(const Polytope& k, const Polytope& l);

/// Feasibility LP for K + v inside L (t fixed at 1); the outcome carries either
/// the witness (z = (v, lambda)) or a Farkas certificate.
lp::LpOutcome fixed_translation_lp(const Polytope& k, const Polytope& l, lp::LpProblem* problem = nullptr);

struct TranslateFit {
    bool fits = false;
    Scalar sigma = 0.0;
    FitStatus status = FitStatus::ok;
    std::optional<Vec> witness;  ///< v with K + v inside L (t = 1 feasibility LP)
    std::optional<Vec> farkas;   ///< certificate that no such v exists
    bool certified = false;      ///< witness or farkas present and checked
};

/// Verdict at sigma >= 1 - tol.geom; witness/certificate from the t = 1 LP.
TranslateFit translate_fits(const Polytope& k, const Polytope& l, const Tolerances& tol = {});

/// First k-subset (lexicographic) of K's canonical vertices whose hull does not
/// translate into L, or nullopt when all of them fit. k is clamped to |K|.
std::optional<std::vector<int>> subset_witness(const Polytope& k_body, const Polytope& l, int k,
                                               const Tolerances& tol = {});

/// Minimum of sigma(conv S, L) over k-subsets S of K's vertices, with its argmin.
struct SubsetMin {
    Scalar sigma = std::numeric_limits<Scalar>::infinity();
    std::vector<int> subset;
};
SubsetMin min_subset_sigma(const Polytope& k_body, const Polytope& l, int k);

/// Both sides of the inscribed-polytope equivalence for one pair.
struct EquivalenceReport {
    bool subset_side_fits = false;  ///< no failing k-subset
    bool translate_side_fits = false;
    bool agrees = false;
    bool borderline = false;  ///< |sigma - 1| <= 10 tol.geom; excluded from statistics
    bool hard_failure = false;
    Scalar sigma = 0.0;
    std::optional<std::vector<int>> witness;
};
EquivalenceReport inscribed_equivalence_check(const Polytope& k_body, const Polytope& l, int k,
                                              const Tolerances& tol = {});

/// Heuristic search for an n-simplex D containing L with sigma(K, D) < 1.
/// Requires that K does not translate into L. A nullopt result is "not found",
/// not a disproof.
struct SimplexWitness {
    Polytope simplex;
    Scalar sigma;
    int attempts;
};
std::optional<SimplexWitness> circumscribing_simplex_witness(const Polytope& k, const Polytope& l, int restarts,
                                                             Rng& rng, const Tolerances& tol = {});

/// Vertices of {x : u_i . x <= h_i} for n+1 normals (columns of `normals`)
/// whose conic hull is all of R^n: vertex j solves the n x n system that
/// drops constraint j. Throws NumericalError when a system's condition
/// estimate exceeds 1e12.
Polytope simplex_from_normals(const Matrix& normals, const Vec& offsets);

/// max delta  s.t.  sum a_i u_i = 0, sum a_i = 1, a_i >= delta. Returns (delta, a).
std::pair<Scalar, Vec> origin_interior_margin(const Matrix& directions);

}  // namespace polycover
