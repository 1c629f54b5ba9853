#pragma once

#include "polycover/bodies.hpp"
#include "polycover/containment.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace polycover {

enum class Verdict { covers, fails, borderline };
std::string to_string(Verdict v);

/// fails below 1 - band, borderline within +-band of 1, covers above.
Verdict classify(Scalar sigma, Scalar band);

/// sigma(K_S, L_S) for the orthogonal projections onto S.
FitResult shadow_fit(const Polytope& k, const Polytope& l, const Subspace& s);

enum class SamplerKind { automatic, grid, haar };

/// `automatic` uses the deterministic direction grid for hyperplane shadows in
/// R^2 / R^3 and Haar samples otherwise.
struct Sampler {
    SamplerKind kind = SamplerKind::automatic;
    std::uint64_t seed = 0;
};

/// The subspaces a sweep visits, in order.
std::vector<Subspace> sample_subspaces(int n, int d, const Sampler& sampler, int count);
std::string sampler_name(int n, int d, const Sampler& sampler);

struct ShadowReport {
    int d = 0;
    int samples = 0;
    std::string sampler;
    Scalar min_sigma = 0.0;
    Subspace argmin;
    int argmin_index = 0;
    Verdict verdict = Verdict::covers;
    int borderline_count = 0;
    std::vector<Scalar> sigmas;  ///< sample log, one entry per visited subspace
};

/// Evaluates shadow_fit over `count` sampled d-subspaces. Verdict is `fails`
/// iff some sigma < 1 - tol.geom; samples within tol.geom of 1 are counted as
/// borderline. A `covers` verdict only speaks for the visited samples.
ShadowReport shadow_sweep(const Polytope& k, const Polytope& l, int d, const Sampler& sampler, int count,
                          const Tolerances& tol = {});

/// Local random descent of sigma over G(n,d): tangent perturbations of the
/// basis, accepted only on decrease, step halved after repeated rejections.
/// The returned sigma never exceeds the starting one.
std::pair<Subspace, Scalar> refine_min_margin(const Polytope& k, const Polytope& l, const Subspace& start, int steps,
                                              Rng& rng);

/// Sweep followed by refinement from the `starts` smallest samples; the
/// verdict is recomputed from the refined minimum.
struct RefinedSweep {
    ShadowReport sweep;
    Scalar refined_sigma = 0.0;
    Subspace refined_argmin;
    Verdict verdict = Verdict::covers;
};
RefinedSweep shadow_sweep_refined(const Polytope& k, const Polytope& l, int d, const Sampler& sampler, int count,
                                  int starts, int steps, const Tolerances& tol = {});

/// Finite decision for simplex targets: Q (at most n canonical vertices)
/// translates into the n-simplex T iff every hyperplane shadow along an edge
/// direction of T fits.
struct EdgeCriterion {
    bool holds = true;
    Scalar min_sigma = std::numeric_limits<Scalar>::infinity();
    Vec worst_direction;
    int directions = 0;
};
EdgeCriterion simplex_edge_criterion(const Polytope& q, const Polytope& t, const Tolerances& tol = {});

/// Shadow fit along u for (K, L) against the fit along Mu/|Mu| for (MK, ML).
struct ObliqueReport {
    Scalar sigma = 0.0;        ///< original pair, direction u
    Scalar sigma_image = 0.0;  ///< mapped pair, direction Mu/|Mu|
    Vec image_direction;
    Verdict verdict = Verdict::covers;
    Verdict verdict_image = Verdict::covers;
    bool borderline = false;
    bool agrees = false;
};
ObliqueReport oblique_equivalence_check(const Polytope& k, const Polytope& l, const Matrix& m, const Vec& u,
                                        const Tolerances& tol = {});

/// Covering inside a flat versus covering for an ambient subspace eta.
struct FlatLiftReport {
    int projected_dim = 0;  ///< dimension of eta projected into the flat
    Scalar sigma_in_flat = 0.0;
    Scalar sigma_ambient = 0.0;
    bool hypothesis_holds = false;  ///< in-flat shadow fits
    bool conclusion_holds = false;  ///< ambient shadow fits
    bool replay_holds = false;      ///< in-flat witness translation places K_eta inside L_eta
    bool consistent = false;        ///< hypothesis implies conclusion and replay
};
FlatLiftReport flat_lift_check(const Polytope& k, const Polytope& l, const Flat& flat, const Subspace& eta,
                               const Tolerances& tol = {});

}  // namespace polycover
