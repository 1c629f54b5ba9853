#pragma once

#include "polycover/bodies.hpp"
#include "polycover/containment.hpp"
#include "polycover/shadows.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace polycover {

/// m points on a random ellipsoid centred near the origin; every point is a vertex.
Polytope random_polytope(int n, int m, Rng& rng);

/// n+1 Gaussian points, redrawn until the simplex is well conditioned.
Polytope random_simplex(int n, Rng& rng);

/// Random nonsingular n x n map with condition number at most cond_max.
Matrix random_conditioned_map(int n, Scalar cond_max, Rng& rng);

/// Target sigma drawn from [lo, hi] at distance at least margin from 1.
Scalar draw_target(Rng& rng, Scalar margin, Scalar lo = 0.6, Scalar hi = 1.4);

/// Rescales L about its centroid so that measure(K, L) equals target; valid for
/// any measure that is linear in the size of L (all sigma variants are).
struct Pair {
    Polytope k;
    Polytope l;
    Scalar target = 0.0;
};
Pair rescale_to_target(Polytope k, const Polytope& l, Scalar current, Scalar target);

/// Canonical K, L with sigma(K, L) at least margin away from 1.
Pair inscribed_pair(int n, Rng& rng, Scalar margin);
/// Canonical K, L whose smallest (d+1)-subset sigma is at least margin away from 1.
Pair shadow_pair(int n, int d, Rng& rng, Scalar margin);
/// Pair whose hyperplane-shadow sigma along u is at least margin away from 1.
Pair oblique_pair(int n, const Vec& u, Rng& rng, Scalar margin);

struct InscribedTrial {
    Scalar sigma = 0.0;
    bool subset_fits = false;
    bool translate_fits = false;
    bool borderline = false;
    bool agrees = false;
    bool replay_ok = true;  ///< a returned witness subset has sigma < 1
    std::optional<std::vector<int>> witness;
};
InscribedTrial run_inscribed_trial(const Pair& p, const Tolerances& tol = {});

struct ShadowTrial {
    int d = 0;
    Scalar subset_sigma = 0.0;
    bool subset_fits = false;
    Scalar sweep_min = 0.0;
    Scalar refined_min = 0.0;
    Verdict verdict = Verdict::covers;
    bool agrees = false;
    bool located_failure = false;  ///< refinement found sigma < 1 (failing instances only)
};
ShadowTrial run_shadow_trial(const Pair& p, int d, int samples, int refine_starts, int refine_steps,
                             std::uint64_t seed, const Tolerances& tol = {});

struct SuiteOptions {
    int n = 3;
    int trials = 100;
    std::uint64_t seed = 0;
    int sweep_samples = 1000;
    int refine_starts = 3;
    int refine_steps = 60;
};

struct SuiteRecord {
    int index = 0;
    bool shadow = false;  ///< false: inscribed-subset trial, true: shadow trial
    int d = 0;
    Scalar sigma = 0.0;   ///< translate sigma or smallest subset sigma
    Scalar other = 0.0;   ///< refined sweep minimum for shadow trials
    bool subset_fits = false;
    bool other_fits = false;
    bool borderline = false;
    bool agrees = false;
};

struct SuiteReport {
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    int inscribed_trials = 0;
    int shadow_trials = 0;
    int disagreements = 0;  ///< non-borderline disagreements
    int borderline = 0;
    int replay_failures = 0;
    std::vector<SuiteRecord> records;
};

/// Alternates inscribed-subset trials (margin 1e-4) and shadow trials
/// (margin 0.05, d cycling through 1..n-1). Deterministic in the options.
SuiteReport verify_suite(const SuiteOptions& opt, const Tolerances& tol = {});

}  // namespace polycover
