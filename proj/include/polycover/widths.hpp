#pragma once

#include "polycover/bodies.hpp"

#include <string>

namespace polycover {

/// Volume of the unit n-ball for n = 1..4.
Scalar unit_ball_volume(int n);

struct WidthEstimate {
    Scalar value = 0.0;
    Scalar std_error = 0.0;
    int samples = 0;
};

/// 2 * mean of h_K(u) over N uniform unit vectors. Requires N >= 1000.
WidthEstimate mean_width_mc(const Polytope& k, int samples, Rng& rng);

/// Closed forms: perimeter / pi in the plane, (1 / 4 pi) * sum over edges of
/// length * exterior dihedral angle in space. K must be full-dimensional.
Scalar mean_width_exact(const Polytope& k, const Tolerances& tol = {});

/// Mean width of K against the average mean width of its shadows on N Haar planes.
struct KubotaReport {
    Scalar exact = 0.0;
    Scalar shadow_mean = 0.0;
    Scalar std_error = 0.0;
    Scalar relative_error = 0.0;
    int samples = 0;
};
KubotaReport kubota_check(const Polytope& k, int samples, Rng& rng, const Tolerances& tol = {});

struct CorollaryOutcome {
    bool applicable = false;  ///< hypotheses hold numerically
    bool holds = false;       ///< conclusion confirmed (meaningful only when applicable)
    bool numeric = false;     ///< conclusion certified up to tolerance only
    std::string note;
};

struct CorollaryReport {
    Scalar diameter_k = 0.0;
    Scalar diameter_l = 0.0;
    Scalar width_k = 0.0;
    Scalar width_l = 0.0;
    CorollaryOutcome diameter;    ///< d-shadows cover and equal diameters => K translates into L
    CorollaryOutcome mean_width;  ///< triangles cover and equal mean widths => K, L translates
};

/// Evaluates both corollaries. Instances whose hypotheses fail are reported as
/// not applicable. `samples` sets the direction count for the support-function
/// match. Requires d >= 2; mean widths are exact, so n must be 2 or 3 for the
/// mean-width part to apply.
CorollaryReport corollary_checks(const Polytope& k, const Polytope& l, int d, int samples,
                                 const Tolerances& tol = {});

}  // namespace polycover
