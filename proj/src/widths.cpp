#include "polycover/widths.hpp"

#include "polycover/containment.hpp"

#include <cmath>
#include <numeric>

namespace polycover {

namespace {

constexpr Scalar kPi = 3.14159265358979323846;

Scalar perimeter_width(const Polytope& k) {
    const std::vector<Vec> hull = convex_hull_2d(k);
    Scalar perimeter = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) perimeter += (hull[(i + 1) % hull.size()] - hull[i]).norm();
    return perimeter / kPi;
}

/// Exterior dihedral angle at edge (i, j): length of the arc of outward unit
/// normals in the plane orthogonal to the edge.
Scalar exterior_angle(const Polytope& k, int i, int j, const Tolerances& tol) {
    const auto exposed = exposing_direction(k, {i, j}, tol.geom);
    if (!exposed) throw NumericalError("mean_width_exact: edge lost its exposing direction");
    const Vec xi = k.vertex(i);
    const Eigen::Vector3d e = (k.vertex(j) - xi).normalized();
    Eigen::Vector3d b1 = exposed->first;
    b1 -= b1.dot(e) * e;
    b1.normalize();
    const Eigen::Vector3d b2 = e.cross(b1);

    // b1 is strictly exposing, so every other vertex has phi outside [-pi/2, pi/2]
    Scalar lower = -kPi;
    Scalar upper = kPi;
    for (int v = 0; v < k.size(); ++v) {
        if (v == i || v == j) continue;
        const Vec w = k.vertex(v) - xi;
        const Scalar alpha = w.dot(b1);
        const Scalar beta = w.dot(b2);
        if (std::hypot(alpha, beta) <= tol.feas) continue;
        const Scalar phi = std::atan2(beta, alpha);
        // w.u(theta) = r cos(theta - phi) <= 0 on theta in [phi + pi/2, phi + 3pi/2] mod 2pi
        if (phi >= 0.0) {
            lower = std::max(lower, phi - 1.5 * kPi);
            upper = std::min(upper, phi - kPi / 2);
        } else {
            lower = std::max(lower, phi + kPi / 2);
            upper = std::min(upper, phi + 1.5 * kPi);
        }
    }
    return std::max<Scalar>(0.0, upper - lower);
}

}  // namespace

Scalar unit_ball_volume(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return kPi;
        case 3: return 4.0 * kPi / 3.0;
        case 4: return kPi * kPi / 2.0;
        default: throw PreconditionError("unit_ball_volume: tabulated for n = 1..4");
    }
}

WidthEstimate mean_width_mc(const Polytope& k, int samples, Rng& rng) {
    if (samples < 1000) throw PreconditionError("mean_width_mc: at least 1000 samples");
    const int n = k.dim();
    Scalar sum = 0.0;
    Scalar sum_sq = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Scalar w = 2.0 * support(k, random_unit(n, rng));
        sum += w;
        sum_sq += w * w;
    }
    WidthEstimate r;
    r.samples = samples;
    r.value = sum / samples;
    const Scalar var = std::max<Scalar>(0.0, (sum_sq - samples * r.value * r.value) / (samples - 1));
    r.std_error = std::sqrt(var / samples);
    return r;
}

Scalar mean_width_exact(const Polytope& k, const Tolerances& tol) {
    const int n = k.dim();
    if (n != 2 && n != 3) throw PreconditionError("mean_width_exact: closed forms exist for n = 2, 3 only");
    if (affine_dim(k, tol.feas) != n) throw PreconditionError("mean_width_exact: K must be full-dimensional");
    if (n == 2) return perimeter_width(k);

    const Polytope kc = k.canonical() ? k : canonicalize(k, tol.geom);
    Scalar sum = 0.0;
    for (const auto& [i, j] : edges(kc, tol.geom))
        sum += (kc.vertex(j) - kc.vertex(i)).norm() * exterior_angle(kc, i, j, tol);
    return sum / (4.0 * kPi);
}

KubotaReport kubota_check(const Polytope& k, int samples, Rng& rng, const Tolerances& tol) {
    if (k.dim() != 3) throw PreconditionError("kubota_check: K must lie in R^3");
    if (samples < 2) throw PreconditionError("kubota_check: at least 2 samples");
    KubotaReport r;
    r.samples = samples;
    r.exact = mean_width_exact(k, tol);
    std::vector<Scalar> widths;
    widths.reserve(samples);
    for (int i = 0; i < samples; ++i) widths.push_back(perimeter_width(project(k, haar_subspace(3, 2, rng))));
    r.shadow_mean = std::accumulate(widths.begin(), widths.end(), 0.0) / samples;
    Scalar ss = 0.0;
    for (Scalar w : widths) ss += (w - r.shadow_mean) * (w - r.shadow_mean);
    r.std_error = std::sqrt(ss / (samples - 1) / samples);
    r.relative_error = std::abs(r.shadow_mean - r.exact) / r.exact;
    return r;
}

CorollaryReport corollary_checks(const Polytope& k, const Polytope& l, int d, int samples, const Tolerances& tol) {
    const int n = k.dim();
    if (l.dim() != n) throw PreconditionError("corollary_checks: ambient dimensions differ");
    if (d < 2 || d > n) throw PreconditionError("corollary_checks: need 2 <= d <= n");
    if (samples < 1) throw PreconditionError("corollary_checks: samples must be positive");

    const Polytope kc = canonicalize(k, tol.geom);
    CorollaryReport r;
    r.diameter_k = diameter(kc);
    r.diameter_l = diameter(l);
    const TranslateFit fit = translate_fits(kc, l, tol);

    // d-shadows cover iff every (d+1)-subset fits
    const bool shadows_cover = !subset_witness(kc, l, d + 1, tol).has_value();
    const bool same_diameter =
        std::abs(r.diameter_k - r.diameter_l) <= tol.geom * std::max<Scalar>(1.0, r.diameter_l);
    r.diameter.applicable = shadows_cover && same_diameter;
    r.diameter.holds = fit.fits;
    r.diameter.note = !shadows_cover ? "some d-shadow does not fit" : !same_diameter ? "diameters differ" : "";

    const bool triangles_cover = d == 2 ? shadows_cover : !subset_witness(kc, l, 3, tol).has_value();
    if ((n != 2 && n != 3) || affine_dim(kc, tol.feas) != n || affine_dim(l, tol.feas) != n) {
        r.mean_width.note = "mean width needs full-dimensional bodies in R^2 or R^3";
        return r;
    }
    r.width_k = mean_width_exact(kc, tol);
    r.width_l = mean_width_exact(l, tol);
    const bool same_width = std::abs(r.width_k - r.width_l) <= tol.geom * std::max<Scalar>(1.0, r.width_l);
    r.mean_width.applicable = triangles_cover && same_width;
    r.mean_width.numeric = true;
    r.mean_width.note = !triangles_cover ? "some triangle does not fit" : !same_width ? "mean widths differ" : "";
    if (!r.mean_width.applicable) return r;

    // translates: scale fits of 1 both ways and h_L = h_K + v.u on a direction set
    const FitResult kl = scale_fit(kc, l);
    const FitResult lk = scale_fit(l, kc);
    const Scalar band = 10.0 * tol.geom;
    bool translates = std::abs(kl.sigma - 1.0) <= band && std::abs(lk.sigma - 1.0) <= band;
    if (translates) {
        const Vec v = fit.witness ? *fit.witness : kl.translation;
        std::vector<Vec> dirs;
        if (n == 2 || n == 3) {
            dirs = direction_grid(n, std::max(samples, 4));
        } else {
            Rng rng(0);
            for (int i = 0; i < samples; ++i) dirs.push_back(random_unit(n, rng));
        }
        const Scalar scale = std::max<Scalar>(1.0, r.diameter_l);
        for (const Vec& u : dirs)
            if (std::abs(support(kc, u) + v.dot(u) - support(l, u)) > band * scale) translates = false;
    }
    r.mean_width.holds = translates;
    return r;
}

}  // namespace polycover
