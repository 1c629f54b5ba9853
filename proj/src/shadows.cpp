#include "polycover/shadows.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polycover {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::covers: return "covers";
        case Verdict::fails: return "fails";
        case Verdict::borderline: return "borderline";
    }
    return "unknown";
}

Verdict classify(Scalar sigma, Scalar band) {
    if (sigma < 1.0 - band) return Verdict::fails;
    if (sigma <= 1.0 + band) return Verdict::borderline;
    return Verdict::covers;
}

FitResult shadow_fit(const Polytope& k, const Polytope& l, const Subspace& s) {
    if (k.dim() != l.dim()) throw PreconditionError("shadow_fit: ambient dimensions differ");
    return scale_fit(project(k, s), project(l, s));
}

namespace {
bool use_grid(int n, int d, const Sampler& sampler) {
    switch (sampler.kind) {
        case SamplerKind::grid:
            if (d != n - 1) throw PreconditionError("grid sampler only covers hyperplane shadows (d = n-1)");
            return true;
        case SamplerKind::haar: return false;
        case SamplerKind::automatic: return d == n - 1 && (n == 2 || n == 3);
    }
    return false;
}
}  // namespace

std::string sampler_name(int n, int d, const Sampler& sampler) {
    return use_grid(n, d, sampler) ? "grid" : "haar";
}

std::vector<Subspace> sample_subspaces(int n, int d, const Sampler& sampler, int count) {
    if (d < 1 || d >= n) throw PreconditionError("shadow dimension must satisfy 1 <= d < n");
    if (count < 1) throw PreconditionError("sample count must be positive");
    std::vector<Subspace> out;
    out.reserve(count);
    if (use_grid(n, d, sampler)) {
        for (const Vec& u : direction_grid(n, std::max(count, 4))) out.push_back(orthogonal_complement(u));
        out.resize(count);
        return out;
    }
    Rng rng(sampler.seed);
    for (int i = 0; i < count; ++i) out.push_back(haar_subspace(n, d, rng));
    return out;
}

ShadowReport shadow_sweep(const Polytope& k, const Polytope& l, int d, const Sampler& sampler, int count,
                          const Tolerances& tol) {
    const int n = k.dim();
    const std::vector<Subspace> subspaces = sample_subspaces(n, d, sampler, count);
    const std::function<Scalar(int)> eval = [&](int i) { return shadow_fit(k, l, subspaces[i]).sigma; };
    ShadowReport r;
    r.d = d;
    r.samples = count;
    r.sampler = sampler_name(n, d, sampler);
    r.sigmas = parallel_map<Scalar>(count, default_workers(), eval);

    r.argmin_index = static_cast<int>(std::min_element(r.sigmas.begin(), r.sigmas.end()) - r.sigmas.begin());
    r.min_sigma = r.sigmas[r.argmin_index];
    r.argmin = subspaces[r.argmin_index];
    for (Scalar s : r.sigmas)
        if (std::abs(s - 1.0) <= tol.geom) ++r.borderline_count;
    r.verdict = r.min_sigma < 1.0 - tol.geom ? Verdict::fails : Verdict::covers;
    return r;
}

std::pair<Subspace, Scalar> refine_min_margin(const Polytope& k, const Polytope& l, const Subspace& start, int steps,
                                              Rng& rng) {
    const int n = start.ambient();
    const int d = start.dim();
    std::normal_distribution<Scalar> gauss(0.0, 1.0);
    Subspace cur = start;
    Scalar cur_sigma = shadow_fit(k, l, cur).sigma;
    Scalar step = 0.2;
    int rejected = 0;
    for (int s = 0; s < steps; ++s) {
        Matrix g(n, d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
        // tangent direction at cur on the Grassmannian
        g -= cur.basis() * (cur.basis().transpose() * g);
        Subspace cand;
        try {
            cand = orthonormalize(cur.basis() + step * g);
        } catch (const PreconditionError&) {
            continue;
        }
        const Scalar sigma = shadow_fit(k, l, cand).sigma;
        if (sigma < cur_sigma) {
            cur = std::move(cand);
            cur_sigma = sigma;
            rejected = 0;
        } else if (++rejected >= 4) {
            step = std::max(step * 0.5, 1e-7);
            rejected = 0;
        }
    }
    return {cur, cur_sigma};
}

RefinedSweep shadow_sweep_refined(const Polytope& k, const Polytope& l, int d, const Sampler& sampler, int count,
                                  int starts, int steps, const Tolerances& tol) {
    RefinedSweep r;
    r.sweep = shadow_sweep(k, l, d, sampler, count, tol);
    r.refined_sigma = r.sweep.min_sigma;
    r.refined_argmin = r.sweep.argmin;

    const std::vector<Subspace> subspaces = sample_subspaces(k.dim(), d, sampler, count);
    std::vector<int> order(r.sweep.sigmas.size());
    std::iota(order.begin(), order.end(), 0);
    const int take = std::min<int>(starts, static_cast<int>(order.size()));
    std::partial_sort(order.begin(), order.begin() + take, order.end(),
                      [&](int a, int b) { return r.sweep.sigmas[a] < r.sweep.sigmas[b]; });
    for (int s = 0; s < take; ++s) {
        Rng rng(sampler.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s + 1)));
        auto [sub, sigma] = refine_min_margin(k, l, subspaces[order[s]], steps, rng);
        if (sigma < r.refined_sigma) {
            r.refined_sigma = sigma;
            r.refined_argmin = std::move(sub);
        }
    }
    r.verdict = r.refined_sigma < 1.0 - tol.geom ? Verdict::fails : Verdict::covers;
    return r;
}

EdgeCriterion simplex_edge_criterion(const Polytope& q, const Polytope& t, const Tolerances& tol) {
    const int n = t.dim();
    if (q.dim() != n) throw PreconditionError("edge criterion: ambient dimensions differ");
    const Polytope tc = canonicalize(t, tol.geom);
    if (tc.size() != n + 1 || affine_dim(tc, tol.feas) != n)
        throw PreconditionError("edge criterion: T must be an n-simplex with n+1 canonical vertices");
    const Polytope qc = canonicalize(q, tol.geom);
    if (qc.size() > n) throw PreconditionError("edge criterion: Q must have at most n canonical vertices");

    EdgeCriterion r;
    std::vector<Vec> seen;
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const Vec v = (tc.vertex(i) - tc.vertex(j)).normalized();
            const bool dup = std::any_of(seen.begin(), seen.end(),
                                         [&](const Vec& w) { return std::abs(w.dot(v)) > 1.0 - 1e-12; });
            if (dup) continue;
            seen.push_back(v);
            const Scalar sigma = scale_fit(hyperplane_shadow(qc, v), hyperplane_shadow(tc, v)).sigma;
            if (sigma < r.min_sigma) {
                r.min_sigma = sigma;
                r.worst_direction = v;
            }
        }
    }
    r.directions = static_cast<int>(seen.size());
    r.holds = r.min_sigma >= 1.0 - tol.geom;
    return r;
}

ObliqueReport oblique_equivalence_check(const Polytope& k, const Polytope& l, const Matrix& m, const Vec& u,
                                        const Tolerances& tol) {
    const int n = k.dim();
    if (m.rows() != n || m.cols() != n) throw PreconditionError("oblique check: M must be n x n");
    if (std::abs(m.determinant()) <= tol.feas) throw PreconditionError("oblique check: singular M");
    if (std::abs(u.norm() - 1.0) > 1e-9) throw PreconditionError("oblique check: u must be a unit vector");

    ObliqueReport r;
    r.sigma = scale_fit(hyperplane_shadow(k, u), hyperplane_shadow(l, u)).sigma;
    r.image_direction = (m * u).normalized();
    r.sigma_image = scale_fit(hyperplane_shadow(linear_image(k, m), r.image_direction),
                              hyperplane_shadow(linear_image(l, m), r.image_direction))
                        .sigma;
    r.verdict = classify(r.sigma, tol.geom);
    r.verdict_image = classify(r.sigma_image, tol.geom);
    r.borderline = r.verdict == Verdict::borderline || r.verdict_image == Verdict::borderline;
    r.agrees = r.verdict == r.verdict_image;
    return r;
}

FlatLiftReport flat_lift_check(const Polytope& k, const Polytope& l, const Flat& flat, const Subspace& eta,
                               const Tolerances& tol) {
    const int n = k.dim();
    if (l.dim() != n || flat.origin.size() != n || flat.basis.rows() != n || eta.ambient() != n)
        throw PreconditionError("flat_lift_check: dimension mismatch");
    for (const Polytope* body : {&k, &l}) {
        for (int i = 0; i < body->size(); ++i) {
            const Vec x = body->vertex(i);
            if (flat.distance(x) > tol.geom * std::max<Scalar>(1.0, x.norm()))
                throw PreconditionError("flat-membership violation");
        }
    }

    FlatLiftReport r;
    r.sigma_ambient = shadow_fit(k, l, eta).sigma;
    r.conclusion_holds = r.sigma_ambient >= 1.0 - tol.geom;

    // eta projected into the flat, in flat coordinates
    const Matrix p = flat.basis.transpose() * eta.basis();
    const Eigen::JacobiSVD<Matrix> svd(p, Eigen::ComputeThinU);
    const Vec& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > tol.feas) ++rank;
    r.projected_dim = rank;

    if (rank == 0) {
        // both shadows are single points
        r.sigma_in_flat = std::numeric_limits<Scalar>::infinity();
        r.hypothesis_holds = true;
        r.replay_holds = true;
        r.consistent = r.conclusion_holds;
        return r;
    }

    Matrix kf(flat.dim(), k.size()), lf(flat.dim(), l.size());
    for (int i = 0; i < k.size(); ++i) kf.col(i) = flat.coords(k.vertex(i));
    for (int i = 0; i < l.size(); ++i) lf.col(i) = flat.coords(l.vertex(i));
    const Subspace eta_hat = Subspace::from_orthonormal(svd.matrixU().leftCols(rank), 1e-8);
    const Polytope k_hat = project(Polytope(kf), eta_hat);
    const Polytope l_hat = project(Polytope(lf), eta_hat);
    const TranslateFit in_flat = translate_fits(k_hat, l_hat, tol);
    r.sigma_in_flat = in_flat.sigma;
    r.hypothesis_holds = in_flat.fits;

    if (r.hypothesis_holds) {
        // translate K inside the flat so that its eta_hat shadow sits in L's
        const Vec shift_hat = in_flat.witness ? *in_flat.witness : Vec(Vec::Zero(rank));
        const Vec shift = flat.basis * (eta_hat.basis() * shift_hat);
        const Polytope k_eta = project(k.translated(shift), eta);
        const Polytope l_eta = project(l, eta);
        r.replay_holds = true;
        for (int i = 0; i < k_eta.size() && r.replay_holds; ++i)
            r.replay_holds = contains_point(l_eta, k_eta.vertex(i), 10.0 * tol.geom);
    }
    r.consistent = !r.hypothesis_holds || (r.conclusion_holds && r.replay_holds);
    return r;
}

}  // namespace polycover
