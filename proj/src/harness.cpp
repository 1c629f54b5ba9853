#include "polycover/harness.hpp"

#include <cmath>

namespace polycover {

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Scalar uniform(Rng& rng, Scalar lo, Scalar hi) { return std::uniform_real_distribution<Scalar>(lo, hi)(rng); }

Matrix random_rotation(int n, Rng& rng) { return haar_subspace(n, n, rng).basis(); }

}  // namespace

Polytope random_polytope(int n, int m, Rng& rng) {
    if (m < 1) throw PreconditionError("random_polytope: need at least one point");
    Vec axes(n);
    for (int i = 0; i < n; ++i) axes[i] = uniform(rng, 0.5, 1.5);
    const Matrix shape = random_rotation(n, rng) * axes.asDiagonal();
    Vec centre(n);
    for (int i = 0; i < n; ++i) centre[i] = uniform(rng, -0.3, 0.3);
    Matrix v(n, m);
    for (int j = 0; j < m; ++j) v.col(j) = centre + shape * random_unit(n, rng);
    return Polytope(std::move(v));
}

Polytope random_simplex(int n, Rng& rng) {
    std::normal_distribution<Scalar> gauss(0.0, 1.0);
    for (;;) {
        Matrix v(n, n + 1);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i < n; ++i) v(i, j) = gauss(rng);
        const Matrix edges = v.rightCols(n).colwise() - v.col(0);
        const Eigen::JacobiSVD<Matrix> svd(edges);
        const Vec& sv = svd.singularValues();
        if (sv[n - 1] > 0.2 * sv[0]) return Polytope(std::move(v)).with_canonical_flag(true);
    }
}

Matrix random_conditioned_map(int n, Scalar cond_max, Rng& rng) {
    if (cond_max < 1.0) throw PreconditionError("random_conditioned_map: condition bound below 1");
    Vec s(n);
    const Scalar top = std::log(cond_max);
    for (int i = 0; i < n; ++i) s[i] = std::exp(uniform(rng, 0.0, top));
    s[0] = 1.0;
    return random_rotation(n, rng) * s.asDiagonal() * random_rotation(n, rng);
}

Scalar draw_target(Rng& rng, Scalar margin, Scalar lo, Scalar hi) {
    for (;;) {
        const Scalar t = uniform(rng, lo, hi);
        if (std::abs(t - 1.0) >= margin) return t;
    }
}

Pair rescale_to_target(Polytope k, const Polytope& l, Scalar current, Scalar target) {
    if (!(current > 0.0) || !std::isfinite(current)) throw PreconditionError("rescale_to_target: degenerate sigma");
    const Vec c = l.vertices().rowwise().mean();
    Matrix v = (l.vertices().colwise() - c) * (target / current);
    v.colwise() += c;
    return Pair{std::move(k), Polytope(std::move(v)).with_canonical_flag(l.canonical()), target};
}

Pair inscribed_pair(int n, Rng& rng, Scalar margin) {
    const int hi = n == 2 ? 6 : 8;
    const Polytope k = canonicalize(random_polytope(n, uniform_int(rng, n + 1, hi), rng));
    const Polytope l = canonicalize(random_polytope(n, uniform_int(rng, n + 1, hi), rng));
    return rescale_to_target(k, l, scale_fit(k, l).sigma, draw_target(rng, margin));
}

Pair shadow_pair(int n, int d, Rng& rng, Scalar margin) {
    const Polytope k = canonicalize(random_polytope(n, uniform_int(rng, d + 2, 7), rng));
    const Polytope l = canonicalize(random_polytope(n, uniform_int(rng, n + 1, 7), rng));
    return rescale_to_target(k, l, min_subset_sigma(k, l, d + 1).sigma, draw_target(rng, margin));
}

Pair oblique_pair(int n, const Vec& u, Rng& rng, Scalar margin) {
    const Polytope k = canonicalize(random_polytope(n, uniform_int(rng, n + 1, 8), rng));
    const Polytope l = canonicalize(random_polytope(n, uniform_int(rng, n + 1, 8), rng));
    const Scalar s = scale_fit(hyperplane_shadow(k, u), hyperplane_shadow(l, u)).sigma;
    return rescale_to_target(k, l, s, draw_target(rng, margin));
}

InscribedTrial run_inscribed_trial(const Pair& p, const Tolerances& tol) {
    const int n = p.k.dim();
    const EquivalenceReport eq = inscribed_equivalence_check(p.k, p.l, n + 1, tol);
    InscribedTrial t;
    t.sigma = eq.sigma;
    t.subset_fits = eq.subset_side_fits;
    t.translate_fits = eq.translate_side_fits;
    t.borderline = eq.borderline;
    t.agrees = eq.agrees;
    t.witness = eq.witness;
    if (t.witness) t.replay_ok = scale_fit(p.k.subset(*t.witness), p.l).sigma < 1.0;
    return t;
}

ShadowTrial run_shadow_trial(const Pair& p, int d, int samples, int refine_starts, int refine_steps,
                             std::uint64_t seed, const Tolerances& tol) {
    ShadowTrial t;
    t.d = d;
    t.subset_sigma = min_subset_sigma(p.k, p.l, d + 1).sigma;
    t.subset_fits = !subset_witness(p.k, p.l, d + 1, tol).has_value();
    const RefinedSweep sweep = shadow_sweep_refined(p.k, p.l, d, Sampler{SamplerKind::automatic, seed}, samples,
                                                    refine_starts, refine_steps, tol);
    t.sweep_min = sweep.sweep.min_sigma;
    t.refined_min = sweep.refined_sigma;
    t.verdict = sweep.verdict;
    t.agrees = t.subset_fits == (t.verdict == Verdict::covers);
    t.located_failure = !t.subset_fits && t.refined_min < 1.0;
    return t;
}

SuiteReport verify_suite(const SuiteOptions& opt, const Tolerances& tol) {
    if (opt.n < 2) throw PreconditionError("verify_suite: n must be at least 2");
    if (opt.trials < 1) throw PreconditionError("verify_suite: trials must be positive");
    SuiteReport r;
    r.n = opt.n;
    r.trials = opt.trials;
    r.seed = opt.seed;
    Rng rng(opt.seed);
    for (int i = 0; i < opt.trials; ++i) {
        SuiteRecord rec;
        rec.index = i;
        if (i % 2 == 0) {
            const InscribedTrial t = run_inscribed_trial(inscribed_pair(opt.n, rng, 1e-4), tol);
            ++r.inscribed_trials;
            rec.sigma = t.sigma;
            rec.other = t.sigma;
            rec.subset_fits = t.subset_fits;
            rec.other_fits = t.translate_fits;
            rec.borderline = t.borderline;
            rec.agrees = t.agrees;
            if (!t.replay_ok) ++r.replay_failures;
        } else {
            const int d = 1 + (i / 2) % (opt.n - 1);
            const Pair p = shadow_pair(opt.n, d, rng, 0.05);
            const ShadowTrial t = run_shadow_trial(p, d, opt.sweep_samples, opt.refine_starts, opt.refine_steps,
                                                   opt.seed + static_cast<std::uint64_t>(i), tol);
            ++r.shadow_trials;
            rec.shadow = true;
            rec.d = d;
            rec.sigma = t.subset_sigma;
            rec.other = t.refined_min;
            rec.subset_fits = t.subset_fits;
            rec.other_fits = t.verdict == Verdict::covers;
            rec.borderline = std::abs(t.subset_sigma - 1.0) <= 10.0 * tol.geom;
            rec.agrees = t.agrees;
        }
        if (rec.borderline)
            ++r.borderline;
        else if (!rec.agrees)
            ++r.disagreements;
        r.records.push_back(rec);
    }
    return r;
}

}  // namespace polycover
