#include "polycover/containment.hpp"

#include <cmath>

namespace polycover {

namespace {

/// Rows and columns of the convex-combination encoding shared by the fit LPs.
/// Column layout: [t?] v (n, free) lambda (mk * ml, >= 0).
lp::LpProblem containment_problem(const Polytope& k, const Polytope& l, bool with_scale) {
    if (k.dim() != l.dim()) throw PreconditionError("containment: ambient dimensions differ");
    const int n = k.dim();
    const int mk = k.size();
    const int ml = l.size();
    const int off = with_scale ? 1 : 0;
    const int nv = off + n + mk * ml;
    const int nr = mk * (n + 1);

    lp::LpProblem p;
    p.A = Matrix::Zero(nr, nv);
    p.b = Vec::Zero(nr);
    p.c = Vec::Zero(nv);
    p.nonneg.assign(static_cast<std::size_t>(nv), true);
    for (int j = 0; j < n; ++j) p.nonneg[off + j] = false;
    if (with_scale) p.c[0] = 1.0;

    const Matrix& y = l.vertices();
    for (int i = 0; i < mk; ++i) {
        const int r0 = i * (n + 1);
        const int c0 = off + n + i * ml;
        if (with_scale)
            p.A.block(r0, 0, n, 1) = k.vertices().col(i);
        else
            p.b.segment(r0, n) = -k.vertices().col(i);
        p.A.block(r0, off, n, n).setIdentity();
        p.A.block(r0, c0, n, ml) = -y;
        p.A.block(r0 + n, c0, 1, ml).setOnes();
        p.b[r0 + n] = 1.0;
    }
    return p;
}

}  // namespace

FitResult scale_fit(const Polytope& k, const Polytope& l) {
    const lp::LpProblem p = containment_problem(k, l, true);
    const lp::LpOutcome out = lp::solve(p);
    const int n = k.dim();
    FitResult r;
    switch (out.status) {
        case lp::LpStatus::optimal:
            r.sigma = std::max<Scalar>(0.0, (*out.z)[0]);
            r.translation = out.z->segment(1, n);
            r.status = FitStatus::ok;
            return r;
        case lp::LpStatus::unbounded:
            r.sigma = std::numeric_limits<Scalar>::infinity();
            r.translation = l.vertex(0) - k.vertex(0);
            r.status = FitStatus::degenerate;
            return r;
        case lp::LpStatus::infeasible:
            break;
    }
    // t = 0 with v in L is always feasible
    throw NumericalError("scale_fit: LP reported infeasible");
}

lp::LpOutcome fixed_translation_lp(const Polytope& k, const Polytope& l, lp::LpProblem* problem) {
    lp::LpProblem p = containment_problem(k, l, false);
    lp::LpOutcome out = lp::solve(p);
    if (problem) *problem = std::move(p);
    return out;
}

TranslateFit translate_fits(const Polytope& k, const Polytope& l, const Tolerances& tol) {
    TranslateFit r;
    const FitResult fit = scale_fit(k, l);
    r.sigma = fit.sigma;
    r.status = fit.status;
    r.fits = fit.sigma >= 1.0 - tol.geom;

    lp::LpProblem p;
    const lp::LpOutcome out = fixed_translation_lp(k, l, &p);
    if (r.fits && out.status == lp::LpStatus::optimal) {
        r.witness = out.z->head(k.dim());
        r.certified = lp::check_optimal(p, out, tol.feas);
    } else if (!r.fits && out.status == lp::LpStatus::infeasible && out.dual) {
        r.farkas = *out.dual;
        r.certified = lp::check_farkas(p, *out.dual, tol.feas);
    }
    return r;
}

namespace {

/// Calls f on each k-combination of {0..m-1} in lexicographic order until it returns true.
template <typename F>
bool for_each_combination(int m, int k, F&& f) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (f(idx)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

std::optional<std::vector<int>> subset_witness(const Polytope& k_body, const Polytope& l, int k,
                                               const Tolerances& tol) {
    if (!k_body.canonical()) throw PreconditionError("subset_witness: K must be canonical");
    if (k < 1) throw PreconditionError("subset_witness: k must be positive");
    k = std::min(k, k_body.size());
    std::optional<std::vector<int>> found;
    for_each_combination(k_body.size(), k, [&](const std::vector<int>& idx) {
        const FitResult fit = scale_fit(k_body.subset(idx), l);
        if (fit.status == FitStatus::ok && fit.sigma < 1.0 - tol.geom) {
            found = idx;
            return true;
        }
        return false;
    });
    return found;
}

SubsetMin min_subset_sigma(const Polytope& k_body, const Polytope& l, int k) {
    if (k < 1) throw PreconditionError("min_subset_sigma: k must be positive");
    k = std::min(k, k_body.size());
    SubsetMin best;
    for_each_combination(k_body.size(), k, [&](const std::vector<int>& idx) {
        const FitResult fit = scale_fit(k_body.subset(idx), l);
        if (fit.sigma < best.sigma) {
            best.sigma = fit.sigma;
            best.subset = idx;
        }
        return false;
    });
    return best;
}

EquivalenceReport inscribed_equivalence_check(const Polytope& k_body, const Polytope& l, int k,
                                              const Tolerances& tol) {
    EquivalenceReport r;
    r.witness = subset_witness(k_body, l, k, tol);
    r.subset_side_fits = !r.witness.has_value();
    const TranslateFit t = translate_fits(k_body, l, tol);
    r.translate_side_fits = t.fits;
    r.sigma = t.sigma;
    r.agrees = r.subset_side_fits == r.translate_side_fits;
    r.borderline = std::abs(t.sigma - 1.0) <= 10.0 * tol.geom;
    r.hard_failure = !r.agrees && !r.borderline && k >= k_body.dim() + 1;
    return r;
}

std::pair<Scalar, Vec> origin_interior_margin(const Matrix& u) {
    const auto n = u.rows();
    const auto m = u.cols();
    // variables: delta (free), s (m, >= 0); a_i = delta + s_i
    lp::LpProblem p;
    p.A = Matrix::Zero(n + 1, m + 1);
    p.A.block(0, 0, n, 1) = u.rowwise().sum();
    p.A.block(0, 1, n, m) = u;
    p.A(n, 0) = static_cast<Scalar>(m);
    p.A.block(n, 1, 1, m).setOnes();
    p.b = Vec::Zero(n + 1);
    p.b[n] = 1.0;
    p.c = Vec::Zero(m + 1);
    p.c[0] = 1.0;
    p.nonneg.assign(static_cast<std::size_t>(m + 1), true);
    p.nonneg[0] = false;
    const lp::LpOutcome out = lp::solve(p);
    if (out.status != lp::LpStatus::optimal)
        return {-std::numeric_limits<Scalar>::infinity(), Vec::Zero(m)};
    const Scalar delta = (*out.z)[0];
    Vec a = out.z->tail(m).array() + delta;
    return {delta, a};
}

Polytope simplex_from_normals(const Matrix& normals, const Vec& offsets) {
    const auto n = normals.rows();
    if (normals.cols() != n + 1 || offsets.size() != n + 1)
        throw PreconditionError("simplex_from_normals: need n+1 normals and offsets");
    Matrix verts(n, n + 1);
    for (Eigen::Index j = 0; j <= n; ++j) {
        Matrix a(n, n);
        Vec h(n);
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i <= n; ++i) {
            if (i == j) continue;
            a.row(r) = normals.col(i).transpose();
            h[r++] = offsets[i];
        }
        const Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Vec& sv = svd.singularValues();
        if (!(sv[n - 1] > 0.0) || sv[0] / sv[n - 1] > 1e12)
            throw NumericalError("simplex_from_normals: ill-conditioned vertex system");
        verts.col(j) = svd.solve(h);
    }
    return Polytope(std::move(verts)).with_canonical_flag(true);
}

std::optional<SimplexWitness> circumscribing_simplex_witness(const Polytope& k, const Polytope& l, int restarts,
                                                             Rng& rng, const Tolerances& tol) {
    if (translate_fits(k, l, tol).fits)
        throw PreconditionError("circumscribing_simplex_witness: K already translates into L");
    const int n = l.dim();
    for (int attempt = 1; attempt <= restarts; ++attempt) {
        Matrix u(n, n + 1);
        do {
            for (int i = 0; i <= n; ++i) u.col(i) = random_unit(n, rng);
        } while (origin_interior_margin(u).first <= tol.geom);
        Vec h(n + 1);
        for (int i = 0; i <= n; ++i) h[i] = support(l, u.col(i));
        try {
            Polytope simplex = simplex_from_normals(u, h);
            const FitResult fit = scale_fit(k, simplex);
            if (fit.status == FitStatus::ok && fit.sigma < 1.0 - tol.geom)
                return SimplexWitness{std::move(simplex), fit.sigma, attempt};
        } catch (const NumericalError&) {
            // near-parallel normals; draw again
        }
    }
    return std::nullopt;
}

}  // namespace polycover
