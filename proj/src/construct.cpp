#include "polycover/construct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace polycover {

namespace {

Scalar min_singular_value(const Matrix& m) {
    const Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()[svd.singularValues().size() - 1];
}

struct SelectionStats {
    int restarts = 0;
    long candidates = 0;
    long irregular = 0;
    long repeated_vertex = 0;
    long dependent = 0;
    long outside_cone = 0;
    long margin_rejected = 0;
};

/// Regular normal: the support set at a 10 tol.geom band is a single vertex.
std::optional<int> regular_vertex(const Polytope& k, const Vec& u, const Tolerances& tol) {
    const std::vector<int> s = support_set(k, u, 10.0 * tol.geom);
    if (s.size() != 1) return std::nullopt;
    return s.front();
}

std::optional<NormalSelection> select_once(const Polytope& k, Rng& rng, const Tolerances& tol,
                                           SelectionStats& stats) {
    const int n = k.dim();
    constexpr int tries = 64;
    Matrix u(n, n + 1);
    std::vector<int> touched;

    for (int i = 0; i < n; ++i) {
        bool accepted = false;
        for (int t = 0; t < tries && !accepted; ++t) {
            ++stats.candidates;
            const Vec cand = random_unit(n, rng);
            const auto v = regular_vertex(k, cand, tol);
            if (!v) {
                ++stats.irregular;
                continue;
            }
            if (std::find(touched.begin(), touched.end(), *v) != touched.end()) {
                ++stats.repeated_vertex;
                continue;
            }
            u.col(i) = cand;
            if (min_singular_value(u.leftCols(i + 1)) < 0.05) {
                ++stats.dependent;
                continue;
            }
            touched.push_back(*v);
            accepted = true;
        }
        if (!accepted) return std::nullopt;
    }

    // last normal from -C intersected with the polar cone of C
    std::lognormal_distribution<Scalar> weight(0.0, 1.0);
    for (int t = 0; t < tries; ++t) {
        ++stats.candidates;
        Vec a(n);
        for (int i = 0; i < n; ++i) a[i] = weight(rng);
        const Vec w = -(u.leftCols(n) * a);
        const Scalar len = w.norm();
        if (!(len > 0.0)) continue;
        const Vec cand = w / len;
        if ((u.leftCols(n).transpose() * cand).maxCoeff() >= -tol.geom) {
            ++stats.outside_cone;
            continue;
        }
        const auto v = regular_vertex(k, cand, tol);
        if (!v) {
            ++stats.irregular;
            continue;
        }
        if (std::find(touched.begin(), touched.end(), *v) != touched.end()) {
            ++stats.repeated_vertex;
            continue;
        }
        u.col(n) = cand;
        if (origin_interior_margin(u).first <= tol.geom) {
            ++stats.margin_rejected;
            continue;
        }
        NormalSelection sel;
        sel.normals = u;
        touched.push_back(*v);
        sel.touch_indices = touched;
        sel.coefficients.resize(n + 1);
        sel.coefficients.head(n) = a;
        sel.coefficients[n] = len;
        sel.coefficients /= sel.coefficients.sum();
        return sel;
    }
    return std::nullopt;
}

std::string describe(const SelectionStats& s) {
    std::ostringstream os;
    os << "selection failed after " << s.restarts << " restarts (" << s.candidates << " candidate directions: "
       << s.irregular << " irregular, " << s.repeated_vertex << " at a used vertex, " << s.dependent
       << " nearly dependent, " << s.outside_cone << " outside the polar cone, " << s.margin_rejected
       << " below the origin margin)";
    return os.str();
}

void require_selectable(const Polytope& k, bool allow_flat, const Tolerances& tol) {
    const int n = k.dim();
    if (!k.canonical()) throw PreconditionError("normal selection: K must be canonical");
    if (k.size() < n + 1) throw PreconditionError("normal selection: K needs at least n+1 vertices");
    if (!allow_flat && affine_dim(k, tol.feas) != n)
        throw PreconditionError("normal selection: K must be full-dimensional");
}

std::vector<Vec> sweep_directions(int n, int count, std::uint64_t seed) {
    if (n == 2 || n == 3) return direction_grid(n, count);
    Rng rng(seed);
    std::vector<Vec> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(random_unit(n, rng));
    return out;
}

/// Checks (a)-(d) for the pair (K, S) at factor eps; fills the record.
void run_checks(Counterexample& ce, const CounterexampleOptions& opt, const Tolerances& tol) {
    const Polytope scaled = scale_about_centroid(ce.body, ce.epsilon);
    ce.scale_sigma = scale_fit(ce.body, ce.cover).sigma;
    ce.checks.maximal = std::abs(ce.scale_sigma - 1.0) <= 10.0 * tol.geom;
    ce.checks.epsilon_above_one = ce.epsilon > 1.0 + tol.geom;
    const TranslateFit t = translate_fits(scaled, ce.cover, tol);
    ce.checks.no_translate = !t.fits;
    ce.checks.farkas_certified = !t.fits && t.farkas.has_value() && t.certified;
    const ShadowReport sweep =
        shadow_sweep(scaled, ce.cover, ce.d, Sampler{SamplerKind::automatic, opt.seed + 1}, opt.sweep_samples, tol);
    ce.sweep_min_sigma = sweep.min_sigma;
    ce.sweep_samples = sweep.samples;
    ce.checks.shadows_cover = sweep.verdict == Verdict::covers && sweep.samples >= 1000;
}

Counterexample build_simplex_case(const Polytope& kc, int d, const CounterexampleOptions& opt, const Tolerances& tol,
                                  bool allow_flat) {
    const int n = kc.dim();
    require_selectable(kc, allow_flat, tol);
    Rng rng(opt.seed);
    SelectionStats stats;
    const std::vector<Vec> dirs = sweep_directions(n, opt.directions, opt.seed + 3);

    for (int attempt = 1; attempt <= opt.restarts; ++attempt) {
        ++stats.restarts;
        const std::optional<NormalSelection> sel = select_once(kc, rng, tol, stats);
        if (!sel) continue;
        Polytope s;
        try {
            s = circumscribe_simplex(kc, *sel);
        } catch (const NumericalError&) {
            continue;
        }
        if (!verify_touching(kc, s, tol)) continue;
        const EpsilonGap gap =
            epsilon_gap(kc, s, dirs, tol, opt.refine_starts, opt.refine_steps, opt.seed + 4 + attempt);
        if (gap.epsilon <= 1.0 + 4.0 * tol.geom) continue;

        Counterexample ce;
        ce.body = kc;
        ce.cover = std::move(s);
        ce.epsilon_gap = gap.epsilon;
        ce.epsilon = 1.0 + 0.5 * (gap.epsilon - 1.0);
        ce.d = d;
        ce.seed = opt.seed;
        ce.attempts = attempt;
        ce.log_directions = dirs;
        ce.log_sigmas = gap.sigmas;
        ce.certificate = *sel;
        ce.checks.touching = true;
        run_checks(ce, opt, tol);
        if (ce.checks.all()) return ce;
    }
    throw SelectionFailed(describe(stats));
}

/// Flat through K's affine hull, widened to dimension m with directions from a full QR.
Flat widened_flat(const Polytope& kc, int m, const Tolerances& tol) {
    Flat hull = affine_hull(kc, tol.feas);
    const int k = hull.dim();
    if (m == k) return hull;
    const Eigen::HouseholderQR<Matrix> qr(hull.basis);
    const Matrix q = qr.householderQ() * Matrix::Identity(kc.dim(), kc.dim());
    Matrix basis(kc.dim(), m);
    basis.leftCols(k) = hull.basis;
    basis.rightCols(m - k) = q.middleCols(k, m - k);
    return Flat{hull.origin, basis};
}

}  // namespace

bool selection_valid(const Polytope& k, const NormalSelection& sel, const Tolerances& tol) {
    const int n = k.dim();
    if (sel.normals.rows() != n || sel.normals.cols() != n + 1) return false;
    if (sel.coefficients.size() != n + 1 || static_cast<int>(sel.touch_indices.size()) != n + 1) return false;
    if ((sel.normals * sel.coefficients).norm() > tol.feas) return false;
    if (sel.coefficients.minCoeff() <= tol.feas) return false;
    std::vector<int> seen;
    for (int i = 0; i <= n; ++i) {
        if (std::abs(sel.normals.col(i).norm() - 1.0) > tol.feas) return false;
        const std::vector<int> s = support_set(k, sel.normals.col(i), tol.geom);
        if (s.size() != 1 || s.front() != sel.touch_indices[i]) return false;
        if (std::find(seen.begin(), seen.end(), s.front()) != seen.end()) return false;
        seen.push_back(s.front());
    }
    return true;
}

NormalSelection make_selection(const Polytope& k, const Matrix& normals, const Tolerances& tol) {
    const int n = k.dim();
    if (normals.rows() != n || normals.cols() != n + 1)
        throw PreconditionError("make_selection: need n+1 normals in R^n");
    NormalSelection sel;
    sel.normals = normals;
    for (int i = 0; i <= n; ++i) sel.normals.col(i).normalize();
    for (int i = 0; i <= n; ++i) {
        const std::vector<int> s = support_set(k, sel.normals.col(i), tol.geom);
        if (s.size() != 1) throw PreconditionError("make_selection: normal " + std::to_string(i) + " is not regular");
        if (std::find(sel.touch_indices.begin(), sel.touch_indices.end(), s.front()) != sel.touch_indices.end())
            throw PreconditionError("make_selection: two normals expose the same vertex");
        sel.touch_indices.push_back(s.front());
    }
    auto [delta, a] = origin_interior_margin(sel.normals);
    if (delta <= tol.geom) throw PreconditionError("make_selection: origin is not interior to the normals' hull");
    sel.coefficients = a / a.sum();
    return sel;
}

NormalSelection select_regular_normals(const Polytope& k, Rng& rng, int restarts, const Tolerances& tol,
                                       bool allow_flat) {
    require_selectable(k, allow_flat, tol);
    SelectionStats stats;
    for (int r = 0; r < restarts; ++r) {
        ++stats.restarts;
        if (auto sel = select_once(k, rng, tol, stats)) return *sel;
    }
    throw SelectionFailed(describe(stats));
}

Polytope circumscribe_simplex(const Polytope& k, const NormalSelection& sel) {
    const int n = k.dim();
    if (sel.normals.rows() != n || sel.normals.cols() != n + 1)
        throw PreconditionError("circumscribe_simplex: selection does not match K");
    Vec h(n + 1);
    for (int i = 0; i <= n; ++i) h[i] = support(k, sel.normals.col(i));
    return simplex_from_normals(sel.normals, h);
}

bool verify_touching(const Polytope& k, const Polytope& s, const Tolerances& tol) {
    const int n = s.dim();
    if (k.dim() != n) throw PreconditionError("verify_touching: ambient dimensions differ");
    const SimplexFacets f = simplex_facets(s);
    const Matrix values = f.normals.transpose() * k.vertices();  // (n+1) x |K|
    for (int i = 0; i <= n; ++i)
        if ((values.row(i).array() - f.offsets[i]).maxCoeff() > tol.geom)
            throw PreconditionError("verify_touching: K is not contained in S");

    for (int i = 0; i <= n; ++i) {
        int touch = -1;
        for (int v = 0; v < k.size(); ++v) {
            if (values(i, v) < f.offsets[i] - tol.geom) continue;
            if (touch >= 0) return false;
            touch = v;
        }
        if (touch < 0) return false;
        for (int j = 0; j <= n; ++j)
            if (j != i && values(j, touch) > f.offsets[j] - tol.geom) return false;
    }
    return true;
}

EpsilonGap epsilon_gap(const Polytope& k, const Polytope& s, const std::vector<Vec>& directions,
                       const Tolerances& tol, int refine_starts, int refine_steps, std::uint64_t seed) {
    if (directions.empty()) throw PreconditionError("epsilon_gap: no directions");
    if (!verify_touching(k, s, tol)) throw PreconditionError("epsilon_gap: touching hypothesis fails");

    EpsilonGap r;
    r.directions = static_cast<int>(directions.size());
    const std::function<Scalar(int)> eval = [&](int i) {
        const Vec& u = directions[i];
        return scale_fit(hyperplane_shadow(k, u), hyperplane_shadow(s, u)).sigma;
    };
    r.sigmas = parallel_map<Scalar>(r.directions, default_workers(), eval);

    std::vector<int> order(r.sigmas.size());
    std::iota(order.begin(), order.end(), 0);
    const int take = std::min<int>(refine_starts, r.directions);
    std::partial_sort(order.begin(), order.begin() + std::max(take, 1), order.end(),
                      [&](int a, int b) { return r.sigmas[a] < r.sigmas[b]; });
    r.sampled_min = r.sigmas[order[0]];
    r.argmin_direction = directions[order[0]];
    r.epsilon = r.sampled_min;
    for (int i = 0; i < take; ++i) {
        Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1)));
        const Scalar refined =
            refine_min_margin(k, s, orthogonal_complement(directions[order[i]]), refine_steps, rng).second;
        r.epsilon = std::min(r.epsilon, refined);
    }
    return r;
}

Polytope scale_about_centroid(const Polytope& k, Scalar eps) {
    const Vec c = k.vertices().rowwise().mean();
    Matrix v = (k.vertices().colwise() - c) * eps;
    v.colwise() += c;
    return Polytope(std::move(v)).with_canonical_flag(k.canonical());
}

Counterexample build_counterexample(const Polytope& k, const CounterexampleOptions& opt, const Tolerances& tol) {
    const int n = k.dim();
    const Polytope kc = canonicalize(k, tol.geom);
    if (affine_dim(kc, tol.feas) != n)
        throw PreconditionError("build_counterexample: K is lower-dimensional; use the d-shadow builder");
    if (kc.size() < n + 1) throw PreconditionError("build_counterexample: K needs at least n+1 exposed points");
    return build_simplex_case(kc, n - 1, opt, tol, false);
}

Counterexample build_counterexample_d(const Polytope& k, int d, const CounterexampleOptions& opt,
                                      const Tolerances& tol) {
    const int n = k.dim();
    if (d < 1 || d > n - 1) throw PreconditionError("build_counterexample_d: need 1 <= d <= n-1");
    const Polytope kc = canonicalize(k, tol.geom);
    if (kc.size() < d + 2)
        throw PreconditionError("build_counterexample_d: K has " + std::to_string(kc.size()) +
                                " exposed points; at least d+2 are needed, since bodies with at most d+1 "
                                "vertices fit whenever all their d-shadows do");
    const int kd = affine_dim(kc, tol.feas);

    if (kd == n) {
        Counterexample ce = build_simplex_case(kc, n - 1, opt, tol, false);
        if (d < n - 1) {
            ce.d = d;
            run_checks(ce, opt, tol);
            if (!ce.checks.all()) throw NumericalError("build_counterexample_d: lower shadow sweep failed");
        }
        return ce;
    }

    const int m = std::max(kd, d + 1);
    if (m == n) return build_simplex_case(kc, d, opt, tol, true);

    // build inside an m-flat through K, then embed
    const Flat flat = widened_flat(kc, m, tol);
    Matrix local(m, kc.size());
    for (int i = 0; i < kc.size(); ++i) local.col(i) = flat.coords(kc.vertex(i));
    const Counterexample inner = build_counterexample_d(Polytope(std::move(local)), d, opt, tol);

    Counterexample ce;
    ce.body = kc;
    Matrix cover(n, inner.cover.size());
    for (int i = 0; i < inner.cover.size(); ++i) cover.col(i) = flat.lift(inner.cover.vertex(i));
    ce.cover = Polytope(std::move(cover)).with_canonical_flag(true);
    ce.epsilon = inner.epsilon;
    ce.epsilon_gap = inner.epsilon_gap;
    ce.d = d;
    ce.seed = opt.seed;
    ce.attempts = inner.attempts;
    ce.lifted = true;
    for (const Vec& u : inner.log_directions) ce.log_directions.push_back(flat.basis * u);
    ce.log_sigmas = inner.log_sigmas;
    ce.certificate = inner.certificate;
    ce.certificate.normals = flat.basis * inner.certificate.normals;
    ce.checks.touching = inner.checks.touching;
    run_checks(ce, opt, tol);

    const Polytope scaled = scale_about_centroid(kc, ce.epsilon);
    Rng rng(opt.seed + 2);
    ce.checks.flat_lift = true;
    ce.checks.flat_lift_runs = opt.flat_checks;
    for (int i = 0; i < opt.flat_checks; ++i) {
        const FlatLiftReport rep = flat_lift_check(scaled, ce.cover, flat, haar_subspace(n, d, rng), tol);
        if (!rep.hypothesis_holds || !rep.consistent) ce.checks.flat_lift = false;
    }
    if (!ce.checks.all()) throw NumericalError("build_counterexample_d: lifted counterexample failed its checks");
    return ce;
}

std::pair<Polytope, Polytope> canonical_tetra_quad() {
    Matrix dv(3, 4);
    dv << 1, 1, -1, -1,
          1, -1, 1, -1,
          1, -1, -1, 1;
    Matrix q(3, 4);
    for (int f = 0; f < 4; ++f) {
        std::vector<int> verts;
        for (int i = 0; i < 4; ++i)
            if (i != f) verts.push_back(i);
        // endpoints of facet f intersected with z = 0: crossings of its sign-changing edges
        Vec sum = Vec::Zero(3);
        int count = 0;
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                const Vec p = dv.col(verts[a]);
                const Vec r = dv.col(verts[b]);
                if (p[2] * r[2] >= 0.0) continue;
                const Scalar t = p[2] / (p[2] - r[2]);
                sum += p + t * (r - p);
                ++count;
            }
        }
        q.col(f) = sum / count;
    }
    return {Polytope(dv).with_canonical_flag(true), Polytope(q).with_canonical_flag(true)};
}

}  // namespace polycover
