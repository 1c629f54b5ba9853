// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include "polycover/cli.hpp"
#include "polycover/construct.hpp"
#include "polycover/containment.hpp"
#include "polycover/harness.hpp"
#include "polycover/io.hpp"
#include "polycover/shadows.hpp"
#include "polycover/widths.hpp"

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace polycover;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

Polytope poly(std::initializer_list<std::initializer_list<Scalar>> rows) {
    std::vector<Vec> pts;
    for (const auto& r : rows) {
        Vec v(static_cast<Eigen::Index>(r.size()));
        Eigen::Index i = 0;
        for (Scalar x : r) v[i++] = x;
        pts.push_back(v);
    }
    return Polytope::from_points(pts);
}

Outcome lp_vs_oracle() {
    Rng rng(101);
    std::uniform_int_distribution<int> count(4, 8);
    Scalar worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Polytope k = random_polytope(2, count(rng), rng);
        const Polytope l = random_polytope(2, count(rng), rng);
        const Scalar sigma = scale_fit(k, l).sigma;
        worst = std::max(worst, std::abs(sigma - oracle::grid_sigma_2d(k, l)));
    }
    const Polytope t = poly({{0, 0}, {1, 0}, {0, 1}});
    const Polytope neg_t = t.scaled(-1.0);
    const Polytope square = poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const Scalar reflect = scale_fit(neg_t, t).sigma;
    const Scalar tri_square = scale_fit(t, square).sigma;
    const Scalar fixed_err = std::max({std::abs(reflect - 0.5), std::abs(tri_square - 1.0),
                                       std::abs(reflect - oracle::grid_sigma_2d(neg_t, t)),
                                       std::abs(tri_square - oracle::grid_sigma_2d(t, square))});
    worst = std::max(worst, fixed_err);
    return {worst <= 2e-3, fmt("max |sigma - grid| = %.2e over 52 pairs (tol 2e-3); sigma(-T,T) = %.9f, "
                               "sigma(triangle,square) = %.9f",
                               worst, reflect, tri_square)};
}

Outcome inscribed_equivalence() {
    int total = 0, borderline = 0, disagree = 0, replay_fail = 0, witnesses = 0;
    for (int n : {2, 3}) {
        Rng rng(200 + n);
        for (int i = 0; i < 200; ++i) {
            const InscribedTrial t = run_inscribed_trial(inscribed_pair(n, rng, 1e-4));
            ++total;
            if (t.borderline) {
                ++borderline;
                continue;
            }
            if (!t.agrees) ++disagree;
            if (t.witness) ++witnesses;
            if (!t.replay_ok) ++replay_fail;
        }
    }
    return {disagree == 0 && replay_fail == 0,
            fmt("%d pairs, %d borderline, %d disagreements, %d witnesses, %d replay failures", total, borderline,
                disagree, witnesses, replay_fail)};
}

Outcome shadow_equivalence() {
    Rng rng(303);
    int total = 0, disagree = 0, failing = 0, located = 0;
    for (int i = 0; i < 100; ++i) {
        const int d = 1 + i % 2;
        const Pair p = shadow_pair(3, d, rng, 0.05);
        const ShadowTrial t = run_shadow_trial(p, d, 1000, 5, 80, 3000 + i);
        ++total;
        if (!t.agrees) ++disagree;
        if (!t.subset_fits) {
            ++failing;
            if (t.located_failure) ++located;
        }
    }
    return {disagree == 0 && located == failing,
            fmt("%d instances (d = 1, 2), %d disagreements, refinement located %d of %d failures", total, disagree,
                located, failing)};
}

Outcome edge_criterion() {
    int total = 0, borderline = 0, disagree = 0;
    for (int n : {2, 3}) {
        Rng rng(400 + n);
        for (int i = 0; i < 100; ++i) {
            const int m = std::uniform_int_distribution<int>(2, n)(rng);
            const Polytope q = canonicalize(random_polytope(n, m, rng));
            const Polytope t0 = random_simplex(n, rng);
            const Pair p = rescale_to_target(q, t0, scale_fit(q, t0).sigma, draw_target(rng, 1e-3));
            const Polytope t = p.l.with_canonical_flag(true);
            const TranslateFit fit = translate_fits(p.k, t);
            const EdgeCriterion e = simplex_edge_criterion(p.k, t);
            ++total;
            if (std::abs(fit.sigma - 1.0) <= 10.0 * Tolerances{}.geom) {
                ++borderline;
                continue;
            }
            if (e.holds != fit.fits) ++disagree;
        }
    }
    return {disagree == 0, fmt("%d instances, %d borderline, %d disagreements", total, borderline, disagree)};
}

Outcome canonical_counterexample() {
    const auto [delta, q] = canonical_tetra_quad();
    const bool touching = verify_touching(q, delta);
    const Scalar sigma = scale_fit(q, delta).sigma;
    const EpsilonGap gap = epsilon_gap(q, delta, direction_grid(3, 10000));
    const Polytope eq = scale_about_centroid(q, gap.epsilon);
    const TranslateFit fit = translate_fits(eq, delta);
    const bool farkas = !fit.fits && fit.farkas && fit.certified;
    const ShadowReport sweep = shadow_sweep(eq, delta, 2, Sampler{}, 1000);
    const bool pass = touching && std::abs(sigma - 1.0) <= 1e-5 && gap.epsilon >= 1.001 && farkas &&
                      sweep.verdict == Verdict::covers;
    return {pass, fmt("touching %s, sigma(Q,D) = %.9f, eps = %.6f over %d directions, translate %s%s, "
                      "2-shadow sweep %s (min %.6f)",
                      touching ? "yes" : "no", sigma, gap.epsilon, gap.directions, fit.fits ? "fits" : "fails",
                      farkas ? " (Farkas certified)" : "", to_string(sweep.verdict).c_str(), sweep.min_sigma)};
}

/// Independent replay of an emitted counterexample.
bool replays(const Counterexample& ce) {
    if (!selection_valid(ce.body, ce.certificate)) return false;
    const Polytope s = circumscribe_simplex(ce.body, ce.certificate);
    if ((s.vertices() - ce.cover.vertices()).cwiseAbs().maxCoeff() > 1e-9) return false;
    if (!verify_touching(ce.body, s)) return false;
    if (std::abs(scale_fit(ce.body, s).sigma - 1.0) > 10.0 * Tolerances{}.geom) return false;
    if (!(ce.epsilon > 1.0 + Tolerances{}.geom)) return false;
    const Polytope scaled = scale_about_centroid(ce.body, ce.epsilon);
    const TranslateFit fit = translate_fits(scaled, s);
    if (fit.fits || !fit.farkas || !fit.certified) return false;
    return shadow_sweep(scaled, s, ce.d, Sampler{SamplerKind::haar, 77}, 1000).verdict == Verdict::covers;
}

Outcome builder_robustness() {
    int ok = 0, replayed = 0;
    for (int seed = 0; seed < 50; ++seed) {
        Rng rng(6000 + seed);
        const int m = std::uniform_int_distribution<int>(6, 12)(rng);
        const Polytope k = random_polytope(3, m, rng);
        CounterexampleOptions opt;
        opt.seed = static_cast<std::uint64_t>(seed);
        try {
            const Counterexample ce = build_counterexample(k, opt);
            if (!ce.checks.all()) continue;
            ++ok;
            if (replays(ce)) ++replayed;
        } catch (const SelectionFailed&) {
        }
    }
    return {ok >= 45 && replayed == ok,
            fmt("%d/50 seeds succeeded (need 45), %d of %d certificates replay", ok, replayed, ok)};
}

Outcome flat_case() {
    // non-square quadrilateral in a tilted plane of R^3
    const Vec origin = (Vec(3) << 0.3, -0.2, 0.5).finished();
    const Matrix frame = orthonormalize((Matrix(3, 2) << 1, 0.2, 0.3, 1, -0.4, 0.5).finished()).basis();
    const std::vector<Eigen::Vector2d> quad{{1.0, 0.1}, {0.2, 0.9}, {-0.8, 0.3}, {-0.1, -0.7}};
    Matrix v(3, 4);
    for (int i = 0; i < 4; ++i) v.col(i) = origin + frame * Vec(quad[i]);
    const Polytope k(v);

    const Counterexample ce = build_counterexample_d(k, 1);
    const Polytope scaled = scale_about_centroid(ce.body, ce.epsilon);
    Rng rng(707);
    int consistent = 0;
    for (int i = 0; i < 200; ++i) {
        const FlatLiftReport r = flat_lift_check(scaled, ce.cover, Flat{origin, frame}, haar_subspace(3, 1, rng));
        if (r.hypothesis_holds && r.consistent) ++consistent;
    }
    const TranslateFit fit = translate_fits(scaled, ce.cover);
    const bool pass = ce.checks.all() && ce.lifted && consistent == 200 && !fit.fits && fit.certified;
    return {pass, fmt("eps = %.6f, builder checks %s, flat_lift_check %d/200 consistent, translate %s",
                      ce.epsilon, ce.checks.all() ? "pass" : "fail", consistent, fit.fits ? "fits" : "fails")};
}

Outcome oblique_invariance() {
    Rng rng(808);
    int borderline = 0, disagree = 0;
    for (int i = 0; i < 500; ++i) {
        const int n = 2 + i % 2;
        const Vec u = random_unit(n, rng);
        const Pair p = oblique_pair(n, u, rng, 0.05);
        const Matrix m = random_conditioned_map(n, 50.0, rng);
        const ObliqueReport r = oblique_equivalence_check(p.k, p.l, m, u);
        if (r.borderline) {
            ++borderline;
            continue;
        }
        if (!r.agrees) ++disagree;
    }
    return {disagree == 0, fmt("500 trials (R^2, R^3), %d borderline, %d disagreements", borderline, disagree)};
}

Outcome kubota() {
    Rng rng(909);
    const Polytope cube = poly({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
    Scalar worst = kubota_check(cube, 2000, rng).relative_error;
    for (int i = 0; i < 10; ++i) {
        const Polytope k = random_polytope(3, std::uniform_int_distribution<int>(5, 12)(rng), rng);
        worst = std::max(worst, kubota_check(k, 2000, rng).relative_error);
    }
    const Scalar exact_cube = mean_width_exact(cube);
    const WidthEstimate mc_cube = mean_width_mc(cube, 20000, rng);

    Matrix sphere(3, 4096);
    for (int i = 0; i < 4096; ++i) sphere.col(i) = random_unit(3, rng);
    const WidthEstimate ball = mean_width_mc(Polytope(sphere), 4000, rng);
    const Scalar len = 2.5;
    const Polytope segment = poly({{0, 0, 0}, {len, 0, 0}});
    const WidthEstimate seg = mean_width_mc(segment, 20000, rng);

    const bool pass = worst <= 0.03 && std::abs(exact_cube - 1.5) <= 1e-12 &&
                      std::abs(mc_cube.value - exact_cube) <= 3.0 * mc_cube.std_error &&
                      std::abs(ball.value - 2.0) <= 0.02 && std::abs(seg.value - len / 2) <= 2.0 * seg.std_error;
    return {pass, fmt("max relative error %.4f (tol 0.03); W_exact(cube) - 1.5 = %.1e; W_mc(cube) = %.4f +- %.4f; "
                      "W(ball) = %.4f; W(segment %.1f) = %.4f +- %.4f",
                      worst, exact_cube - 1.5, mc_cube.value, mc_cube.std_error, ball.value, len, seg.value,
                      seg.std_error)};
}

std::string run_suite_report() {
    std::ostringstream out, err;
    const int code = cli::run({"verify-suite", "--seed", "7"}, out, err);
    if (code != 0) return "exit " + std::to_string(code) + ": " + err.str();
    io::Json j = io::Json::parse(out.str());
    j.erase("timestamp");
    return j.dump();
}

Outcome determinism() {
    const std::string a = run_suite_report();
    const std::string b = run_suite_report();
    const io::Json j = io::Json::parse(a, nullptr, false);
    const bool parsed = !j.is_discarded();
    const int disagreements = parsed ? j["result"]["disagreements"].get<int>() : -1;
    return {parsed && a == b, fmt("two runs of verify-suite --seed 7: %s (%zu bytes), disagreements %d",
                                  a == b ? "identical" : "differ", a.size(), disagreements)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"LP vs brute-force oracle", lp_vs_oracle},
        {"inscribed subset equivalence", inscribed_equivalence},
        {"shadow / subset equivalence", shadow_equivalence},
        {"simplex edge criterion", edge_criterion},
        {"canonical tetrahedron-quadrilateral", canonical_counterexample},
        {"counterexample builder robustness", builder_robustness},
        {"flat case lift", flat_case},
        {"oblique invariance", oblique_invariance},
        {"Kubota consistency", kubota},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
