#include "polycover/cli.hpp"

#include "polycover/construct.hpp"
#include "polycover/containment.hpp"
#include "polycover/harness.hpp"
#include "polycover/io.hpp"
#include "polycover/shadows.hpp"
#include "polycover/widths.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <functional>
#include <map>

namespace polycover::cli {

namespace {

using io::Json;

struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    int d = 0;
    int k = 0;
    int n = 3;
    int trials = 0;
    int samples = 1000;
    std::uint64_t seed = 0;
    Scalar tol_geom = Tolerances{}.geom;
    std::string output;
    int workers = 1;

    std::string sampler = "auto";
    bool refine = false;
    bool exact = false;
    bool with_log = false;
    int restarts = 50;
    int directions = 2000;
    std::string cover_out;
    std::string delta_out;
    std::string q_out;
};

Sampler make_sampler(const RunConfig& cfg) {
    const std::map<std::string, SamplerKind> kinds{
        {"auto", SamplerKind::automatic}, {"grid", SamplerKind::grid}, {"haar", SamplerKind::haar}};
    return Sampler{kinds.at(cfg.sampler), cfg.seed};
}

Json fit_result_json(const FitResult& f) {
    return Json{{"sigma", f.sigma},
                {"translation", io::to_json(f.translation)},
                {"status", f.status == FitStatus::ok ? "ok" : "degenerate"}};
}

std::pair<Polytope, Polytope> read_pair(const RunConfig& cfg) {
    Polytope k = io::read_body(cfg.inputs.at(0));
    Polytope l = io::read_body(cfg.inputs.at(1));
    if (k.dim() != l.dim()) throw PreconditionError("bodies live in different dimensions");
    return {std::move(k), std::move(l)};
}

void check_d(int d, int n) {
    if (d < 1 || d > n - 1)
        throw PreconditionError("--d must lie in [1, " + std::to_string(n - 1) + "] for bodies in R^" +
                                std::to_string(n));
}

Json cmd_fit(const RunConfig& cfg, const Tolerances& tol) {
    const auto [k, l] = read_pair(cfg);
    const TranslateFit t = translate_fits(k, l, tol);
    Json j{{"fits", t.fits}, {"sigma", t.sigma}, {"verdict", t.fits ? "fits" : "fails"}};
    j["translation"] = t.witness ? io::to_json(*t.witness) : Json(nullptr);
    j["farkas"] = t.farkas ? io::to_json(*t.farkas) : Json(nullptr);
    j["certified"] = t.certified;
    j["status"] = t.status == FitStatus::ok ? "ok" : "degenerate";
    return j;
}

Json cmd_scale_fit(const RunConfig& cfg, const Tolerances&) {
    const auto [k, l] = read_pair(cfg);
    return fit_result_json(scale_fit(k, l));
}

Json cmd_witness(const RunConfig& cfg, const Tolerances& tol) {
    const auto [k, l] = read_pair(cfg);
    const Polytope kc = canonicalize(k, tol.geom);
    const int kk = cfg.k > 0 ? cfg.k : k.dim() + 1;
    const auto w = subset_witness(kc, l, kk, tol);
    Json j{{"k", kk}, {"all_subsets_fit", !w.has_value()}, {"canonical_vertices", io::body_to_json(kc)}};
    if (w) {
        j["witness"] = *w;
        j["witness_sigma"] = scale_fit(kc.subset(*w), l).sigma;
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json cmd_shadow_sweep(const RunConfig& cfg, const Tolerances& tol) {
    const auto [k, l] = read_pair(cfg);
    check_d(cfg.d, k.dim());
    const Sampler sampler = make_sampler(cfg);
    Json j;
    ShadowReport rep;
    if (cfg.refine) {
        const RefinedSweep r = shadow_sweep_refined(k, l, cfg.d, sampler, cfg.samples, 5, 80, tol);
        rep = r.sweep;
        j["refined_sigma"] = r.refined_sigma;
        j["refined_argmin"] = io::columns_to_json(r.refined_argmin.basis());
        j["verdict"] = to_string(r.verdict);
    } else {
        rep = shadow_sweep(k, l, cfg.d, sampler, cfg.samples, tol);
        j["verdict"] = to_string(rep.verdict);
    }
    j["d"] = rep.d;
    j["samples"] = rep.samples;
    j["sampler"] = rep.sampler;
    j["min_sigma"] = rep.min_sigma;
    j["argmin_index"] = rep.argmin_index;
    j["argmin"] = io::columns_to_json(rep.argmin.basis());
    j["borderline_count"] = rep.borderline_count;
    if (cfg.with_log) j["sigmas"] = rep.sigmas;
    return j;
}

Json cmd_edge_criterion(const RunConfig& cfg, const Tolerances& tol) {
    const auto [q, t] = read_pair(cfg);
    const EdgeCriterion e = simplex_edge_criterion(q, t, tol);
    const TranslateFit fit = translate_fits(q, t, tol);
    return Json{{"holds", e.holds},
                {"min_sigma", e.min_sigma},
                {"worst_direction", io::to_json(e.worst_direction)},
                {"directions", e.directions},
                {"translate_fits", fit.fits},
                {"sigma", fit.sigma}};
}

Json cmd_counterexample(const RunConfig& cfg, const Tolerances& tol, std::ostream& err) {
    const Polytope k = io::read_body(cfg.inputs.at(0));
    if (cfg.workers > 1) err << "warning: multi-worker counterexample runs are not guaranteed reproducible\n";
    CounterexampleOptions opt;
    opt.seed = cfg.seed;
    opt.restarts = cfg.restarts;
    opt.directions = cfg.directions;
    opt.sweep_samples = std::max(cfg.samples, 1000);
    const Counterexample ce = cfg.d > 0 ? build_counterexample_d(k, cfg.d, opt, tol) : build_counterexample(k, opt, tol);
    if (!cfg.cover_out.empty()) io::write_json(cfg.cover_out, io::body_to_json(ce.cover));
    Json j = io::counterexample_to_json(ce, cfg.with_log);
    j["deterministic"] = cfg.workers == 1;
    return j;
}

Json cmd_tetra_quad(const RunConfig& cfg, const Tolerances& tol) {
    const auto [delta, q] = canonical_tetra_quad();
    if (!cfg.delta_out.empty()) io::write_json(cfg.delta_out, io::body_to_json(delta));
    if (!cfg.q_out.empty()) io::write_json(cfg.q_out, io::body_to_json(q));
    const EpsilonGap gap = epsilon_gap(q, delta, direction_grid(3, cfg.directions), tol, 5, 80, cfg.seed);
    return Json{{"delta", io::body_to_json(delta)},
                {"q", io::body_to_json(q)},
                {"touching", verify_touching(q, delta, tol)},
                {"scale_sigma", scale_fit(q, delta).sigma},
                {"epsilon_gap", gap.epsilon},
                {"sampled_min", gap.sampled_min},
                {"gap_directions", gap.directions},
                {"argmin_direction", io::to_json(gap.argmin_direction)}};
}

Json cmd_meanwidth(const RunConfig& cfg, const Tolerances& tol) {
    const Polytope k = io::read_body(cfg.inputs.at(0));
    if (cfg.exact) return Json{{"method", "exact"}, {"mean_width", mean_width_exact(k, tol)}};
    Rng rng(cfg.seed);
    const WidthEstimate w = mean_width_mc(k, cfg.samples, rng);
    return Json{{"method", "monte_carlo"}, {"mean_width", w.value}, {"std_error", w.std_error}, {"samples", w.samples}};
}

Json cmd_kubota(const RunConfig& cfg, const Tolerances& tol) {
    const Polytope k = io::read_body(cfg.inputs.at(0));
    Rng rng(cfg.seed);
    const KubotaReport r = kubota_check(k, cfg.samples, rng, tol);
    return Json{{"exact", r.exact},
                {"shadow_mean", r.shadow_mean},
                {"std_error", r.std_error},
                {"relative_error", r.relative_error},
                {"samples", r.samples}};
}

Json cmd_oblique(const RunConfig& cfg, const Tolerances& tol) {
    const auto [k, l] = read_pair(cfg);
    const int n = k.dim();
    Rng rng(cfg.seed);
    const int trials = cfg.trials > 0 ? cfg.trials : 1;
    Json list = Json::array();
    int disagreements = 0;
    int borderline = 0;
    for (int t = 0; t < trials; ++t) {
        const Matrix m = random_conditioned_map(n, 50.0, rng);
        const Vec u = random_unit(n, rng);
        const ObliqueReport r = oblique_equivalence_check(k, l, m, u, tol);
        if (r.borderline)
            ++borderline;
        else if (!r.agrees)
            ++disagreements;
        list.push_back(Json{{"map", io::columns_to_json(m)},
                            {"direction", io::to_json(u)},
                            {"image_direction", io::to_json(r.image_direction)},
                            {"sigma", r.sigma},
                            {"sigma_image", r.sigma_image},
                            {"verdict", to_string(r.verdict)},
                            {"verdict_image", to_string(r.verdict_image)},
                            {"agrees", r.agrees}});
    }
    return Json{{"disagreements", disagreements}, {"borderline", borderline}, {"trials", std::move(list)}};
}

Json cmd_verify_suite(const RunConfig& cfg, const Tolerances& tol) {
    SuiteOptions opt;
    opt.n = cfg.n;
    opt.trials = cfg.trials > 0 ? cfg.trials : 100;
    opt.seed = cfg.seed;
    opt.sweep_samples = cfg.samples;
    const SuiteReport r = verify_suite(opt, tol);
    Json recs = Json::array();
    for (const SuiteRecord& s : r.records)
        recs.push_back(Json{{"index", s.index},
                            {"kind", s.shadow ? "shadow" : "inscribed"},
                            {"d", s.d},
                            {"sigma", s.sigma},
                            {"other", s.other},
                            {"subset_fits", s.subset_fits},
                            {"other_fits", s.other_fits},
                            {"borderline", s.borderline},
                            {"agrees", s.agrees}});
    return Json{{"n", r.n},
                {"trials", r.trials},
                {"disagreements", r.disagreements},
                {"borderline", r.borderline},
                {"replay_failures", r.replay_failures},
                {"inscribed_trials", r.inscribed_trials},
                {"shadow_trials", r.shadow_trials},
                {"records", std::move(recs)}};
}

Json cmd_corollary(const RunConfig& cfg, const Tolerances& tol) {
    const auto [k, l] = read_pair(cfg);
    const CorollaryReport r = corollary_checks(k, l, cfg.d > 0 ? cfg.d : 2, cfg.samples, tol);
    const auto part = [](const CorollaryOutcome& o) {
        return Json{{"applicable", o.applicable},
                    {"holds", o.applicable ? Json(o.holds) : Json("not applicable")},
                    {"numeric", o.numeric},
                    {"note", o.note}};
    };
    return Json{{"diameter_k", r.diameter_k},
                {"diameter_l", r.diameter_l},
                {"width_k", r.width_k},
                {"width_l", r.width_l},
                {"diameter", part(r.diameter)},
                {"mean_width", part(r.mean_width)}};
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Translative containment of polytopes and their shadows", "polycover"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", cfg.seed, "Random seed (default 0)");
    app.add_option("--samples", cfg.samples, "Sample count (default 1000)")->check(CLI::PositiveNumber);
    app.add_option("--tol-geom", cfg.tol_geom, "Verdict tolerance (default 1e-6)")->check(CLI::PositiveNumber);
    app.add_option("--output", cfg.output, "Write the report to this file instead of stdout");
    app.add_option("--workers", cfg.workers, "Worker threads for sweeps (default 1)")->check(CLI::PositiveNumber);

    const auto pair_cmd = [&](const std::string& name, const std::string& help, const std::string& a,
                              const std::string& b) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option(a, cfg.inputs, a + " and " + b + " body files")->required()->expected(2);
        return sub;
    };
    const auto single_cmd = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("K", cfg.inputs, "Body file")->required()->expected(1);
        return sub;
    };

    pair_cmd("fit", "Does a translate of K fit in L", "K", "L");
    pair_cmd("scale-fit", "Largest t with tK + v inside L", "K", "L");
    pair_cmd("witness", "Vertex subset of K that fits in no translate of L", "K", "L")
        ->add_option("--k", cfg.k, "Subset size (default n+1)");
    CLI::App* sweep = pair_cmd("shadow-sweep", "Sampled d-shadow covering test", "K", "L");
    sweep->add_option("--d", cfg.d, "Shadow dimension")->required();
    sweep->add_option("--sampler", cfg.sampler, "auto, grid or haar")
        ->check(CLI::IsMember({"auto", "grid", "haar"}));
    sweep->add_flag("--refine", cfg.refine, "Refine the smallest samples by local descent");
    sweep->add_flag("--log", cfg.with_log, "Include every sampled sigma");
    pair_cmd("edge-criterion", "Edge-direction test for a simplex target", "Q", "T");
    CLI::App* ce = single_cmd("counterexample", "Shadow-covering simplex that admits no translate");
    ce->add_option("--d", cfg.d, "Shadow dimension (default n-1)");
    ce->add_option("--restarts", cfg.restarts, "Normal selection restarts")->check(CLI::PositiveNumber);
    ce->add_option("--directions", cfg.directions, "Directions for the gap sweep")->check(CLI::Range(4, 1000000));
    ce->add_option("--cover-out", cfg.cover_out, "Write the simplex to this file");
    ce->add_flag("--log", cfg.with_log, "Include the gap sweep log");
    CLI::App* tq = app.add_subcommand("tetra-quad", "Regular tetrahedron and its inscribed quadrilateral");
    tq->add_option("--delta-out", cfg.delta_out, "Write the tetrahedron to this file");
    tq->add_option("--q-out", cfg.q_out, "Write the quadrilateral to this file");
    tq->add_option("--directions", cfg.directions, "Directions for the gap sweep")->check(CLI::Range(4, 1000000));
    single_cmd("meanwidth", "Mean width")->add_flag("--exact", cfg.exact, "Closed form (n = 2, 3)");
    single_cmd("kubota", "Mean width against the average over planar shadows");
    pair_cmd("oblique", "Shadow verdicts under random linear maps", "K", "L")
        ->add_option("--trials", cfg.trials, "Number of maps (default 1)");
    CLI::App* vs = app.add_subcommand("verify-suite", "Randomized subset and shadow equivalence trials");
    vs->add_option("--n", cfg.n, "Ambient dimension (default 3)")->check(CLI::Range(2, 8));
    vs->add_option("--trials", cfg.trials, "Trial count (default 100)");
    pair_cmd("corollary", "Diameter and mean-width corollaries", "K", "L")
        ->add_option("--d", cfg.d, "Shadow dimension (default 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    const auto start = std::chrono::steady_clock::now();
    Tolerances tol;
    tol.geom = cfg.tol_geom;
    set_default_workers(cfg.workers);

    using Handler = std::function<Json()>;
    const std::map<std::string, Handler> handlers{
        {"fit", [&] { return cmd_fit(cfg, tol); }},
        {"scale-fit", [&] { return cmd_scale_fit(cfg, tol); }},
        {"witness", [&] { return cmd_witness(cfg, tol); }},
        {"shadow-sweep", [&] { return cmd_shadow_sweep(cfg, tol); }},
        {"edge-criterion", [&] { return cmd_edge_criterion(cfg, tol); }},
        {"counterexample", [&] { return cmd_counterexample(cfg, tol, err); }},
        {"tetra-quad", [&] { return cmd_tetra_quad(cfg, tol); }},
        {"meanwidth", [&] { return cmd_meanwidth(cfg, tol); }},
        {"kubota", [&] { return cmd_kubota(cfg, tol); }},
        {"oblique", [&] { return cmd_oblique(cfg, tol); }},
        {"verify-suite", [&] { return cmd_verify_suite(cfg, tol); }},
        {"corollary", [&] { return cmd_corollary(cfg, tol); }},
    };

    Json report{{"command", cfg.command},
                {"seed", cfg.seed},
                {"tolerances", {{"feas", tol.feas}, {"geom", tol.geom}}},
                {"samples", cfg.samples},
                {"workers", cfg.workers}};
    int code = 0;
    try {
        report["result"] = handlers.at(cfg.command)();
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        report["error"] = e.what();
        code = 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        report["error"] = e.what();
        code = 3;
    }
    set_default_workers(1);
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    report["timestamp"] = {{"utc", utc_now()}, {"elapsed_ms", elapsed}};

    try {
        if (cfg.output.empty())
            out << report.dump(2) << '\n';
        else
            io::write_json(cfg.output, report);
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("polycover");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace polycover::cli
