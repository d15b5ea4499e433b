// Command-line front end: rendering, cusp classification, and the numerical
// verification suites, all with deterministic seeded sampling.
//
// Exit codes: 0 pass, 1 check failure, 2 usage/schema error,
//             3 numerical non-convergence.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "corrdyn/correspondence.hpp"
#include "corrdyn/cusp.hpp"
#include "corrdyn/external_models.hpp"
#include "corrdyn/render.hpp"
#include "corrdyn/scene.hpp"
#include "corrdyn/verify.hpp"
#include "json.hpp"

using namespace corrdyn;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNonConvergence = 3;

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        std::ofstream out(out_path);
        if (!out) throw DomainError("cannot open output path " + out_path);
        out << j.dump(2) << "\n";
    }
}

json reports_json(const std::vector<CheckReport>& reports) {
    return json::parse(reports_to_json(reports));
}

struct VerifyOpts {
    std::string suite = "all";
    std::string scene_path;
    int d = 2;
    int samples = 500;
    uint64_t seed = 1729;
    double tol = 1e-8;
    int max_iter = 64;
    std::string out;
};

int run_verify(const VerifyOpts& o) {
    std::vector<CheckReport> reports;
    const bool needs_scene = o.suite == "quadrature" || o.suite == "correspondence" ||
                             o.suite == "all";
    std::optional<QuadratureScene> scene;
    if (needs_scene) {
        if (o.scene_path.empty())
            throw DomainError("suite '" + o.suite + "' requires --scene");
        scene = scene_from_file(o.scene_path);
    }
    if (o.suite == "quadrature" || o.suite == "all") {
        auto r = verify_quadrature(*scene, o.samples, o.seed);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (o.suite == "correspondence" || o.suite == "all") {
        auto r = verify_correspondence(*scene, o.samples, o.seed, o.tol, o.max_iter);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (o.suite == "external" || o.suite == "all") {
        const int d = scene ? scene->d() : o.d;
        auto r = verify_external(std::max(d, 2), o.samples, o.seed);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (o.suite == "cusp" || o.suite == "all") {
        auto r = verify_cusp(o.seed);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (reports.empty()) throw DomainError("unknown suite: " + o.suite);

    json spec;
    spec["schema"] = "corrdyn.verify/1";
    spec["command"] = "verify";
    spec["suite"] = o.suite;
    spec["scene"] = o.scene_path;
    spec["d"] = o.d;
    spec["samples"] = o.samples;
    spec["seed"] = o.seed;
    spec["tol"] = o.tol;
    spec["max_iter"] = o.max_iter;
    json summary;
    summary["spec"] = spec;
    summary["results"] = reports_json(reports);
    summary["passed"] = all_passed(reports);
    double worst = 0.0;
    for (const auto& r : reports) worst = std::max(worst, r.max_residual);
    summary["max_residual"] = worst;
    emit(summary, o.out);
    return all_passed(reports) ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"antiholomorphic correspondence dynamics toolkit"};
    app.require_subcommand(1);

    // ---- verify ----
    VerifyOpts vo;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", vo.suite,
                       "quadrature | correspondence | external | cusp | all");
    verify->add_option("--scene", vo.scene_path, "scene JSON path");
    verify->add_option("--d", vo.d, "degree for sceneless suites");
    verify->add_option("--samples", vo.samples, "sample count");
    verify->add_option("--seed", vo.seed, "RNG seed");
    verify->add_option("--tol", vo.tol, "residual tolerance");
    verify->add_option("--max-iter", vo.max_iter, "iteration cap");
    verify->add_option("--out", vo.out, "summary JSON path (default stdout)");

    // ---- classify-cusp ----
    std::string cc_scene, cc_out;
    CLI::App* classify = app.add_subcommand("classify-cusp", "cusp report for a scene");
    classify->add_option("--scene", cc_scene, "scene JSON path")->required();
    classify->add_option("--out", cc_out, "report path (default stdout)");

    // ---- render ----
    struct {
        std::string scene, model = "scene", mode = "schwarz", out = "render.ppm";
        int d = 2, px = 1024, py = 1024, max_iter = 64, threads = 0;
        double center_re = 0.0, center_im = 0.0, width = 4.0;
    } ro;
    CLI::App* render = app.add_subcommand("render", "render a dynamical plane");
    render->add_option("--scene", ro.scene, "scene JSON path (schwarz/lifted modes)");
    render->add_option("--model", ro.model, "scene | pd | bd (julia mode)");
    render->add_option("--mode", ro.mode, "schwarz | lifted | julia");
    render->add_option("--d", ro.d, "model degree (julia mode)");
    render->add_option("--px", ro.px, "width in pixels");
    render->add_option("--py", ro.py, "height in pixels");
    render->add_option("--max-iter", ro.max_iter, "iteration cap");
    render->add_option("--threads", ro.threads, "worker threads (0 = hardware)");
    render->add_option("--center-re", ro.center_re, "view center, real part");
    render->add_option("--center-im", ro.center_im, "view center, imaginary part");
    render->add_option("--width", ro.width, "view width");
    render->add_option("--out", ro.out, "output PPM path");

    // ---- orbit-check ----
    struct {
        std::string scene, out;
        double z_re = 3.0, z_im = 0.4, tol = 1e-8;
        int word_len = 3, max_iter = 64;
    } oo;
    CLI::App* orbit = app.add_subcommand("orbit-check", "group structure on the lifted tiling set");
    orbit->add_option("--scene", oo.scene, "scene JSON path")->required();
    orbit->add_option("--z-re", oo.z_re, "base point, real part");
    orbit->add_option("--z-im", oo.z_im, "base point, imaginary part");
    orbit->add_option("--word-len", oo.word_len, "orbit depth");
    orbit->add_option("--tol", oo.tol, "residual tolerance");
    orbit->add_option("--max-iter", oo.max_iter, "tile rank iteration cap");
    orbit->add_option("--out", oo.out, "summary JSON path");

    // ---- markov ----
    struct {
        int d = 2, conjugacy_depth = 0;
        std::string out, csv, conjugacy_csv;
    } mo;
    CLI::App* markov = app.add_subcommand("markov", "Markov partition of the anti-Farey circle map");
    markov->add_option("--d", mo.d, "degree")->required();
    markov->add_option("--out", mo.out, "JSON path (default stdout)");
    markov->add_option("--csv", mo.csv, "also write the arcs as CSV");
    markov->add_option("--conjugacy-depth", mo.conjugacy_depth,
                       "sample the boundary conjugacy at this preimage-tree depth");
    markov->add_option("--conjugacy-csv", mo.conjugacy_csv, "angle pairs CSV for the conjugacy");

    // ---- ecalle ----
    struct {
        int d = 2, max_iter = 20000;
        double z_re = 0.0, z_im = 0.0, tol = 1e-7;
        std::string out;
    } eo;
    CLI::App* ecalle = app.add_subcommand("ecalle", "Ecalle height in the parabolic basin");
    ecalle->add_option("--d", eo.d, "degree")->required();
    ecalle->add_option("--z-re", eo.z_re, "point, real part");
    ecalle->add_option("--z-im", eo.z_im, "point, imaginary part");
    ecalle->add_option("--max-iter", eo.max_iter, "iteration cap");
    ecalle->add_option("--tol", eo.tol, "stability tolerance");
    ecalle->add_option("--out", eo.out, "summary JSON path");

    // ---- tuple-check ----
    struct {
        std::string scene, out;
        double w_re = 4.0, w_im = 0.0, tol = 1e-8;
    } to;
    CLI::App* tuple = app.add_subcommand("tuple-check", "map-of-tuples identity at a fiber");
    tuple->add_option("--scene", to.scene, "scene JSON path")->required();
    tuple->add_option("--w-re", to.w_re, "fiber base point, real part");
    tuple->add_option("--w-im", to.w_im, "fiber base point, imaginary part");
    tuple->add_option("--tol", to.tol, "matching tolerance");
    tuple->add_option("--out", to.out, "summary JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*verify) return run_verify(vo);

        if (*classify) {
            QuadratureScene sc = scene_from_file(cc_scene);
            LocalCuspData lc = quad_cusp_report(sc);
            json j = json::parse(cusp_report_to_json(lc.report));
            j["schema"] = "corrdyn.classify-cusp/1";
            j["scene"] = cc_scene;
            j["cusp"] = {lc.cusp.real(), lc.cusp.imag()};
            j["circle_critical_point"] = {lc.p.real(), lc.p.imag()};
            emit(j, cc_out);
            return kExitPass;
        }

        if (*render) {
            RenderConfig cfg;
            cfg.center = Cx(ro.center_re, ro.center_im);
            cfg.width = ro.width;
            cfg.px = ro.px;
            cfg.py = ro.py;
            cfg.max_iter = ro.max_iter;
            cfg.threads = ro.threads;
            const auto t0 = std::chrono::steady_clock::now();
            ImageBuffer img;
            std::string scene_id;
            int non_escaping_components = -1;
            double indeterminate = 0.0;
            if (ro.mode == "schwarz" || ro.mode == "lifted") {
                if (ro.scene.empty()) throw DomainError("render: this mode requires --scene");
                QuadratureScene sc = scene_from_file(ro.scene);
                scene_id = fnv1a_hex(scene_to_json(sc));
                cfg.mode = ro.mode == "schwarz" ? RenderMode::SchwarzTiles
                                                : RenderMode::LiftedPartition;
                LabelGrid grid = ro.mode == "schwarz" ? render_schwarz_labels(sc, cfg)
                                                      : render_lifted_labels(sc, cfg);
                // heuristic connected-component count of the sampled
                // non-escaping set; simple connectivity of the tiling set is
                // not machine-decided
                std::vector<uint8_t> mask(grid.at.size(), 0);
                for (size_t i = 0; i < grid.at.size(); ++i)
                    mask[i] = grid.at[i] == label::kNonEscaping;
                non_escaping_components = count_components(grid, mask);
                indeterminate = indeterminate_fraction(grid);
                img = colorize(grid, cfg, scene_id);
            } else if (ro.mode == "julia") {
                cfg.mode = RenderMode::AntiRationalJulia;
                AntiRationalModel model = ro.model == "bd" ? blaschke_basin_model(ro.d)
                                                           : parabolic_julia_model(ro.d);
                scene_id = ro.model + "/" + std::to_string(ro.d);
                img = render_julia(model, cfg);
            } else {
                throw DomainError("render: unknown mode " + ro.mode);
            }
            const auto t1 = std::chrono::steady_clock::now();
            write_ppm(img, ro.out);
            json side;
            side["schema"] = "corrdyn.render/1";
            side["mode"] = ro.mode;
            side["scene"] = ro.scene.empty() ? scene_id : ro.scene;
            side["scene_hash"] = scene_id;
            side["center"] = {ro.center_re, ro.center_im};
            side["width"] = ro.width;
            side["px"] = ro.px;
            side["py"] = ro.py;
            side["max_iter"] = ro.max_iter;
            side["image"] = ro.out;
            side["image_hash"] = fnv1a_hex(ppm_bytes(img));
            if (non_escaping_components >= 0) {
                side["non_escaping_components"] = non_escaping_components;
                side["indeterminate_fraction"] = indeterminate;
            }
            side["timing_ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
            emit(side, ro.out + ".json");
            return kExitPass;
        }

        if (*orbit) {
            QuadratureScene sc = scene_from_file(oo.scene);
            OrbitCheckReport rep =
                group_orbit_check(sc, SpherePt(Cx(oo.z_re, oo.z_im)), oo.word_len, oo.tol,
                                  oo.max_iter);
            json j;
            j["schema"] = "corrdyn.orbit-check/1";
            j["scene"] = oo.scene;
            j["z"] = {oo.z_re, oo.z_im};
            j["word_len"] = oo.word_len;
            j["branch_set_identity"] = rep.branch_set_identity;
            j["branch_set_distance"] = rep.branch_set_distance;
            j["orbit_points"] = rep.orbit_points;
            j["all_tile_rank"] = rep.all_tile_rank;
            j["indeterminate"] = rep.indeterminate;
            j["inconclusive"] = rep.inconclusive;
            j["passed"] = rep.passed;
            emit(j, oo.out);
            return rep.passed ? kExitPass : kExitCheckFailure;
        }

        if (*markov) {
            MarkovPartition mp = markov_partition(mo.d);
            if (!mo.csv.empty()) {
                std::ofstream csv(mo.csv);
                if (!csv) throw DomainError("cannot open " + mo.csv);
                csv << markov_to_csv(mp);
            }
            json j = json::parse(markov_to_json(mp));
            j["schema"] = "corrdyn.markov/1";
            bool conj_ok = true;
            if (mo.conjugacy_depth > 0) {
                BoundaryConjugacy bc = boundary_conjugacy(mo.d, mo.conjugacy_depth);
                if (!mo.conjugacy_csv.empty()) {
                    std::ofstream csv(mo.conjugacy_csv);
                    if (!csv) throw DomainError("cannot open " + mo.conjugacy_csv);
                    csv << conjugacy_to_csv(bc);
                }
                j["conjugacy"] = json::parse(conjugacy_to_json(bc));
                conj_ok = bc.order_violations == 0 && bc.itinerary_consistent;
            }
            emit(j, mo.out);
            return (is_primitive(mp.transition) && conj_ok) ? kExitPass : kExitCheckFailure;
        }

        if (*ecalle) {
            FatouSample fs = fatou_coordinate(eo.d, Cx(eo.z_re, eo.z_im), eo.max_iter, eo.tol);
            json j;
            j["schema"] = "corrdyn.ecalle/1";
            j["d"] = eo.d;
            j["z"] = {eo.z_re, eo.z_im};
            j["height"] = fs.phi.imag();
            j["phi"] = {fs.phi.real(), fs.phi.imag()};
            j["iterations_used"] = fs.iterations_used;
            j["stability"] = fs.stability;
            emit(j, eo.out);
            return kExitPass;
        }

        if (*tuple) {
            QuadratureScene sc = scene_from_file(to.scene);
            TupleCheck tc = tuple_check(sc, SpherePt(Cx(to.w_re, to.w_im)), to.tol);
            json j;
            j["schema"] = "corrdyn.tuple-check/1";
            j["scene"] = to.scene;
            j["w"] = {to.w_re, to.w_im};
            j["tuple_size"] = tc.tuple_size;
            j["max_matching_distance"] = tc.max_matching_distance;
            j["passed"] = tc.passed;
            emit(j, to.out);
            return tc.passed ? kExitPass : kExitCheckFailure;
        }
    } catch (const NonConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << " (residual " << e.residual << ")\n";
        return kExitNonConvergence;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "check error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    return kExitUsage;
}
