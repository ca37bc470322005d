// Command-line front end: curve invariants and reconstruction, geodesics,
// surface reports and reconstruction, Crofton Monte Carlo.
//
// Exit codes: 0 success, 1 I/O or parse error, 2 domain error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heis/io.hpp"

namespace {

int log_level() {
    const char* env = std::getenv("HEIS_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[heis] " << msg << '\n';
}

struct RunConfig {
    std::string input;
    std::string output;
    std::string frames_out;
    std::string invariants_out;
    std::string summary_out;
    std::string frame_json;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    double step = 1e-3;
    double tol = 1e-6;
    unsigned threads = 1;
    // geodesic parameters
    double c3 = 0.0, a1 = 1.0, a2 = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
    double t0 = 0.0, t1 = 1.0;
    std::size_t n_nodes = 1001;
    bool emit_config = false;

    nlohmann::json to_json() const {
        return {{"input", input},       {"output", output},     {"frames_out", frames_out},
                {"invariants_out", invariants_out}, {"summary_out", summary_out},
                {"frame", frame_json},  {"samples", samples},   {"seed", seed},
                {"step", step},         {"tol", tol},           {"threads", threads},
                {"c3", c3},             {"a1", a1},             {"a2", a2},
                {"d1", d1},             {"d2", d2},             {"d3", d3},
                {"t0", t0},             {"t1", t1},             {"n", n_nodes}};
    }
};

// Config-file precedence: values from --config act as defaults, explicit
// command-line flags override them.
void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::istringstream is(heis::io::slurp_file(path));
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw heis::ParseError(std::string("config file: ") + e.what());
    }
    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("input", cfg.input);
    get("output", cfg.output);
    get("frames_out", cfg.frames_out);
    get("invariants_out", cfg.invariants_out);
    get("summary_out", cfg.summary_out);
    get("frame", cfg.frame_json);
    get("samples", cfg.samples);
    get("seed", cfg.seed);
    get("step", cfg.step);
    get("tol", cfg.tol);
    get("threads", cfg.threads);
    get("c3", cfg.c3);
    get("a1", cfg.a1);
    get("a2", cfg.a2);
    get("d1", cfg.d1);
    get("d2", cfg.d2);
    get("d3", cfg.d3);
    get("t0", cfg.t0);
    get("t1", cfg.t1);
    get("n", cfg.n_nodes);
}

heis::CurveTrace load_curve(const std::string& path) {
    std::istringstream is(heis::io::slurp_file(path));
    return heis::io::read_curve_csv(is);
}

heis::OrientedFrame load_initial_frame(const RunConfig& cfg) {
    if (cfg.frame_json.empty()) return heis::OrientedFrame{};  // standard frame at origin
    std::istringstream is(heis::io::slurp_file(cfg.frame_json));
    return heis::motion_to_frame(heis::io::read_motion_json(is));
}

int cmd_curve_invariants(const RunConfig& cfg) {
    const auto curve = load_curve(cfg.input);
    const auto sig = heis::invariants(curve);
    std::ostringstream os;
    heis::io::write_signature_csv(os, sig);
    heis::io::spit_file(cfg.output, os.str());
    log_info("wrote " + cfg.output);
    return 0;
}

int cmd_curve_reconstruct(const RunConfig& cfg) {
    std::istringstream is(heis::io::slurp_file(cfg.input));
    const auto sig = heis::io::read_signature_csv(is);
    const auto rec = heis::reconstruct(sig, load_initial_frame(cfg));

    std::ostringstream os;
    heis::io::write_curve_csv(os, rec.curve);
    heis::io::spit_file(cfg.output, os.str());
    if (!cfg.frames_out.empty()) {
        std::ostringstream fs;
        heis::io::write_frame_field_json(fs, rec.frames);
        heis::io::spit_file(cfg.frames_out, fs.str());
    }

    const auto back = heis::invariants(rec.curve);
    double res = 0.0;
    for (std::size_t i = 0; i < sig.arc.size(); ++i) {
        res = std::max(res, std::abs(back.k[i] - sig.k[i]));
        res = std::max(res, std::abs(back.tau[i] - sig.tau[i]));
    }
    std::cout << "round_trip_residual " << heis::io::format_double(res) << '\n';
    return 0;
}

int cmd_geodesic(const RunConfig& cfg) {
    std::vector<double> grid(cfg.n_nodes);
    for (std::size_t i = 0; i < cfg.n_nodes; ++i)
        grid[i] = cfg.t0 + (cfg.t1 - cfg.t0) * static_cast<double>(i) /
                               static_cast<double>(cfg.n_nodes - 1);
    const auto curve =
        heis::geodesic({cfg.c3, cfg.a1, cfg.a2, cfg.d1, cfg.d2, cfg.d3}, grid);
    std::ostringstream os;
    heis::io::write_curve_csv(os, curve);
    heis::io::spit_file(cfg.output, os.str());
    log_info("wrote " + cfg.output);
    return 0;
}

int cmd_surface_report(const RunConfig& cfg) {
    std::istringstream is(heis::io::slurp_file(cfg.input));
    const auto grid = heis::io::read_grid_json(is);
    const auto coef = heis::coefficients(grid);
    const auto inv = heis::invariants(grid, coef);
    const auto integ = heis::integrability_residual(coef);
    const auto pmin = heis::pminimal_residual(coef);
    const auto surf = heis::surface_integrability_residual(inv, coef);

    std::ostringstream cs;
    heis::io::write_coefficients_csv(cs, coef);
    heis::io::spit_file(cfg.output, cs.str());

    if (!cfg.invariants_out.empty()) {
        std::ostringstream os2;
        os2 << "i,j,alpha,l,g11,g12,g22,K\n";
        for (std::size_t i = 0; i < inv.nu; ++i)
            for (std::size_t j = 0; j < inv.nv; ++j) {
                const std::size_t k = inv.idx(i, j);
                os2 << i << ',' << j << ',' << heis::io::format_double(inv.alpha[k]) << ','
                    << heis::io::format_double(inv.pmean[k]) << ','
                    << heis::io::format_double(inv.g11[k]) << ','
                    << heis::io::format_double(inv.g12[k]) << ','
                    << heis::io::format_double(inv.g22[k]) << ','
                    << heis::io::format_double(inv.gauss[k]) << '\n';
            }
        heis::io::spit_file(cfg.invariants_out, os2.str());
    }

    double max_int = 0.0, max_pmin = 0.0, max_surf = 0.0, max_l = 0.0;
    std::size_t masked = 0;
    for (std::size_t k = 0; k < integ.size(); ++k) {
        max_int = std::max(max_int, integ[k]);
        max_pmin = std::max(max_pmin, pmin[k]);
        max_l = std::max(max_l, std::abs(coef.l[k]));
        if (inv.masked[k])
            ++masked;
        else
            max_surf = std::max(max_surf, surf[k]);
    }
    const nlohmann::json summary{
        {"max_integrability_residual", max_int},
        {"max_pminimal_residual", max_pmin},
        {"max_surface_integrability_residual", max_surf},
        {"p_minimal", max_pmin <= cfg.tol && max_l <= cfg.tol},
        {"masked_nodes", masked},
        {"p_area", heis::p_area(grid)}};
    const std::string text = summary.dump(1) + "\n";
    if (cfg.summary_out.empty())
        std::cout << text;
    else
        heis::io::spit_file(cfg.summary_out, text);
    return 0;
}

int cmd_surface_reconstruct(const RunConfig& cfg) {
    std::istringstream is(heis::io::slurp_file(cfg.input));
    const auto coef = heis::io::read_coefficients_csv(is);
    const auto grid = heis::reconstruct_surface(coef, load_initial_frame(cfg));
    std::ostringstream os;
    heis::io::write_grid_json(os, grid);
    heis::io::spit_file(cfg.output, os.str());
    log_info("wrote " + cfg.output);
    return 0;
}

int cmd_crofton(const RunConfig& cfg) {
    heis::TriMesh mesh;
    double area = 0.0;
    if (cfg.input.size() > 4 && cfg.input.substr(cfg.input.size() - 4) == ".obj") {
        std::istringstream is(heis::io::slurp_file(cfg.input));
        mesh = heis::io::read_obj(is);
        area = heis::mesh_p_area(mesh);
    } else {
        std::istringstream is(heis::io::slurp_file(cfg.input));
        const auto grid = heis::io::read_grid_json(is);
        mesh = heis::make_tri_mesh(grid);
        area = heis::p_area(grid);
    }
    const auto est =
        heis::crofton_estimate(mesh, cfg.samples, cfg.seed, nullptr, cfg.threads);
    std::ostringstream os;
    heis::io::write_estimate_json(os, est, area);
    if (cfg.output.empty())
        std::cout << os.str();
    else
        heis::io::spit_file(cfg.output, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string config_path;

    // preliminary scan so file values act as defaults under CLI overrides
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];

    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path);
    } catch (const heis::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    CLI::App app{"Moving-frame calculus in the Heisenberg group H1"};
    app.require_subcommand(1);
    app.add_option("--config", config_path, "JSON config file (defaults, overridden by flags)");

    auto add_common = [&](CLI::App* sub, bool needs_input, bool needs_output) {
        auto* in = sub->add_option("--input,-i", cfg.input, "input file");
        auto* out = sub->add_option("--output,-o", cfg.output, "output file");
        if (needs_input && cfg.input.empty()) in->required();
        if (needs_output && cfg.output.empty()) out->required();
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
        sub->add_option("--step", cfg.step, "step size");
        sub->add_option("--tol", cfg.tol, "tolerance");
        sub->add_option("--threads", cfg.threads, "worker count (results are identical)");
        sub->add_option("--config", config_path, "JSON config file (defaults, overridden by flags)");
        sub->add_flag("--emit-config", cfg.emit_config, "print the resolved config to stdout");
    };

    auto* ci = app.add_subcommand("curve-invariants", "curve CSV -> signature CSV");
    add_common(ci, true, true);

    auto* cr = app.add_subcommand("curve-reconstruct", "signature CSV -> curve CSV");
    add_common(cr, true, true);
    cr->add_option("--frame", cfg.frame_json, "initial frame as motion JSON");
    cr->add_option("--frames-out", cfg.frames_out, "frame field JSON output");

    auto* ge = app.add_subcommand("geodesic", "closed-form geodesic -> curve CSV");
    add_common(ge, false, true);
    auto* ge_step = ge->get_option("--step");
    ge->add_option("--c3", cfg.c3, "geodesic parameter c3");
    ge->add_option("--a1", cfg.a1, "amplitude a1");
    ge->add_option("--a2", cfg.a2, "amplitude a2");
    ge->add_option("--d1", cfg.d1, "offset d1");
    ge->add_option("--d2", cfg.d2, "offset d2");
    ge->add_option("--d3", cfg.d3, "offset d3");
    ge->add_option("--t0", cfg.t0, "grid start");
    ge->add_option("--t1", cfg.t1, "grid end");
    ge->add_option("--n", cfg.n_nodes, "grid size");

    auto* sr = app.add_subcommand("surface-report", "grid JSON -> coefficients + residuals");
    add_common(sr, true, true);
    sr->add_option("--invariants-out", cfg.invariants_out, "invariants CSV output");
    sr->add_option("--summary-out", cfg.summary_out, "residual summary JSON (default stdout)");

    auto* sc = app.add_subcommand("surface-reconstruct", "coefficients CSV -> grid JSON");
    add_common(sc, true, true);
    sc->add_option("--frame", cfg.frame_json, "initial frame as motion JSON");

    auto* cf = app.add_subcommand("crofton", "grid JSON or OBJ -> estimate JSON");
    add_common(cf, true, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (cfg.emit_config) std::cout << cfg.to_json().dump(1) << '\n';

    try {
        if (ci->parsed()) return cmd_curve_invariants(cfg);
        if (cr->parsed()) return cmd_curve_reconstruct(cfg);
        if (ge->parsed()) {
            if (ge_step->count() > 0 && cfg.step > 0.0)
                cfg.n_nodes = std::max<std::size_t>(
                    2, static_cast<std::size_t>(std::llround((cfg.t1 - cfg.t0) / cfg.step)) + 1);
            return cmd_geodesic(cfg);
        }
        if (sr->parsed()) return cmd_surface_report(cfg);
        if (sc->parsed()) return cmd_surface_reconstruct(cfg);
        if (cf->parsed()) return cmd_crofton(cfg);
    } catch (const heis::NotHorizontallyRegular& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const heis::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const heis::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
