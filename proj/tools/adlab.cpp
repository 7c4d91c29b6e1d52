#include <chrono>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adlab/config.hpp"
#include "adlab/emit.hpp"
#include "adlab/operator_lab.hpp"
#include "adlab/version.hpp"

namespace {

using namespace adlab;

std::string kind_name(ParamKind k) {
    switch (k) {
        case ParamKind::scalar_alpha: return "scalar_alpha";
        case ParamKind::alpha1: return "alpha1";
        case ParamKind::gamma: return "gamma";
    }
    return "?";
}

nlohmann::ordered_json point_json(const BifurcationPoint& bp) {
    nlohmann::ordered_json j;
    j["kind"] = kind_name(bp.kind);
    j["value"] = bp.value;
    j["k"] = bp.k;
    if (bp.c) j["c"] = *bp.c;
    j["curvature"] = bp.curvature;
    j["criticality"] = bp.criticality == Criticality::supercritical ? "supercritical" : "subcritical";
    j["phase"] = bp.phase == Phase::in_phase      ? "in_phase"
                 : bp.phase == Phase::out_of_phase ? "out_of_phase"
                                                   : "n/a";
    j["simple"] = bp.simple;
    return j;
}

ParamKind parse_param(const std::string& s) {
    if (s == "alpha1") return ParamKind::alpha1;
    if (s == "gamma") return ParamKind::gamma;
    if (s == "alpha-scalar") return ParamKind::scalar_alpha;
    throw CLI::ValidationError("--param must be one of alpha1|gamma|alpha-scalar");
}

std::vector<BifurcationPoint> catalog_for(const RunConfig& cfg, ParamKind kind,
                                          const SpectralKernel& ker) {
    if (kind == ParamKind::scalar_alpha) {
        if (cfg.model != ModelKind::scalar)
            throw std::invalid_argument("alpha-scalar requires [model] type = scalar");
        return scalar_points(cfg.scalar_params(), ker);
    }
    if (cfg.model != ModelKind::two_species)
        throw std::invalid_argument("alpha1/gamma require [model] type = two_species");
    if (kind == ParamKind::alpha1) return alpha1_points(cfg.two_params(), ker).points;
    return gamma_points(cfg.two_params(), ker).points;
}

struct RangeSpec {
    double a = 0, b = 0;
    int steps = 0;
};

RangeSpec parse_range(const std::string& s) {
    RangeSpec r;
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 == std::string::npos ? std::string::npos : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw CLI::ValidationError("--range must be a:b:steps");
    r.a = std::stod(s.substr(0, c1));
    r.b = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    r.steps = std::stoi(s.substr(c2 + 1));
    if (r.steps < 1) throw CLI::ValidationError("--range steps must be >= 1");
    return r;
}

GridState seeded_state(const RunConfig& cfg) {
    const TorusGrid g = cfg.grid();
    GridState u0 = GridState::homogeneous(g, cfg.model == ModelKind::two_species);
    const double norm = std::sqrt(2.0 / g.L);
    for (int j = 0; j < g.N; ++j) {
        const double wk =
            norm * std::cos(2.0 * 3.14159265358979323846 * cfg.seed_mode * g.node(j) / g.L);
        u0.u1[j] += cfg.seed_amplitude * wk;
        if (!u0.u2.empty()) u0.u2[j] += cfg.seed_amplitude * wk;
    }
    return u0;
}

void emit_table(const RunConfig& cfg, const std::string& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
    if (cfg.format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json obj;
            for (size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
            arr.push_back(obj);
        }
        emit_json(path, arr);
    } else {
        std::vector<std::vector<std::string>> cells;
        cells.reserve(rows.size());
        for (const auto& row : rows) {
            std::vector<std::string> r;
            for (double v : row) r.push_back(format_double(v));
            cells.push_back(std::move(r));
        }
        emit_csv(path, header, cells);
    }
}

nlohmann::ordered_json probe_json(const DerivativeProbe& pr) {
    nlohmann::ordered_json j;
    j["label"] = pr.label;
    j["order"] = pr.order;
    j["analytic"] = pr.analytic;
    j["fd"] = pr.fd;
    j["rel_err"] = pr.rel_err;
    j["fd_step"] = pr.step;
    j["plateau_flagged"] = pr.plateau_flagged;
    j["inconclusive"] = pr.inconclusive;
    return j;
}

}    // namespace

int main(int argc, char** argv) {
    CLI::App app{"adlab: 1-D periodic aggregation-diffusion laboratory"};
    app.set_version_flag("--version", ADLAB_VERSION);
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path, out_override, format_override, param_str = "alpha1";
    int threads = 1;
    long seed = 0;
    app.add_option("--config", config_path, "configuration file (sectioned key=value or JSON)");
    app.add_option("--out", out_override, "output path (overrides [output] path)");
    app.add_option("--format", format_override, "csv or json (overrides [output] format)");
    app.add_option("--seed", seed, "seed for randomized property sweeps");
    app.add_option("--threads", threads, "worker threads for parallel kernels");

    auto* sc_spectrum = app.add_subcommand("spectrum", "dispersion relation lambda(k)");
    int kmax_flag = 0;
    sc_spectrum->add_option("--k-max", kmax_flag, "scan limit (default: config K_max)");

    auto* sc_region = app.add_subcommand("stability-region", "stability-region boundary polylines");
    double gamma_flag = -1.0;
    int samples = 200;
    sc_region->add_option("--gamma", gamma_flag, "cross-interaction level (default: config gamma)");
    sc_region->add_option("--samples", samples, "points per boundary curve");

    auto* sc_bif = app.add_subcommand("bifurcate", "local bifurcation catalog");
    sc_bif->add_option("--param", param_str, "alpha1|gamma|alpha-scalar");

    auto* sc_cont = app.add_subcommand("continue", "natural continuation from a bifurcation point");
    int from_index = 0;
    std::string range_str;
    sc_cont->add_option("--param", param_str, "alpha1|gamma|alpha-scalar");
    sc_cont->add_option("--from", from_index, "index into the sorted catalog");
    sc_cont->add_option("--range", range_str, "a:b:steps")->required();

    auto* sc_sim = app.add_subcommand("simulate", "time integration with diagnostics");
    double tend_flag = -1.0, dt_flag = -1.0;
    int n_flag = 0;
    std::string snapshots_str;
    sc_sim->add_option("--t-end", tend_flag, "final time (default: config t_end)");
    sc_sim->add_option("--dt", dt_flag, "time step (default: config dt)");
    sc_sim->add_option("--n", n_flag, "grid size (default: config N)");
    sc_sim->add_option("--snapshots", snapshots_str, "comma-separated snapshot times");

    auto* sc_frechet = app.add_subcommand("frechet-check", "Frechet-derivative probes at a catalog point");
    int point_index = 0;
    sc_frechet->add_option("--param", param_str, "alpha1|gamma|alpha-scalar");
    sc_frechet->add_option("--point", point_index, "index into the sorted catalog");

    auto* sc_presets = app.add_subcommand("presets", "preset management");
    auto* sc_presets_list = sc_presets->add_subcommand("list", "list presets and their bindings");

    const auto t0 = std::chrono::steady_clock::now();
    std::string command;
    for (int i = 0; i < argc; ++i) command += std::string(i ? " " : "") + argv[i];

    try {
        app.parse(argc, argv);
        set_threads(threads);

        if (sc_presets->parsed()) {
            if (sc_presets_list->parsed() || sc_presets->get_subcommands().empty()) {
                for (const auto& name : preset_names()) {
                    std::cout << name << ": " << preset_config(name).to_json().dump() << "\n";
                }
            }
            return 0;
        }

        if (config_path.empty()) throw CLI::ValidationError("--config is required");
        RunConfig cfg = load_config(config_path);
        if (!out_override.empty()) cfg.out_path = out_override;
        if (!format_override.empty()) cfg.format = format_override;
        cfg.validate();
        const SpectralKernel ker = cfg.spectral();

        if (sc_spectrum->parsed()) {
            const int K = kmax_flag > 0 ? std::min(kmax_flag, ker.kmax()) : ker.kmax();
            std::vector<std::vector<double>> rows;
            for (int k = 1; k <= K; ++k) {
                double lm, lp;
                if (cfg.model == ModelKind::scalar) {
                    lm = lp = scalar_eigenvalue(cfg.scalar_params(), ker, k);
                } else {
                    std::tie(lm, lp) = two_species_eigenvalues(cfg.two_params(), ker, k);
                }
                rows.push_back({static_cast<double>(k), lm, lp});
            }
            emit_table(cfg, cfg.out_path, {"k", "lambda_minus", "lambda_plus"}, rows);
        } else if (sc_region->parsed()) {
            const KernelSummary sum = kernel_summary(ker, cfg.sigma, cfg.L);
            const double g = gamma_flag >= 0.0 ? gamma_flag : cfg.gamma;
            const RegionBoundary rb = region_boundary(sum, g, samples);
            if (cfg.format == "json") {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                auto push = [&](const char* branch, const std::array<double, 2>& pt) {
                    arr.push_back({{"branch", branch}, {"chi1a1", pt[0]}, {"chi2a2", pt[1]}});
                };
                for (const auto& pt : rb.upper) push("upper", pt);
                for (const auto& pt : rb.lower) push("lower", pt);
                emit_json(cfg.out_path, arr);
            } else {
                std::vector<std::vector<std::string>> cells;
                for (const auto& pt : rb.upper)
                    cells.push_back({"upper", format_double(pt[0]), format_double(pt[1])});
                for (const auto& pt : rb.lower)
                    cells.push_back({"lower", format_double(pt[0]), format_double(pt[1])});
                emit_csv(cfg.out_path, {"branch", "chi1a1", "chi2a2"}, cells);
            }
        } else if (sc_bif->parsed()) {
            const auto pts = catalog_for(cfg, parse_param(param_str), ker);
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& bp : pts) arr.push_back(point_json(bp));
            emit_json(cfg.out_path, arr);
        } else if (sc_cont->parsed()) {
            const ParamKind kind = parse_param(param_str);
            const auto pts = catalog_for(cfg, kind, ker);
            if (from_index < 0 || from_index >= static_cast<int>(pts.size()))
                throw std::invalid_argument("--from index outside the catalog (size " +
                                            std::to_string(pts.size()) + ")");
            const RangeSpec r = parse_range(range_str);
            BranchTrace trace;
            if (kind == ParamKind::scalar_alpha)
                trace = trace_branch(cfg.scalar_params(), ker, pts[from_index], r.a, r.b, r.steps,
                                     cfg.grid(), cfg.solver_options());
            else
                trace = trace_branch(cfg.two_params(), ker, pts[from_index], r.a, r.b, r.steps,
                                     cfg.grid(), cfg.solver_options());
            std::vector<std::vector<double>> rows;
            for (const auto& s : trace.samples)
                rows.push_back({s.nu, s.amplitude, s.free_energy, s.residual,
                                static_cast<double>(s.iters)});
            emit_table(cfg, cfg.out_path, {"nu", "amplitude", "free_energy", "residual", "iters"}, rows);
            if (trace.truncated) std::cerr << "note: " << trace.diagnostic << "\n";
        } else if (sc_sim->parsed()) {
            StepperOptions opts = cfg.stepper_options();
            if (tend_flag > 0.0) opts.t_end = tend_flag;
            if (dt_flag > 0.0) opts.dt = dt_flag;
            if (n_flag > 0) cfg.N = n_flag, opts.N = n_flag;
            if (!snapshots_str.empty()) {
                std::stringstream ss(snapshots_str);
                std::string tok;
                while (std::getline(ss, tok, ',')) opts.snapshot_times.push_back(std::stod(tok));
            }
            const GridState u0 = seeded_state(cfg);
            const Trajectory traj = cfg.model == ModelKind::scalar
                                        ? simulate(u0, cfg.scalar_params(), ker, opts)
                                        : simulate(u0, cfg.two_params(), ker, opts);
            std::vector<std::vector<double>> rows;
            for (const auto& s : traj.samples)
                rows.push_back({s.t, s.mass_err1, s.mass_err2, s.min_u, s.H, s.F, s.l2_dist});
            emit_table(cfg, cfg.out_path,
                       {"t", "mass_err_1", "mass_err_2", "min_u", "H", "F", "l2_dist"}, rows);
            for (const auto& [ts, st] : traj.snapshots) {
                std::vector<std::vector<std::string>> cells;
                for (int j = 0; j < st.grid.N; ++j) {
                    std::vector<std::string> row{format_double(st.grid.node(j)),
                                                 format_double(st.u1[j])};
                    if (!st.u2.empty()) row.push_back(format_double(st.u2[j]));
                    cells.push_back(std::move(row));
                }
                std::vector<std::string> header{"x", "u1"};
                if (!traj.final_state.u2.empty()) header.push_back("u2");
                emit_csv("state_t" + format_double(ts) + ".csv", header, cells);
            }
            if (!traj.diagnostic.empty()) std::cerr << "note: " << traj.diagnostic << "\n";
        } else if (sc_frechet->parsed()) {
            const ParamKind kind = parse_param(param_str);
            const auto pts = catalog_for(cfg, kind, ker);
            if (point_index < 0 || point_index >= static_cast<int>(pts.size()))
                throw std::invalid_argument("--point index outside the catalog (size " +
                                            std::to_string(pts.size()) + ")");
            const BifurcationPoint bp = pts[point_index];
            const TorusGrid grid = cfg.grid();
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            if (kind == ParamKind::scalar_alpha) {
                ScalarParams sp = cfg.scalar_params();
                sp.alpha = bp.value;
                for (int order = 1; order <= 3; ++order)
                    arr.push_back(probe_json(fd_frechet(sp, ker, grid, order, bp.k)));
                arr.push_back(probe_json(third_inner_product(sp, ker, grid, bp.k)));
                for (const auto& pr : mixed_derivative_checks(sp, ker, grid, bp))
                    arr.push_back(probe_json(pr));
                arr.push_back(probe_json(curvature_crosscheck(bp, sp, ker, grid)));
            } else {
                TwoSpeciesParams tp = cfg.two_params();
                if (kind == ParamKind::alpha1)
                    tp.alpha1 = bp.value;
                else
                    tp.gamma = bp.value;
                const double c = bp.c.value_or(1.0);
                for (int order = 1; order <= 3; ++order)
                    arr.push_back(probe_json(fd_frechet(tp, ker, grid, order, bp.k, c)));
                arr.push_back(probe_json(quadratic_inner_product(tp, ker, grid, bp.k, c)));
                arr.push_back(probe_json(third_inner_product(tp, ker, grid, bp.k, c)));
                for (const auto& pr : mixed_derivative_checks(tp, ker, grid, bp))
                    arr.push_back(probe_json(pr));
                arr.push_back(probe_json(curvature_crosscheck(bp, tp, ker, grid)));
            }
            emit_json(cfg.out_path, arr);
        }

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_meta_sidecar(cfg.out_path, cfg, wall, command);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
