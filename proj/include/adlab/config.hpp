#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "adlab/dynamics.hpp"
#include "adlab/kernels.hpp"
#include "adlab/stability.hpp"
#include "adlab/stationary.hpp"

namespace adlab {

enum class ModelKind { scalar, two_species };

/// One validated configuration serving every subcommand. Sections irrelevant
/// to a subcommand are permitted but still validated.
struct RunConfig {
    ModelKind model = ModelKind::two_species;
    double sigma = 1.0;
    double L = 2.0 * 3.14159265358979323846;

    KernelSpec kernel = KernelSpec::cosine(1, -1.0);
    std::string tabulated_path;    // kernel source when type = tabulated

    // [params]
    double alpha = 0.0;            // scalar model
    double alpha1 = 0.0, alpha2 = 0.0, gamma = 0.0;
    int chi1 = +1, chi2 = +1;

    // [solver]
    int N = 256;
    int K_max = 128;
    double theta = 0.5;
    double tol = 1e-10;
    int max_iter = 100000;
    double dt = 0.01;
    double t_end = 100.0;
    bool dealias = true;
    double sample_every = 0.5;
    int seed_mode = 1;             // CLI simulate: u0 = 1/L + seed_amplitude * w_{seed_mode}
    double seed_amplitude = 1e-3;

    // [output]
    std::string out_path = "out.csv";
    std::string format = "csv";

    std::string preset;    // name this config was expanded from, if any

    void validate() const;

    ScalarParams scalar_params() const;
    TwoSpeciesParams two_params() const;
    TorusGrid grid() const { return TorusGrid(L, N); }
    SpectralKernel spectral() const { return cosine_transform(kernel, L, K_max); }
    SolverOptions solver_options() const;
    StepperOptions stepper_options() const;

    nlohmann::ordered_json to_json() const;
};

/// Parse + validate a config file. Detects JSON ('{' first) vs the sectioned
/// key = value grammar; `preset = NAME` is expanded before later keys apply.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

std::vector<std::string> preset_names();
RunConfig preset_config(const std::string& name);

/// Tabulated-kernel CSV loader: columns x,value with x ascending.
KernelSpec load_tabulated_kernel(const std::string& path);

}  // namespace adlab
