#include "adlab/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace adlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw std::invalid_argument("config (" + origin + "): " + what);
}

double to_double(const std::string& origin, const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (...) {
        fail(origin, "key '" + key + "': expected a number, got '" + v + "'");
    }
}

int to_int(const std::string& origin, const std::string& key, const std::string& v) {
    const double d = to_double(origin, key, v);
    if (d != std::floor(d)) fail(origin, "key '" + key + "': expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

bool to_bool(const std::string& origin, const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    fail(origin, "key '" + key + "': expected true/false, got '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct FlatConfig {
    // section -> key -> raw string value, preserving assignment order semantics
    std::map<std::string, std::map<std::string, std::string>> kv;
    std::string preset;
};

FlatConfig parse_ini(const std::string& text, const std::string& origin) {
    FlatConfig fc;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, "line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(origin, "line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty()) {
            if (key == "preset") {
                fc.preset = val;
                continue;
            }
            fail(origin, "key '" + key + "' outside any section (only 'preset' may appear there)");
        }
        fc.kv[section][key] = val;
    }
    return fc;
}

FlatConfig parse_json_config(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail(origin, std::string("JSON parse error: ") + e.what());
    }
    FlatConfig fc;
    for (auto& [sec, body] : j.items()) {
        if (sec == "preset") {
            fc.preset = body.get<std::string>();
            continue;
        }
        if (!body.is_object()) fail(origin, "section '" + sec + "' must be an object");
        for (auto& [key, val] : body.items()) {
            std::string s;
            if (val.is_string())
                s = val.get<std::string>();
            else if (val.is_boolean())
                s = val.get<bool>() ? "true" : "false";
            else {
                std::ostringstream os;
                os.precision(17);
                os << val.get<double>();
                s = os.str();
            }
            fc.kv[sec][key] = s;
        }
    }
    return fc;
}

void apply_flat(RunConfig& c, const FlatConfig& fc, const std::string& origin) {
    for (const auto& [section, body] : fc.kv) {
        if (section == "model") {
            for (const auto& [key, v] : body) {
                if (key == "type") {
                    if (v == "scalar")
                        c.model = ModelKind::scalar;
                    else if (v == "two_species")
                        c.model = ModelKind::two_species;
                    else
                        fail(origin, "[model] type must be 'scalar' or 'two_species', got '" + v + "'");
                } else if (key == "sigma")
                    c.sigma = to_double(origin, key, v);
                else if (key == "L")
                    c.L = to_double(origin, key, v);
                else
                    fail(origin, "[model] unknown key '" + key + "'");
            }
        } else if (section == "kernel") {
            KernelSpec& k = c.kernel;
            for (const auto& [key, v] : body) {
                if (key == "type") {
                    if (v == "tophat")
                        k.variant = KernelVariant::tophat;
                    else if (v == "cosine")
                        k.variant = KernelVariant::cosine;
                    else if (v == "tabulated")
                        k.variant = KernelVariant::tabulated;
                    else
                        fail(origin, "[kernel] type must be tophat|cosine|tabulated, got '" + v + "'");
                } else if (key == "R")
                    k.R = to_double(origin, key, v);
                else if (key == "sign")
                    k.sign = to_int(origin, key, v);
                else if (key == "m")
                    k.m = to_int(origin, key, v);
                else if (key == "amplitude")
                    k.amplitude = to_double(origin, key, v);
                else if (key == "path")
                    c.tabulated_path = v;
                else
                    fail(origin, "[kernel] unknown key '" + key + "'");
            }
        } else if (section == "params") {
            for (const auto& [key, v] : body) {
                if (key == "alpha")
                    c.alpha = to_double(origin, key, v);
                else if (key == "alpha1")
                    c.alpha1 = to_double(origin, key, v);
                else if (key == "alpha2")
                    c.alpha2 = to_double(origin, key, v);
                else if (key == "gamma")
                    c.gamma = to_double(origin, key, v);
                else if (key == "chi1")
                    c.chi1 = to_int(origin, key, v);
                else if (key == "chi2")
                    c.chi2 = to_int(origin, key, v);
                else
                    fail(origin, "[params] unknown key '" + key + "'");
            }
        } else if (section == "solver") {
            for (const auto& [key, v] : body) {
                if (key == "N")
                    c.N = to_int(origin, key, v);
                else if (key == "K_max")
                    c.K_max = to_int(origin, key, v);
                else if (key == "theta")
                    c.theta = to_double(origin, key, v);
                else if (key == "tol")
                    c.tol = to_double(origin, key, v);
                else if (key == "max_iter")
                    c.max_iter = to_int(origin, key, v);
                else if (key == "dt")
                    c.dt = to_double(origin, key, v);
                else if (key == "t_end")
                    c.t_end = to_double(origin, key, v);
                else if (key == "dealias")
                    c.dealias = to_bool(origin, key, v);
                else if (key == "sample_every")
                    c.sample_every = to_double(origin, key, v);
                else if (key == "seed_mode")
                    c.seed_mode = to_int(origin, key, v);
                else if (key == "seed_amplitude")
                    c.seed_amplitude = to_double(origin, key, v);
                else
                    fail(origin, "[solver] unknown key '" + key + "'");
            }
        } else if (section == "output") {
            for (const auto& [key, v] : body) {
                if (key == "path")
                    c.out_path = v;
                else if (key == "format")
                    c.format = v;
                else
                    fail(origin, "[output] unknown key '" + key + "'");
            }
        } else {
            fail(origin, "unknown section '[" + section + "]'");
        }
    }
}

}    // namespace

void RunConfig::validate() const {
    const std::string o = "validate";
    if (sigma <= 0.0) fail(o, "[model] sigma: constraint sigma > 0 violated");
    if (L <= 0.0) fail(o, "[model] L: constraint L > 0 violated");
    if (kernel.variant == KernelVariant::tophat) {
        if (!(kernel.R > 0.0 && kernel.R < 0.5 * L))
            fail(o, "[kernel] R: constraint 0 < R < L/2 violated");
        if (kernel.sign != 1 && kernel.sign != -1)
            fail(o, "[kernel] sign: constraint sign in {+1, -1} violated");
    }
    if (kernel.variant == KernelVariant::cosine && kernel.m < 1)
        fail(o, "[kernel] m: constraint m >= 1 violated");
    if (alpha < 0.0) fail(o, "[params] alpha: constraint alpha >= 0 violated");
    if (alpha1 < 0.0 || alpha2 < 0.0) fail(o, "[params] alpha_i: constraint alpha_i >= 0 violated");
    if (gamma < 0.0) fail(o, "[params] gamma: constraint gamma >= 0 violated");
    if ((chi1 != 1 && chi1 != -1) || (chi2 != 1 && chi2 != -1))
        fail(o, "[params] chi_i: constraint chi_i in {+1, -1} violated");
    if (N < 16 || N % 2 != 0) fail(o, "[solver] N: constraint N even and >= 16 violated");
    if (K_max < 1) fail(o, "[solver] K_max: constraint K_max >= 1 violated");
    if (2 * K_max > N) fail(o, "[solver] K_max: constraint 2*K_max <= N violated (aliasing)");
    if (!(theta > 0.0 && theta <= 1.0)) fail(o, "[solver] theta: constraint 0 < theta <= 1 violated");
    if (tol <= 0.0) fail(o, "[solver] tol: constraint tol > 0 violated");
    if (max_iter < 1) fail(o, "[solver] max_iter: constraint max_iter >= 1 violated");
    if (dt <= 0.0) fail(o, "[solver] dt: constraint dt > 0 violated");
    if (t_end <= 0.0) fail(o, "[solver] t_end: constraint t_end > 0 violated");
    if (sample_every <= 0.0) fail(o, "[solver] sample_every: constraint sample_every > 0 violated");
    if (seed_mode < 1) fail(o, "[solver] seed_mode: constraint seed_mode >= 1 violated");
    if (format != "csv" && format != "json")
        fail(o, "[output] format: constraint format in {csv, json} violated");
}

ScalarParams RunConfig::scalar_params() const { return {sigma, L, alpha}; }

TwoSpeciesParams RunConfig::two_params() const {
    return {sigma, L, alpha1, alpha2, gamma, chi1, chi2};
}

SolverOptions RunConfig::solver_options() const {
    SolverOptions s;
    s.theta = theta;
    s.tol = tol;
    s.max_iter = max_iter;
    return s;
}

StepperOptions RunConfig::stepper_options() const {
    StepperOptions s;
    s.dt = dt;
    s.t_end = t_end;
    s.N = N;
    s.dealias = dealias;
    s.sample_every = sample_every;
    return s;
}

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["model"] = {{"type", model == ModelKind::scalar ? "scalar" : "two_species"},
                  {"sigma", sigma},
                  {"L", L}};
    nlohmann::ordered_json k;
    switch (kernel.variant) {
        case KernelVariant::tophat:
            k = {{"type", "tophat"}, {"R", kernel.R}, {"sign", kernel.sign}};
            break;
        case KernelVariant::cosine:
            k = {{"type", "cosine"}, {"m", kernel.m}, {"amplitude", kernel.amplitude}};
            break;
        case KernelVariant::tabulated:
            k = {{"type", "tabulated"}, {"path", tabulated_path}};
            break;
    }
    j["kernel"] = k;
    j["params"] = {{"alpha", alpha},   {"alpha1", alpha1}, {"alpha2", alpha2},
                   {"gamma", gamma},   {"chi1", chi1},     {"chi2", chi2}};
    j["solver"] = {{"N", N},           {"K_max", K_max},   {"theta", theta},
                   {"tol", tol},       {"max_iter", max_iter}, {"dt", dt},
                   {"t_end", t_end},   {"dealias", dealias},   {"sample_every", sample_every},
                   {"seed_mode", seed_mode}, {"seed_amplitude", seed_amplitude}};
    j["output"] = {{"path", out_path}, {"format", format}};
    return j;
}

KernelSpec load_tabulated_kernel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("kernel: cannot open tabulated CSV '" + path + "'");
    std::vector<double> xs, vs;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (first && line.find("x") != std::string::npos && line.find(',') != std::string::npos) {
            first = false;
            continue;    // header row
        }
        first = false;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("kernel: tabulated CSV '" + path + "' needs 'x,value' rows");
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    return KernelSpec::tabulated(std::move(xs), std::move(vs));
}

std::vector<std::string> preset_names() {
    return {"scalar_tophat_fig1", "P1", "P2", "P3_adhesion", "cosine_exact"};
}

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    c.preset = name;
    c.sigma = 1.0;
    c.L = kTwoPi;
    if (name == "scalar_tophat_fig1") {
        c.model = ModelKind::scalar;
        c.kernel = KernelSpec::tophat(kTwoPi / 10.0, +1);
        c.alpha = 1.0;
    } else if (name == "P1") {
        c.model = ModelKind::two_species;
        c.kernel = KernelSpec::tophat(kTwoPi / 10.0, +1);
        c.alpha1 = 1.5;
        c.alpha2 = 1.0;
        c.gamma = 1.5;
        c.chi1 = +1;
        c.chi2 = +1;
    } else if (name == "P2") {
        c.model = ModelKind::two_species;
        c.kernel = KernelSpec::tophat(kTwoPi / 10.0, +1);
        c.alpha1 = 1.5;
        c.alpha2 = 4.35;
        c.gamma = 1.5;
        c.chi1 = +1;
        c.chi2 = -1;    // chi2*alpha2 = -4.35
    } else if (name == "P3_adhesion") {
        // two points of critical stability: island (~1.81, ~27.38) around alpha1
        c.model = ModelKind::two_species;
        c.kernel = KernelSpec::tophat(1.25, +1);
        c.alpha1 = 3.5;
        c.alpha2 = 6.0;
        c.gamma = 12.0;
        c.chi1 = +1;
        c.chi2 = +1;
    } else if (name == "cosine_exact") {
        c.model = ModelKind::two_species;
        c.kernel = KernelSpec::cosine(1, -1.0);
        c.alpha1 = 1.0;
        c.alpha2 = 1.0;
        c.gamma = 1.0;
        c.chi1 = +1;
        c.chi2 = +1;
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return c;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool is_json = first != std::string::npos && text[first] == '{';
    const FlatConfig fc = is_json ? parse_json_config(text, origin) : parse_ini(text, origin);

    RunConfig c;
    if (!fc.preset.empty()) c = preset_config(fc.preset);
    apply_flat(c, fc, origin);
    if (c.kernel.variant == KernelVariant::tabulated) {
        if (c.tabulated_path.empty()) fail(origin, "[kernel] tabulated requires 'path'");
        const KernelSpec loaded = load_tabulated_kernel(c.tabulated_path);
        c.kernel.xs = loaded.xs;
        c.kernel.values = loaded.values;
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

}  // namespace adlab
