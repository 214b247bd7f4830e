#include "bogoclt/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

#include "bogoclt/io_util.hpp"

namespace bogoclt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing field");
    return *it;
}

double as_num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::string as_str(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> as_num_list(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(as_num(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::array<int, 3> as_mode(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected an array of 3 integers");
    return {as_int(j[0], path + "[0]"), as_int(j[1], path + "[1]"), as_int(j[2], path + "[2]")};
}

RadialPotential parse_potential(const json& j, const std::string& path) {
    const std::string kind = as_str(need(j, "kind", path), path + ".kind");
    if (kind == "soft_sphere") {
        const double v0 = as_num(need(j, "v0", path), path + ".v0");
        const double radius = as_num(need(j, "radius", path), path + ".radius");
        if (v0 < 0) fail(path + ".v0", "must be >= 0");
        if (radius <= 0) fail(path + ".radius", "must be > 0");
        return RadialPotential::soft_sphere(v0, radius);
    }
    if (kind == "tabulated") {
        const auto r = as_num_list(need(j, "r", path), path + ".r");
        const auto v = as_num_list(need(j, "v", path), path + ".v");
        if (r.size() != v.size()) fail(path + ".v", "must match the length of r");
        try {
            return RadialPotential::tabulated(r, v);
        } catch (const std::exception& e) {
            fail(path, e.what());
        }
    }
    fail(path + ".kind", "unknown kind '" + kind + "' (soft_sphere | tabulated)");
}

ObservableConfig parse_observable(const json& j, const std::string& path) {
    ObservableConfig oc;
    oc.name = as_str(need(j, "name", path), path + ".name");
    if (oc.name.empty()) fail(path + ".name", "must be non-empty");
    oc.preset = as_str(need(j, "preset", path), path + ".preset");
    if (oc.preset == "cosine" || oc.preset == "sine" || oc.preset == "exponential") {
        oc.n0 = as_mode(need(j, "n0", path), path + ".n0");
        if (oc.n0 == std::array<int, 3>{0, 0, 0}) fail(path + ".n0", "must be nonzero");
        return oc;
    }
    if (oc.preset == "custom") {
        const json& arr = need(j, "coefficients", path);
        if (!arr.is_array() || arr.empty()) {
            fail(path + ".coefficients", "expected a non-empty array");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string cp = path + ".coefficients[" + std::to_string(i) + "]";
            TrigCoefficient tc;
            tc.n = as_mode(need(arr[i], "n", cp), cp + ".n");
            tc.value = {as_num(need(arr[i], "re", cp), cp + ".re"),
                        arr[i].contains("im") ? as_num(arr[i]["im"], cp + ".im") : 0.0};
            oc.coefficients.push_back(tc);
        }
        return oc;
    }
    fail(path + ".preset", "unknown preset '" + oc.preset +
                               "' (cosine | sine | exponential | custom)");
}

void check_n_vs_ell(const std::vector<double>& Ns, double ell, double support,
                    const std::string& path) {
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!(Ns[i] > 0)) fail(p, "must be > 0");
        if (!(Ns[i] * ell > support)) {
            fail(p, "N*ell = " + io::format_g(Ns[i] * ell) +
                        " must exceed the potential support radius " + io::format_g(support));
        }
    }
}

void parse_verify(const json& j, const std::string& path, verify::SuiteOptions& v) {
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
            fail(path + ".seed", "expected an unsigned integer");
        }
        v.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("samples")) v.samples = as_int(j["samples"], path + ".samples");
    if (v.samples < 200) fail(path + ".samples", "must be >= 200");
    if (j.contains("sweep_N")) v.sweep_N = as_num_list(j["sweep_N"], path + ".sweep_N");
    if (j.contains("pair_n_max")) v.pair_n_max = as_int(j["pair_n_max"], path + ".pair_n_max");
    if (j.contains("char_fn_n_max")) {
        v.char_fn_n_max = as_int(j["char_fn_n_max"], path + ".char_fn_n_max");
    }
    if (j.contains("char_fn_N")) v.char_fn_N = as_num(j["char_fn_N"], path + ".char_fn_N");
    if (j.contains("weyl_n_max")) v.weyl_n_max = as_int(j["weyl_n_max"], path + ".weyl_n_max");
    if (j.contains("triad_n_max")) {
        v.triad_n_max = as_int(j["triad_n_max"], path + ".triad_n_max");
    }
    if (j.contains("displaced_n_max")) {
        v.displaced_n_max = as_int(j["displaced_n_max"], path + ".displaced_n_max");
    }
    if (j.contains("drift_limit")) v.drift_limit = as_num(j["drift_limit"], path + ".drift_limit");

    double min_sweep = std::numeric_limits<double>::infinity();
    for (double N : v.sweep_N) min_sweep = std::min(min_sweep, N);
    const auto check_cap = [&](int n_max, double N, const char* field) {
        if (n_max < 1) fail(path + "." + field, "must be >= 1");
        if (n_max > N) {
            fail(path + "." + field,
                 "occupation cap " + std::to_string(n_max) + " exceeds N = " + io::format_g(N) +
                     "; the truncated space holds at most N particles (n_max <= N)");
        }
    };
    check_cap(v.pair_n_max, min_sweep, "pair_n_max");
    check_cap(v.triad_n_max, min_sweep, "triad_n_max");
    check_cap(v.displaced_n_max, min_sweep, "displaced_n_max");
    check_cap(v.char_fn_n_max, v.char_fn_N, "char_fn_n_max");
    if (v.drift_limit <= 1.0) fail(path + ".drift_limit", "must be > 1");
}

}  // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config error at $: expected a JSON object");
    RunConfig cfg;

    if (j.contains("potential")) cfg.potential = parse_potential(j["potential"], "potential");
    if (j.contains("ell")) cfg.ell = as_num(j["ell"], "ell");
    if (!(cfg.ell > 0.0 && cfg.ell < 0.5)) fail("ell", "must lie strictly inside (0, 0.5)");
    if (j.contains("N")) cfg.N_values = as_num_list(j["N"], "N");
    if (j.contains("cutoff")) cfg.cutoff = as_int(j["cutoff"], "cutoff");
    if (cfg.cutoff < 1 || cfg.cutoff > 64) fail("cutoff", "must be in [1, 64]");

    const double support = cfg.potential.support_radius();
    check_n_vs_ell(cfg.N_values, cfg.ell, support, "N");

    if (j.contains("observables")) {
        const json& arr = j["observables"];
        if (!arr.is_array()) fail("observables", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            cfg.observables.push_back(
                parse_observable(arr[i], "observables[" + std::to_string(i) + "]"));
        }
    }
    std::set<std::string> names;
    for (const auto& oc : cfg.observables) {
        if (!names.insert(oc.name).second) fail("observables", "duplicate name '" + oc.name + "'");
    }
    if (j.contains("select")) {
        const json& arr = j["select"];
        if (!arr.is_array() || arr.empty()) fail("select", "expected a non-empty array of names");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string n = as_str(arr[i], "select[" + std::to_string(i) + "]");
            if (!names.count(n)) {
                fail("select[" + std::to_string(i) + "]", "unknown observable '" + n + "'");
            }
            cfg.select.push_back(n);
        }
    } else {
        for (const auto& oc : cfg.observables) cfg.select.push_back(oc.name);
    }

    if (j.contains("excited_mode")) {
        cfg.excited_mode = as_mode(j["excited_mode"], "excited_mode");
        if (*cfg.excited_mode == std::array<int, 3>{0, 0, 0}) {
            fail("excited_mode", "must be nonzero");
        }
    }

    if (j.contains("inversion")) {
        const json& inv = j["inversion"];
        const std::string path = "inversion";
        if (inv.contains("s_count")) cfg.inversion.s_count = as_int(inv["s_count"], path + ".s_count");
        if (inv.contains("tail")) cfg.inversion.tail = as_num(inv["tail"], path + ".tail");
        if (inv.contains("lambda_count")) {
            cfg.inversion.lambda_count = as_int(inv["lambda_count"], path + ".lambda_count");
        }
        if (inv.contains("lambda_span")) {
            cfg.inversion.lambda_span = as_num(inv["lambda_span"], path + ".lambda_span");
        }
        if (cfg.inversion.s_count < 3 || cfg.inversion.s_count % 2 == 0) {
            fail(path + ".s_count", "must be odd and >= 3");
        }
        if (cfg.inversion.lambda_count < 3 || cfg.inversion.lambda_count % 2 == 0) {
            fail(path + ".lambda_count", "must be odd and >= 3");
        }
        if (!(cfg.inversion.tail > 0 && cfg.inversion.tail < 1)) {
            fail(path + ".tail", "must lie in (0, 1)");
        }
        if (!(cfg.inversion.lambda_span > 0)) fail(path + ".lambda_span", "must be > 0");
    }

    if (j.contains("sweep")) {
        const json& sw = j["sweep"];
        const std::string path = "sweep";
        if (sw.contains("integral_N")) {
            cfg.sweep.integral_N = as_num_list(sw["integral_N"], path + ".integral_N");
        }
        if (sw.contains("integral_ell")) {
            cfg.sweep.integral_ell = as_num(sw["integral_ell"], path + ".integral_ell");
        }
        if (!(cfg.sweep.integral_ell > 0.0 && cfg.sweep.integral_ell < 0.5)) {
            fail(path + ".integral_ell", "must lie strictly inside (0, 0.5)");
        }
        if (sw.contains("rate_N")) cfg.sweep.rate_N = as_num_list(sw["rate_N"], path + ".rate_N");
        if (sw.contains("rate_cutoff")) {
            cfg.sweep.rate_cutoff = as_int(sw["rate_cutoff"], path + ".rate_cutoff");
        }
        if (sw.contains("shell_cutoff")) {
            cfg.sweep.shell_cutoff = as_int(sw["shell_cutoff"], path + ".shell_cutoff");
        }
        if (sw.contains("shell_N")) cfg.sweep.shell_N = as_num(sw["shell_N"], path + ".shell_N");
        if (cfg.sweep.integral_N.size() < 3) {
            fail(path + ".integral_N", "need at least 3 points for a slope");
        }
        if (cfg.sweep.rate_N.size() < 3) {
            fail(path + ".rate_N", "need at least 3 points for a slope");
        }
        if (cfg.sweep.rate_cutoff < 1) fail(path + ".rate_cutoff", "must be >= 1");
        if (cfg.sweep.shell_cutoff < 2) fail(path + ".shell_cutoff", "must be >= 2");
        check_n_vs_ell(cfg.sweep.integral_N, cfg.sweep.integral_ell, support,
                       path + ".integral_N");
        check_n_vs_ell(cfg.sweep.rate_N, cfg.ell, support, path + ".rate_N");
        check_n_vs_ell({cfg.sweep.shell_N}, cfg.ell, support, path + ".shell_N");
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
            fail("seed", "expected an unsigned integer");
        }
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    cfg.verify_options.seed = cfg.seed;  // overridable inside the verify block
    if (j.contains("verify")) parse_verify(j["verify"], "verify", cfg.verify_options);

    if (j.contains("threads")) cfg.threads = as_int(j["threads"], "threads");
    if (cfg.threads < 1 || cfg.threads > 256) fail("threads", "must be in [1, 256]");
    if (j.contains("format")) cfg.format = as_str(j["format"], "format");
    if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both") {
        fail("format", "must be one of csv | json | both");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config error: " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json pot;
    if (cfg.potential.is_soft_sphere()) {
        pot = {{"kind", "soft_sphere"},
               {"v0", cfg.potential.soft_v0()},
               {"radius", cfg.potential.support_radius()}};
    } else {
        pot = {{"kind", "tabulated"},
               {"r", cfg.potential.radii()},
               {"v", cfg.potential.values()}};
    }
    j["potential"] = pot;
    j["ell"] = cfg.ell;
    j["N"] = cfg.N_values;
    j["cutoff"] = cfg.cutoff;
    nlohmann::ordered_json obs = nlohmann::ordered_json::array();
    for (const auto& oc : cfg.observables) {
        nlohmann::ordered_json o{{"name", oc.name}, {"preset", oc.preset}};
        if (oc.preset == "custom") {
            nlohmann::ordered_json cs = nlohmann::ordered_json::array();
            for (const auto& tc : oc.coefficients) {
                cs.push_back({{"n", {tc.n[0], tc.n[1], tc.n[2]}},
                              {"re", tc.value.real()},
                              {"im", tc.value.imag()}});
            }
            o["coefficients"] = cs;
        } else {
            o["n0"] = {oc.n0[0], oc.n0[1], oc.n0[2]};
        }
        obs.push_back(o);
    }
    j["observables"] = obs;
    if (!cfg.select.empty()) j["select"] = cfg.select;
    if (cfg.excited_mode) {
        j["excited_mode"] = {(*cfg.excited_mode)[0], (*cfg.excited_mode)[1],
                             (*cfg.excited_mode)[2]};
    }
    j["inversion"] = {{"s_count", cfg.inversion.s_count},
                      {"tail", cfg.inversion.tail},
                      {"lambda_count", cfg.inversion.lambda_count},
                      {"lambda_span", cfg.inversion.lambda_span}};
    j["sweep"] = {{"integral_N", cfg.sweep.integral_N},
                  {"integral_ell", cfg.sweep.integral_ell},
                  {"rate_N", cfg.sweep.rate_N},
                  {"rate_cutoff", cfg.sweep.rate_cutoff},
                  {"shell_cutoff", cfg.sweep.shell_cutoff},
                  {"shell_N", cfg.sweep.shell_N}};
    const auto& v = cfg.verify_options;
    j["verify"] = {{"seed", v.seed},
                   {"samples", v.samples},
                   {"sweep_N", v.sweep_N},
                   {"pair_n_max", v.pair_n_max},
                   {"char_fn_n_max", v.char_fn_n_max},
                   {"char_fn_N", v.char_fn_N},
                   {"weyl_n_max", v.weyl_n_max},
                   {"triad_n_max", v.triad_n_max},
                   {"displaced_n_max", v.displaced_n_max},
                   {"drift_limit", v.drift_limit}};
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["format"] = cfg.format;
    return j;
}

std::uint64_t config_hash(const RunConfig& cfg) { return io::fnv1a(config_to_json(cfg).dump()); }

}  // namespace bogoclt
