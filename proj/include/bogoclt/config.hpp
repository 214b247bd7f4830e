#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bogoclt/observables.hpp"
#include "bogoclt/potential.hpp"
#include "bogoclt/verify.hpp"

namespace bogoclt {

// Invalid or inconsistent run configuration; messages carry the JSON path
// of the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ObservableConfig {
    std::string name;
    std::string preset;  // cosine | sine | exponential | custom
    std::array<int, 3> n0{0, 0, 0};
    std::vector<TrigCoefficient> coefficients;  // for custom
};

struct InversionConfig {
    int s_count = 2001;        // odd
    double tail = 1e-10;       // char-fn magnitude at the range end
    int lambda_count = 801;    // odd
    double lambda_span = 8.0;  // grid half-width in standard deviations
};

struct SweepConfig {
    std::vector<double> integral_N{1e2, 1e3, 1e4, 1e5};
    double integral_ell = 0.49;
    std::vector<double> rate_N{2500, 5000, 10000, 20000};
    int rate_cutoff = 3;
    int shell_cutoff = 8;
    double shell_N = 40000;
};

struct RunConfig {
    RadialPotential potential = RadialPotential::soft_sphere(2.0, 0.5);
    double ell = 0.45;
    std::vector<double> N_values{10000.0};
    int cutoff = 4;
    std::vector<ObservableConfig> observables;
    std::vector<std::string> select;  // observables forming the joint law
    std::optional<std::array<int, 3>> excited_mode;
    InversionConfig inversion;
    SweepConfig sweep;
    verify::SuiteOptions verify_options;
    std::uint64_t seed = 20260815ULL;
    int threads = 1;
    std::string format = "both";  // csv | json | both
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

// Canonical echo of the parsed config (defaults filled in); its hash keys
// every artifact this run writes.
nlohmann::ordered_json config_to_json(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace bogoclt
