#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bogoclt/io_util.hpp"
#include "bogoclt/pipeline.hpp"

using namespace bogoclt;
namespace fs = std::filesystem;

namespace {

nlohmann::json J(const char* text) { return nlohmann::json::parse(text); }

std::string error_of(const nlohmann::json& j) {
    try {
        (void)parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

fs::path fresh_dir(const char* name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("config defaults and echo") {
    const RunConfig cfg = parse_config(J("{}"));
    CHECK(cfg.ell == 0.45);
    CHECK(cfg.cutoff == 4);
    CHECK(cfg.N_values == std::vector<double>{10000.0});
    CHECK(cfg.format == "both");
    CHECK(cfg.verify_options.seed == cfg.seed);

    // The echo parses back to the same hash.
    const RunConfig again = parse_config(config_to_json(cfg));
    CHECK(config_hash(again) == config_hash(cfg));
}

TEST_CASE("config validation messages carry the field path") {
    CHECK(error_of(J(R"({"ell": 0.6})")).find("ell") != std::string::npos);
    CHECK(error_of(J(R"({"ell": 0.0})")).find("(0, 0.5)") != std::string::npos);

    // N*ell must cover the potential support.
    const auto msg = error_of(J(R"({"N": [1.0], "ell": 0.4})"));
    CHECK(msg.find("N[0]") != std::string::npos);
    CHECK(msg.find("support") != std::string::npos);

    CHECK(error_of(J(R"({"cutoff": 0})")).find("cutoff") != std::string::npos);
    CHECK(error_of(J(R"({"potential": {"kind": "box"}})")).find("potential.kind") !=
          std::string::npos);
    CHECK(error_of(J(R"({"observables": [{"name": "a", "preset": "triangle", "n0": [1,0,0]}]})"))
              .find("preset") != std::string::npos);
    CHECK(error_of(J(R"({"observables": [
            {"name": "a", "preset": "cosine", "n0": [1,0,0]},
            {"name": "a", "preset": "sine", "n0": [1,0,0]}]})"))
              .find("duplicate") != std::string::npos);
    CHECK(error_of(J(R"({"observables": [{"name": "a", "preset": "cosine", "n0": [1,0,0]}],
                         "select": ["b"]})"))
              .find("unknown observable") != std::string::npos);
    CHECK(error_of(J(R"({"excited_mode": [0,0,0]})")).find("excited_mode") != std::string::npos);
    CHECK(error_of(J(R"({"inversion": {"s_count": 4}})")).find("odd") != std::string::npos);
    CHECK(error_of(J(R"({"sweep": {"integral_N": [10.0, 100.0]}})")).find("3 points") !=
          std::string::npos);

    // Occupation caps cannot exceed the particle number of the smallest basis.
    const auto cap = error_of(J(R"({"verify": {"pair_n_max": 30}})"));
    CHECK(cap.find("truncated space holds at most N particles") != std::string::npos);
    CHECK(cap.find("30") != std::string::npos);

    CHECK(error_of(J(R"({"format": "yaml"})")).find("format") != std::string::npos);
    CHECK(error_of(J(R"({"threads": 0})")).find("threads") != std::string::npos);
}

TEST_CASE("verify seed defaults to the run seed but can diverge") {
    const RunConfig a = parse_config(J(R"({"seed": 99})"));
    CHECK(a.verify_options.seed == 99);
    const RunConfig b = parse_config(J(R"({"seed": 99, "verify": {"seed": 7}})"));
    CHECK(b.verify_options.seed == 7);
}

TEST_CASE("load_config rejects bad files") {
    CHECK_THROWS_AS((void)load_config("/nonexistent/config.json"), ConfigError);
    const fs::path dir = fresh_dir("bogoclt_badcfg");
    const fs::path p = dir / "bad.json";
    std::ofstream(p) << "{ not json";
    CHECK_THROWS_AS((void)load_config(p), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("limit stage on the free problem") {
    pipeline::RunContext ctx;
    ctx.cfg = parse_config(J(R"({
        "potential": {"kind": "soft_sphere", "v0": 0.0, "radius": 0.5},
        "ell": 0.45,
        "N": [100.0],
        "cutoff": 1,
        "observables": [{"name": "cos_x", "preset": "cosine", "n0": [1, 0, 0]}],
        "excited_mode": [1, 0, 0],
        "inversion": {"s_count": 801, "lambda_count": 401},
        "format": "json"
    })"));
    ctx.out_dir = fresh_dir("bogoclt_limit_free");

    const auto bundle = pipeline::run_limit(ctx);
    const auto& obs = bundle["results"][0]["observables"][0];

    // With no interaction every dressing angle vanishes, so the variance is
    // exactly ||fhat||^2 = 2 and the law is N(0, 2).
    CHECK(obs["variance"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(obs["density"]["normalization"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(obs["density"]["sup_diff_vs_gaussian"].get<double>() < 1e-6);
    CHECK(obs["density"]["interval_prob_1.96_sigma"].get<double>() ==
          doctest::Approx(0.95).epsilon(1e-3));
    CHECK(obs["excited_density"]["nu_at_mode_sq"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(obs["excited_density"]["normalization"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-7));
    CHECK(obs["excited_density"]["sup_diff_vs_closed_form"].get<double>() < 1e-6);

    CHECK(fs::exists(ctx.out_dir / "limit.json"));
    // format=json suppresses per-observable tables.
    CHECK(!fs::exists(ctx.out_dir / "limit_N100_cos_x.csv"));

    const auto& cov = bundle["results"][0]["covariance"];
    CHECK(cov["is_real"].get<bool>());
    CHECK(cov["re"][0][0].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    fs::remove_all(ctx.out_dir);
}

TEST_CASE("limit stage rejects an excited mode outside the set") {
    pipeline::RunContext ctx;
    ctx.cfg = parse_config(J(R"({
        "potential": {"kind": "soft_sphere", "v0": 0.0, "radius": 0.5},
        "N": [100.0], "cutoff": 1,
        "observables": [{"name": "c", "preset": "cosine", "n0": [1, 0, 0]}],
        "excited_mode": [5, 0, 0]
    })"));
    ctx.out_dir = fresh_dir("bogoclt_limit_bad_mode");
    CHECK_THROWS_AS((void)pipeline::run_limit(ctx), ConfigError);
    fs::remove_all(ctx.out_dir);
}

TEST_CASE("scattering stage writes its bundle and tables") {
    pipeline::RunContext ctx;
    ctx.cfg = parse_config(J(R"({
        "potential": {"kind": "soft_sphere", "v0": 2.0, "radius": 0.5},
        "N": [500.0], "cutoff": 2, "format": "both"
    })"));
    ctx.out_dir = fresh_dir("bogoclt_scatter_stage");
    const auto bundle = pipeline::run_scattering(ctx);
    CHECK(bundle["scattering_length"]["a0"].get<double>() ==
          doctest::Approx(0.5 - std::tanh(0.5)).epsilon(1e-10));
    CHECK(bundle["scattering_length"]["born_value"].get<double>() ==
          doctest::Approx(2.0 * 0.125 / 6.0).epsilon(1e-8));
    CHECK(bundle["results"][0]["abs_deviation"].get<double>() > 0.0);
    CHECK(fs::exists(ctx.out_dir / "scattering.json"));
    CHECK(fs::exists(ctx.out_dir / "scattering_N500_transforms.csv"));

    // Provenance is a pure function of the config.
    CHECK(bundle["provenance"]["config_hash"].get<std::string>() ==
          io::hex64(config_hash(ctx.cfg)));
    fs::remove_all(ctx.out_dir);
}

TEST_CASE("report collates whatever exists") {
    const fs::path dir = fresh_dir("bogoclt_report_stage");

    // Empty directory: an empty report, not an error.
    auto rep = pipeline::run_report(dir);
    CHECK(rep["rows"].empty());
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "report.csv"));

    pipeline::RunContext ctx;
    ctx.cfg = parse_config(J(R"({
        "potential": {"kind": "soft_sphere", "v0": 2.0, "radius": 0.5},
        "N": [300.0], "cutoff": 1, "format": "json"
    })"));
    ctx.out_dir = dir;
    (void)pipeline::run_scattering(ctx);
    rep = pipeline::run_report(dir);
    CHECK(rep["rows"].size() >= 2);
    CHECK(rep["sources"].size() == 1);
    bool found = false;
    for (const auto& row : rep["rows"]) {
        if (row["stage"] == "scattering" && row["name"] == "a0") found = true;
    }
    CHECK(found);
    fs::remove_all(dir);
}
