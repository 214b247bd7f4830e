#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "bogoclt/pipeline.hpp"
#include "bogoclt/scattering.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> format;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "path to the JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory for artifacts");
    sub->add_option("--seed", opts.seed, "override the configured RNG seed");
    sub->add_option("--threads", opts.threads, "override the configured worker count");
    sub->add_option("--format", opts.format, "artifact format: csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
}

bogoclt::pipeline::RunContext make_context(const CommonOpts& opts) {
    bogoclt::pipeline::RunContext ctx;
    ctx.cfg = bogoclt::load_config(opts.config_path);
    if (opts.seed) {
        ctx.cfg.seed = *opts.seed;
        ctx.cfg.verify_options.seed = *opts.seed;
    }
    if (opts.threads) {
        if (*opts.threads < 1 || *opts.threads > 256) {
            throw bogoclt::ConfigError("config error at --threads: must be in [1, 256]");
        }
        ctx.cfg.threads = *opts.threads;
    }
    if (opts.format) ctx.cfg.format = *opts.format;
    ctx.out_dir = opts.out_dir;
    if (const char* cache = std::getenv("BOGOCLT_CACHE_DIR")) {
        ctx.cache_dir = std::filesystem::path(cache);
    }
    return ctx;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bogoliubov fluctuation pipeline: scattering profile, dressing "
                 "coefficients, Gaussian limit law, operator verification"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string report_dir = "out";

    auto* scattering = app.add_subcommand("scattering", "solve the two-body problem and "
                                                        "tabulate its transforms");
    auto* coefficients = app.add_subcommand("coefficients", "per-mode dressing coefficients");
    auto* limit = app.add_subcommand("limit", "limiting densities of the configured "
                                              "observables");
    auto* verify = app.add_subcommand("verify", "operator identities and growth-bound fits "
                                                "on the truncated space");
    auto* sweep = app.add_subcommand("sweep", "convergence-rate sweeps in N");
    for (auto* sub : {scattering, coefficients, limit, verify, sweep}) add_common(sub, opts);

    auto* report = app.add_subcommand("report", "collate existing artifacts into a summary");
    report->add_option("--out", report_dir, "directory holding the stage artifacts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (report->parsed()) {
            bogoclt::pipeline::run_report(report_dir);
            std::cout << "wrote " << (std::filesystem::path(report_dir) / "report.json").string()
                      << "\n";
            return 0;
        }
        const auto ctx = make_context(opts);
        nlohmann::ordered_json bundle;
        std::string artifact;
        if (scattering->parsed()) {
            bundle = bogoclt::pipeline::run_scattering(ctx);
            artifact = "scattering.json";
        } else if (coefficients->parsed()) {
            bundle = bogoclt::pipeline::run_coefficients(ctx);
            artifact = "coefficients.json";
        } else if (limit->parsed()) {
            bundle = bogoclt::pipeline::run_limit(ctx);
            artifact = "limit.json";
        } else if (verify->parsed()) {
            bundle = bogoclt::pipeline::run_verify(ctx);
            artifact = "verify.json";
        } else if (sweep->parsed()) {
            bundle = bogoclt::pipeline::run_sweep(ctx);
            artifact = "sweep.json";
        }
        std::cout << "wrote " << (ctx.out_dir / artifact).string() << "\n";
        if (verify->parsed() && !bundle["suite"]["summary"]["pass"].get<bool>()) {
            std::cerr << "verification failed:";
            for (const auto& name : bundle["suite"]["summary"]["failed_names"]) {
                std::cerr << ' ' << name.get<std::string>();
            }
            std::cerr << "\n";
            return 3;
        }
        return 0;
    } catch (const bogoclt::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const bogoclt::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
