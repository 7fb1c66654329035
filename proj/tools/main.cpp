// qnoise: predict, validate, tomography, rb and ingest-psd pipelines driven by a JSON config.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "qnoise/error.hpp"
#include "qnoise/parallel.hpp"

using namespace qnoise;
using namespace qnoise::cli;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 0;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
    auto* opt = sub->add_option("--config", c.config, "JSON configuration file");
    if (config_required) opt->required();
    opt->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "override simulation.seed");
    sub->add_option("--out", c.out, "override outputs.directory");
    sub->add_option("--threads", c.threads, "worker threads (0 = hardware concurrency)");
}

json build_config(const Common& c) {
    json user = json::object();
    std::string base = ".";
    if (!c.config.empty()) {
        std::ifstream in(c.config);
        try {
            user = json::parse(in);
        } catch (const json::parse_error& e) {
            fail(ErrorKind::InvalidInput, "config: " + c.config + ": " + e.what());
        }
        base = std::filesystem::path(c.config).parent_path().string();
        if (base.empty()) base = ".";
    }
    if (c.seed) user["simulation"]["seed"] = *c.seed;
    if (!c.out.empty()) user["outputs"]["directory"] = std::filesystem::absolute(c.out).string();
    return resolve_config(user, base);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamical error maps of driven qubits under colored noise"};
    app.set_version_flag("--version", std::string(QNOISE_VERSION));
    bool dump_defaults = false;
    app.add_flag("--dump-defaults", dump_defaults, "print the full default configuration and exit");
    app.require_subcommand(0, 1);

    Common c;
    std::string psd_csv, psd_sidecar;
    auto* predict = app.add_subcommand("predict", "filtered integrals, channel snapshots and error curves");
    auto* validate = app.add_subcommand("validate", "Monte Carlo ensemble vs analytic channels (Haar-averaged)");
    auto* tomo = app.add_subcommand("tomography", "MLE and Metropolis-Hastings process tomography");
    auto* rb = app.add_subcommand("rb", "simulated single-qubit randomized benchmarking");
    auto* ingest = app.add_subcommand("ingest-psd", "normalize a measured PSD file");
    for (auto* s : {predict, validate, tomo, rb}) add_common(s, c, true);
    add_common(ingest, c, false);
    ingest->add_option("--csv", psd_csv, "raw PSD CSV (freq, density)")->check(CLI::ExistingFile);
    ingest->add_option("--sidecar", psd_sidecar, "JSON sidecar with units, plateaus, excluded bands")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (dump_defaults) {
        std::cout << default_config().dump(2) << '\n';
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 2;
    }

    try {
        const json config = build_config(c);
        set_thread_count(c.threads);
        if (predict->parsed()) cmd_predict(config);
        if (validate->parsed()) cmd_validate(config);
        if (tomo->parsed()) cmd_tomography(config);
        if (rb->parsed()) cmd_rb(config);
        if (ingest->parsed()) cmd_ingest_psd(config, psd_csv, psd_sidecar);
    } catch (const Error& e) {
        spdlog::error("{}: {}", to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const json::exception& e) {
        spdlog::error("invalid-input: {}", e.what());
        return 2;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 3;
    }
    return 0;
}
