// Command-line front end.  Everything substantive lives behind the C API in
// kgsq.h; this file only parses flags and forwards.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "kgsq.h"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int threads = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::vector<std::string> sets;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "config file path")
        ->required();
    sub->add_option("--out", args.out_dir,
                    "output directory (overrides output.dir)");
    sub->add_option("--threads", args.threads, "worker thread count");
    sub->add_option("--seed", args.seed, "seed override")
        ->each([&args](const std::string&) { args.seed_given = true; });
    sub->add_option("--set", args.sets,
                    "key=value override on top of the config file "
                    "(repeatable)");
}

int run_command(const CommonArgs& args,
                kgsq_status (*fn)(const kgsq_config*, const char*, int)) {
    kgsq_config* cfg = nullptr;
    kgsq_status st = kgsq_config_load(args.config_path.c_str(), &cfg);
    if (st != KGSQ_OK) {
        std::cerr << "error: " << kgsq_last_error() << "\n";
        return static_cast<int>(st);
    }
    if (args.seed_given) {
        st = kgsq_config_set(cfg, "seed", std::to_string(args.seed).c_str());
        if (st != KGSQ_OK) {
            std::cerr << "error: " << kgsq_last_error() << "\n";
            kgsq_config_free(cfg);
            return static_cast<int>(st);
        }
    }
    for (const std::string& kv : args.sets) {
        const std::size_t eq = kv.find('=');
        st = eq == std::string::npos
                 ? KGSQ_ERR_CONFIG
                 : kgsq_config_set(cfg, kv.substr(0, eq).c_str(),
                                   kv.substr(eq + 1).c_str());
        if (st != KGSQ_OK) {
            std::cerr << "error: "
                      << (eq == std::string::npos
                              ? "--set needs key=value, got '" + kv + "'"
                              : kgsq_last_error())
                      << "\n";
            kgsq_config_free(cfg);
            return static_cast<int>(st);
        }
    }
    st = fn(cfg, args.out_dir.empty() ? nullptr : args.out_dir.c_str(),
            args.threads);
    if (st != KGSQ_OK) std::cerr << "error: " << kgsq_last_error() << "\n";
    kgsq_config_free(cfg);
    return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "kgsq: pseudo-spectral simulation of transport-noise equations and "
        "analysis of the Kraichnan covariance"};
    app.require_subcommand(1);
    app.add_subcommand("print-config", "print the default configuration");

    struct Entry {
        const char* name;
        const char* help;
        kgsq_status (*fn)(const kgsq_config*, const char*, int);
        CommonArgs args;
    };
    Entry entries[] = {
        {"simulate", "advance one trajectory and record diagnostics",
         kgsq_run_simulate, {}},
        {"analyze-covariance",
         "coercivity profile, kappa fit, and structure-function scaling",
         kgsq_run_analyze_covariance, {}},
        {"convergence-study",
         "coupled vanishing-viscosity ladder under shared noise",
         kgsq_run_convergence_study, {}},
        {"stability", "two-datum coupling under common random numbers",
         kgsq_run_stability, {}},
        {"trilinear", "Monte Carlo bounds for the three trilinear pairings",
         kgsq_run_trilinear, {}},
        {"sample-noise", "empirical covariance of the driving increments",
         kgsq_run_sample_noise, {}},
    };
    for (Entry& e : entries) add_common(app.add_subcommand(e.name, e.help), e.args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems are config errors
    }

    if (app.got_subcommand("print-config")) {
        kgsq_config* cfg = nullptr;
        if (kgsq_config_new(&cfg) != KGSQ_OK) return 1;
        char* text = kgsq_config_serialize(cfg);
        if (text) {
            std::cout << text;
            kgsq_string_free(text);
        }
        kgsq_config_free(cfg);
        return text ? 0 : 1;
    }
    for (const Entry& e : entries)
        if (app.got_subcommand(e.name)) return run_command(e.args, e.fn);
    return 1;
}
