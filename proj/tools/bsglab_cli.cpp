// bsglab command-line front end:
//   bsglab run <config> [--out DIR]        execute one experiment
//   bsglab verify-all [--seed S] [--out DIR]  run the acceptance suite
//   bsglab emit <record.json> --kind <k> [--out DIR]  project plot data
// Output directory resolution: --out, then $BSGLAB_OUT, then ".".
// Exit codes: 0 ok, 1 criterion/record failure, 2 usage or configuration error.
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bsglab/acceptance.hpp"
#include "bsglab/config.hpp"
#include "bsglab/experiments.hpp"

namespace {

std::string resolve_out(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("BSGLAB_OUT"); env && *env) return env;
    return ".";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bsglab: bipartite spin-glass universality laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_flag, record_path, kind;
    std::uint64_t seed = bsg::kDefaultSeed;

    CLI::App* run = app.add_subcommand("run", "execute the experiment described by a config file");
    run->add_option("config", config_path, "key = value configuration file")->required();
    run->add_option("--out", out_flag, "output directory (default $BSGLAB_OUT or .)");

    CLI::App* verify = app.add_subcommand("verify-all", "run the acceptance suite");
    verify->add_option("--seed", seed, "root seed for the sampled criteria");
    verify->add_option("--out", out_flag, "output directory for the summary file");

    CLI::App* emit = app.add_subcommand("emit", "emit plot data from a stored record");
    emit->add_option("record", record_path, "path to a .record.json file")->required();
    emit->add_option("--kind", kind,
                     "gap_vs_size | moment_vs_size | pnorm_vs_p | energy_vs_beta")
        ->required();
    emit->add_option("--out", out_flag, "output directory (default $BSGLAB_OUT or .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            bsg::Config cfg = bsg::Config::parse_file(config_path);
            bsg::ExperimentRecord rec = bsg::run_experiment(cfg);
            auto path = bsg::write_record(rec, resolve_out(out_flag));
            std::cout << rec.experiment_id << ": " << (rec.pass ? "PASS" : "FAIL") << " - "
                      << rec.summary << '\n'
                      << "record: " << path.string() << '\n';
            return rec.pass ? 0 : 1;
        }
        if (verify->parsed()) {
            bsg::AcceptanceSummary summary = bsg::run_acceptance(seed);
            std::cout << summary.text();
            std::filesystem::path dir = resolve_out(out_flag);
            std::filesystem::create_directories(dir);
            std::ofstream file(dir / ("verify-s" + std::to_string(seed) + ".txt"));
            file << summary.text();
            return summary.all_pass ? 0 : 1;
        }
        // emit
        bsg::ExperimentRecord rec = bsg::read_record(record_path);
        auto path = bsg::emit_plotdata(rec, kind, resolve_out(out_flag));
        std::cout << path.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
