// Experiment driver: each subcommand runs one study end to end and writes
// CSV/JSON/SVG plus a manifest sufficient to reproduce the run.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "vqclab/experiments.hpp"
#include "vqclab/version.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "key = value config file");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--format", flags.format, "csv|json|svg")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    cmd->add_option("--seed", flags.seed, "master seed")->each([&](const std::string&) {
        flags.seed_set = true;
    });
    cmd->add_option("--jobs", flags.jobs, "worker threads (0 = all cores)");
}

int run(const std::string& experiment, const CommonFlags& flags) {
    vqclab::ExperimentConfig config = vqclab::default_config(experiment);
    if (!flags.config_path.empty())
        config = vqclab::parse_config_file(flags.config_path, config);
    if (config.experiment != experiment)
        throw vqclab::config_error("config file targets experiment '" + config.experiment +
                                   "' but subcommand is '" + experiment + "'");
    if (flags.seed_set) config.master_seed = flags.seed;
    if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
    if (!flags.format.empty()) config.format = flags.format;
    if (flags.jobs >= 0) config.jobs = flags.jobs;

    const vqclab::ResultTable table = vqclab::run_experiment(config);
    for (const std::string& path : vqclab::emit_outputs(table, config))
        std::cout << "wrote " << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vqclab: statevector experiments on output/gradient concentration in "
                 "variational circuits and its tensor-structured mitigation"};
    app.set_version_flag("--version", vqclab::kVersion);
    app.require_subcommand(1);

    const std::vector<std::string> experiments = {"fig4",   "concentration", "tail",
                                                  "spread", "gradients",     "design"};
    std::vector<CommonFlags> flags(experiments.size());
    for (std::size_t i = 0; i < experiments.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(experiments[i], experiments[i] + " experiment");
        add_common(cmd, flags[i]);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < experiments.size(); ++i)
            if (app.get_subcommand(experiments[i])->parsed()) return run(experiments[i], flags[i]);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const vqclab::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const vqclab::numeric_error& e) {
        std::cerr << "numerical invariant violated: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
