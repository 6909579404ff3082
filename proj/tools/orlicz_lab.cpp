// Command-line front end: certify | solve | inequalities | stability.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "orlicz/commands.hpp"
#include "orlicz/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Obstacle problems with generalized Orlicz growth"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> resolution;
    for (const char* name : {"certify", "solve", "inequalities", "stability"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment configuration (INI)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "override experiment.seed");
        sub->add_option("--out", out_dir, "override output.dir");
        sub->add_option("--resolution", resolution, "override mesh.resolution")->check(CLI::Range(2, 1 << 16));
    }
    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        auto cfg = orlicz::parse_config(config_path);
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.out_dir = *out_dir;
        if (resolution) cfg.resolution = *resolution;

        const auto rows = orlicz::run_command(orlicz::parse_command(command), cfg);
        std::size_t failed = 0;
        for (const auto& r : rows) {
            if (r.pass) continue;
            ++failed;
            std::cerr << "FAIL " << r.metric << " index=" << r.index << " value=" << orlicz::format_number(r.value)
                      << '\n';
        }
        std::cout << command << ": " << rows.size() << " rows, " << failed << " failing -> "
                  << (cfg.out_dir / cfg.csv_name).string() << '\n';
        return failed == 0 ? 0 : 1;
    } catch (const orlicz::Error& e) {
        std::cerr << "error [" << e.kind() << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
