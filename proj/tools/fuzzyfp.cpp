// Command-line front end: fuzzyfp <command> [--config PATH] [flags]
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fuzzyfp/commands.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical certification of fixed-point hypotheses in fuzzy metric spaces"};
    app.set_version_flag("--version", std::string(fuzzyfp::kSchemaVersion));

    std::string command;
    std::optional<std::string> config, out_path, csv_path, t_grid;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::size_t> grid;
    std::optional<double> tol;

    std::string commands;
    for (auto c : fuzzyfp::kCommands) commands += (commands.empty() ? "" : ", ") + std::string(c);
    app.add_option("command", command, "one of: " + commands)->required();
    app.add_option("--config", config, "INI config file");
    app.add_option("--out", out_path, "write the JSON report here instead of stdout");
    app.add_option("--seed", seed, "seed for randomized sampling (default 0)");
    app.add_option("--jobs", jobs, "worker threads (default 1)")->check(CLI::PositiveNumber);
    app.add_option("--grid", grid, "carrier grid points, overrides the config")->check(CLI::Range(2, 1000000));
    app.add_option("--tol", tol, "fixed-point / value-iteration tolerance, overrides the config");
    app.add_option("--t-grid", t_grid, "comma separated t values, overrides the config");
    app.add_option("--csv", csv_path, "dp-solve: write the solution as x,value rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    fuzzyfp::CommandOptions opts;
    opts.command = command;
    opts.config = config;
    opts.overrides.seed = seed;
    opts.overrides.jobs = jobs;
    opts.overrides.grid = grid;
    opts.overrides.tol = tol;

    fuzzyfp::CommandResult res;
    try {
        if (t_grid) opts.overrides.t_grid = fuzzyfp::parse_number_list(*t_grid);
        res = fuzzyfp::run_command(opts);
    } catch (const fuzzyfp::InputError& e) {
        res = {2, fuzzyfp::make_error_envelope(command, "input", e.what()), std::nullopt};
    }

    if (res.exit_code == 2) std::cerr << "fuzzyfp: " << res.report["error"]["message"].get<std::string>() << '\n';

    const std::string text = fuzzyfp::dump_report(res.report);
    if (out_path) {
        if (!write_file(*out_path, text)) {
            std::cerr << "fuzzyfp: cannot write " << *out_path << '\n';
            return 2;
        }
    } else {
        std::cout << text;
    }
    if (csv_path) {
        if (!res.csv) {
            std::cerr << "fuzzyfp: --csv only applies to a successful dp-solve run\n";
        } else if (!write_file(*csv_path, *res.csv)) {
            std::cerr << "fuzzyfp: cannot write " << *csv_path << '\n';
            return 2;
        }
    }
    return res.exit_code;
}
