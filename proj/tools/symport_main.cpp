#include <CLI11.hpp>
#include <iostream>

#include "symport/scenario.hpp"
#include "symport/threading.hpp"

namespace {

struct GlobalFlags {
    std::string config;
    int threads = 0;
    std::string out;
    double z0 = 0.0;
    double tol = 0.0;
};

symport::ScenarioConfig load_config(const GlobalFlags& flags)
{
    symport::ScenarioConfig cfg = symport::ScenarioConfig::load(flags.config);
    if (flags.threads > 0) cfg.threads = flags.threads;
    if (!flags.out.empty()) cfg.out_dir = flags.out;
    if (flags.z0 > 0.0) cfg.z0_line = flags.z0;
    if (flags.tol > 0.0) cfg.vertex_tol_rel = flags.tol;
    return cfg;
}

void add_common(CLI::App* cmd, GlobalFlags& flags, bool config_required = true)
{
    auto* opt = cmd->add_option("--config", flags.config, "scenario config file");
    if (config_required) opt->required();
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", flags.out, "output directory override");
    cmd->add_option("--z0", flags.z0, "line impedance override (ohm)");
    cmd->add_option("--tol", flags.tol, "vertex matching tolerance override (relative)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"symmetry-adapted multi-port excitation synthesis"};
    app.require_subcommand(1);
    GlobalFlags flags;

    auto* adapt = app.add_subcommand("adapt", "symmetry-adapt a generator-port excitation");
    add_common(adapt, flags);
    auto* modes = app.add_subcommand("modes", "species-resolved characteristic modes");
    add_common(modes, flags);
    auto* scan = app.add_subcommand("scan", "exhaustive port-placement search");
    add_common(scan, flags);
    auto* sweep = app.add_subcommand("sweep", "port-placement search over a frequency band");
    add_common(sweep, flags);
    auto* compare = app.add_subcommand("compare", "score an externally chosen port layout");
    add_common(compare, flags);

    std::string group_name = "C2v", group_out = "out";
    auto* gt = app.add_subcommand("group-table", "dump a character table as CSV");
    gt->add_option("--name", group_name, "Schoenflies label")->required();
    gt->add_option("--out", group_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gt->parsed()) {
            symport::cmd_group_table(group_name, group_out);
            return 0;
        }
        symport::ScenarioConfig cfg = load_config(flags);
        if (cfg.threads > 0) symport::set_default_threads(cfg.threads);
        auto scene = symport::load_scene(cfg);
        if (adapt->parsed()) symport::cmd_adapt(*scene);
        else if (modes->parsed()) symport::cmd_modes(*scene);
        else if (scan->parsed()) symport::cmd_scan(*scene);
        else if (sweep->parsed()) symport::cmd_sweep(*scene);
        else if (compare->parsed()) symport::cmd_compare(*scene);
        return 0;
    } catch (const symport::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const symport::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
