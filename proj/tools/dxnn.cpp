// dxnn: command line front end for the experiment harness.
//
//   dxnn bench --variant dpb-vel --runs 50 --seed 3 --out results/dpb
//   dxnn ablate --sweep weight-rim --set base_max_mistakes=50 --out results/rim
//   dxnn diversity --config diversity.cfg
//   dxnn alife --scenario food --version 1 --runs 3 --out results/food

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dxnn/errors.hpp"
#include "dxnn/experiments.hpp"
#include "dxnn/persistence.hpp"

namespace {

struct Options {
    std::string config_file;
    std::vector<std::string> settings;
    // Flag name -> setting key, in the order given.
    std::vector<std::pair<std::string, std::string>> flags;
};

void add_common(CLI::App* cmd, Options& o)
{
    cmd->add_option("--config", o.config_file, "key=value config file");
    cmd->add_option("--set", o.settings, "override one setting (key=value), repeatable");
    auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
        cmd->add_option_function<std::string>(
            name, [&o, key](const std::string& v) { o.flags.emplace_back(key, v); }, help);
    };
    flag("--runs", "repetitions", "number of repetitions");
    flag("--seed", "seed", "base rng seed");
    flag("--out", "out", "output directory");
    flag("--workers", "workers", "parallel repetitions");
    flag("--population", "population", "population limit");
    flag("--base-max-mistakes", "base_max_mistakes", "BaseMaxMistakes");
    cmd->add_flag_callback("--no-wall-time", [&o] { o.flags.emplace_back("wall_time", "off"); },
                           "leave wall_seconds empty for reproducible output");
    if (cmd->get_name() != "alife") {
        flag("--variant", "variant", "xor | dpb-vel | dpb-novel-undamped | dpb-novel-damped");
        flag("--max-evaluations", "max_evaluations", "evaluation cap per run");
    }
    if (cmd->get_name() == "ablate") {
        flag("--sweep", "sweep", "base-max-mistakes | pop-size | weight-rim");
        flag("--values", "sweep_values", "comma separated sweep values");
    }
    if (cmd->get_name() == "diversity")
        flag("--generations", "generations", "generations to profile");
    if (cmd->get_name() == "alife") {
        flag("--scenario", "scenario", "food | poison | predprey");
        flag("--version", "version", "1..4");
        flag("--evaluations", "evaluation_cap", "evaluation cap");
        cmd->add_flag_callback("--replay", [&o] { o.flags.emplace_back("replay", "on"); }, "write replay logs");
    }
}

dxnn::ExperimentConfig build(dxnn::ExperimentKind kind, const Options& o)
{
    dxnn::ExperimentConfig c = dxnn::default_config(kind);
    if (!o.config_file.empty())
        dxnn::apply_file(c, o.config_file);
    for (const std::string& s : o.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw dxnn::ConfigError("--set expects key=value, got '" + s + "'");
        dxnn::apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [key, value] : o.flags)
        dxnn::apply_setting(c, key, value);
    dxnn::validate(c);
    return c;
}

void print_summary(const std::vector<dxnn::SummaryRow>& rows)
{
    dxnn::write_summary_csv(std::cout, rows);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DXNN neuroevolution experiments"};
    app.require_subcommand(1);
    Options bench_o, ablate_o, diversity_o, alife_o;
    CLI::App* bench = app.add_subcommand("bench", "repeated benchmark runs");
    CLI::App* ablate = app.add_subcommand("ablate", "parameter sweep");
    CLI::App* diversity = app.add_subcommand("diversity", "per-generation diversity profile");
    CLI::App* alife = app.add_subcommand("alife", "flatland scenarios");
    add_common(bench, bench_o);
    add_common(ablate, ablate_o);
    add_common(diversity, diversity_o);
    add_common(alife, alife_o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            const auto out = dxnn::run_experiment(build(dxnn::ExperimentKind::bench, bench_o));
            print_summary(out.summary);
        } else if (ablate->parsed()) {
            const auto out = dxnn::run_experiment(build(dxnn::ExperimentKind::ablate, ablate_o));
            print_summary(out.summary);
        } else if (diversity->parsed()) {
            std::cout << "generation,avg_diversity\n";
            for (const auto& p : dxnn::run_diversity_profile(build(dxnn::ExperimentKind::diversity, diversity_o)))
                std::cout << p.generation << ',' << dxnn::format_real(p.avg_diversity) << '\n';
        } else if (alife->parsed()) {
            std::cout << "run_id,species,baseline_fitness,final_fitness,pool_mean_fitness,color_connected\n";
            for (const auto& run : dxnn::run_alife(build(dxnn::ExperimentKind::alife, alife_o)))
                for (const auto& s : run.result.species)
                    std::cout << run.run_id << ',' << dxnn::to_string(s.species) << ','
                              << dxnn::format_real(s.baseline_fitness) << ',' << dxnn::format_real(s.final_fitness)
                              << ',' << dxnn::format_real(s.pool_mean_fitness) << ',' << s.color_connected << '\n';
        }
    } catch (const dxnn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const dxnn::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
