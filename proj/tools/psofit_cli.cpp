// psofit: simulate datasets, fit the sigmoid negative-binomial model with
// particle swarm optimization, and run the multi-restart benchmark.

#include "psofit/bench.hpp"
#include "psofit/model.hpp"
#include "psofit/simgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Knobs
{
    double w = 0.9;
    double c1 = 1.5;
    double c2 = 0.3;
    std::size_t particles = 10;
    std::size_t iters = 100;
    std::size_t m = 5;
    std::size_t restarts = 50;
    double k_min = -20.0;
    double k_max = 20.0;
    int phi_max = 200;
    bool scalar_r = false;

    psofit::ExperimentConfig to_config() const
    {
        psofit::ExperimentConfig cfg;
        cfg.restarts = restarts;
        cfg.swarm.w = w;
        cfg.swarm.c1 = c1;
        cfg.swarm.c2 = c2;
        cfg.swarm.n_particles = particles;
        cfg.swarm.n_iterations = iters;
        cfg.swarm.m_neighbors = m;
        cfg.swarm.scalar_r = scalar_r;
        cfg.bounds = {k_min, k_max, phi_max};
        return cfg;
    }
};

void add_knobs(CLI::App* cmd, Knobs& k)
{
    cmd->add_option("--w", k.w, "Inertia weight")->capture_default_str();
    cmd->add_option("--c1", k.c1, "Cognitive coefficient")->capture_default_str();
    cmd->add_option("--c2", k.c2, "Social coefficient")->capture_default_str();
    cmd->add_option("--particles", k.particles, "Swarm size")->capture_default_str();
    cmd->add_option("--iters", k.iters, "Iterations per run")->capture_default_str();
    cmd->add_option("--m", k.m, "Neighborhood size (lbest)")->capture_default_str();
    cmd->add_option("--restarts", k.restarts, "Independent runs")->capture_default_str();
    cmd->add_option("--k-min", k.k_min, "Lower bound on k")->capture_default_str();
    cmd->add_option("--k-max", k.k_max, "Upper bound on k")->capture_default_str();
    cmd->add_option("--phi-max", k.phi_max, "Upper bound on phi")->capture_default_str();
    cmd->add_flag("--scalar-r", k.scalar_r, "One r1/r2 draw per particle instead of per dimension");
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag)
{
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

/// Appends `--key=value` for every entry of the --config JSON file whose
/// flag was not given explicitly on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty())
        return args;

    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    const json doc = json::parse(in);
    if (!doc.is_object())
        throw std::runtime_error("config file must hold a JSON object");

    for (const auto& [key, value] : doc.items()) {
        const std::string flag = "--" + key;
        if (key == "config" || has_flag(args, flag))
            continue;
        if (value.is_boolean()) {
            if (value.get<bool>())
                args.push_back(flag);
        } else if (value.is_string()) {
            args.push_back(flag + "=" + value.get<std::string>());
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& item : value)
                joined += (joined.empty() ? "" : ",") + (item.is_string() ? item.get<std::string>() : item.dump());
            args.push_back(flag + "=" + joined);
        } else {
            args.push_back(flag + "=" + value.dump());
        }
    }
    return args;
}

std::vector<int> parse_settings(const std::string& text)
{
    if (text == "all")
        return {1, 2, 3, 4, 5, 6};
    std::vector<int> ids;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        std::size_t used = 0;
        const int id = std::stoi(item, &used);
        if (used != item.size())
            throw psofit::ValidationError("bad setting id '" + item + "'");
        psofit::builtin_setting(id);
        if (std::find(ids.begin(), ids.end(), id) == ids.end())
            ids.push_back(id);
    }
    if (ids.empty())
        throw psofit::ValidationError("--settings needs at least one id");
    std::sort(ids.begin(), ids.end());
    return ids;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void report_warnings(const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config(std::move(args));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    CLI::App app{"Particle swarm fitting of a sigmoidal negative-binomial pseudotime model"};
    app.require_subcommand(1);
    std::string config_path;

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a built-in simulation dataset");
    int sim_setting = 0;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    simulate->add_option("--setting", sim_setting, "Setting id (1..6)")->required();
    simulate->add_option("--seed", sim_seed, "Data seed")->capture_default_str();
    simulate->add_option("--out", sim_out, "Output CSV path")->required();
    simulate->add_option("--config", config_path, "JSON file supplying any flag");

    // fit
    auto* fit = app.add_subcommand("fit", "Fit a t,y CSV with repeated PSO runs");
    Knobs fit_knobs;
    std::string fit_data, fit_topology, fit_out;
    std::uint64_t fit_seed = 0;
    fit->add_option("--data", fit_data, "Input CSV (t,y)")->required();
    fit->add_option("--topology", fit_topology, "gbest or lbest")
        ->required()
        ->check(CLI::IsMember({"gbest", "lbest"}));
    add_knobs(fit, fit_knobs);
    fit->add_option("--seed", fit_seed, "Master seed for restarts")->capture_default_str();
    fit->add_option("--out", fit_out, "Output JSON path")->required();
    fit->add_option("--config", config_path, "JSON file supplying any flag");

    // bench
    auto* bench = app.add_subcommand("bench", "Run the multi-restart benchmark over built-in settings");
    Knobs bench_knobs;
    std::string bench_settings = "all", bench_out_dir;
    std::uint64_t bench_data_seed = 0, bench_seed = 0;
    std::size_t grid = 101;
    bench->add_option("--settings", bench_settings, "Comma-separated ids or 'all'")->capture_default_str();
    bench->add_option("--data-seed", bench_data_seed, "Seed for dataset generation")->capture_default_str();
    bench->add_option("--seed", bench_seed, "Master seed for restarts")->capture_default_str();
    bench->add_option("--out-dir", bench_out_dir, "Output directory")->required();
    bench->add_option("--grid", grid, "Points in each fitted-curve file")->capture_default_str();
    add_knobs(bench, bench_knobs);
    bench->add_option("--config", config_path, "JSON file supplying any flag");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*simulate) {
            const psofit::Setting& setting = psofit::builtin_setting(sim_setting);
            const psofit::Dataset data = psofit::generate_dataset(setting, sim_seed);
            psofit::write_dataset_csv(fs::path(sim_out), data);
            std::cout << "wrote " << data.size() << " rows for setting " << setting.id << " to "
                      << sim_out << '\n';
        } else if (*fit) {
            const psofit::Topology topology = psofit::parse_topology(fit_topology);
            psofit::ExperimentConfig cfg = fit_knobs.to_config();
            cfg.master_seed = fit_seed;
            report_warnings(cfg.validate(topology));

            const psofit::Dataset data = psofit::read_dataset_csv(fs::path(fit_data));
            std::vector<std::string> domain_warnings;
            psofit::build_domain(data, cfg.bounds, &domain_warnings);
            report_warnings(domain_warnings);

            const psofit::RunSummary summary = psofit::run_restarts(data, cfg, topology);
            json doc = summary;
            doc["config"] = cfg;
            doc["data"] = fit_data;
            write_text(fit_out, doc.dump(2) + "\n");
            std::cout << psofit::emit_results_table({&summary, 1})
                      << psofit::emit_params_table({&summary, 1});
        } else if (*bench) {
            const std::vector<int> ids = parse_settings(bench_settings);
            if (grid < 2)
                throw psofit::ValidationError("--grid must be at least 2");
            psofit::ExperimentConfig cfg = bench_knobs.to_config();
            cfg.master_seed = bench_seed;
            cfg.data_seed = bench_data_seed;
            report_warnings(cfg.validate(psofit::Topology::Lbest));

            const psofit::ExperimentResult result = psofit::run_experiment(cfg, ids);

            const fs::path dir(bench_out_dir);
            fs::create_directories(dir);
            for (const auto& sd : result.datasets)
                psofit::write_dataset_csv(dir / ("data_" + std::to_string(sd.setting_id) + ".csv"), sd.data);
            write_text(dir / "results.csv", psofit::emit_results_table(result.summaries));
            write_text(dir / "params.csv", psofit::emit_params_table(result.summaries));
            for (const auto& s : result.summaries) {
                const auto& truth = psofit::builtin_setting(s.setting_id).params;
                write_text(dir / ("curve_" + std::to_string(s.setting_id) + "_" +
                                  std::string(psofit::to_string(s.topology)) + ".csv"),
                           psofit::emit_fit_curve(s.best_params, truth, grid));
            }
            json doc = {{"config", cfg}, {"settings", ids}, {"summaries", result.summaries}};
            write_text(dir / "run.json", doc.dump(2) + "\n");
            std::cout << psofit::emit_results_table(result.summaries);
        }
    } catch (const psofit::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
