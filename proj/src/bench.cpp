#include "psofit/bench.hpp"

#include "psofit/format.hpp"
#include "psofit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace psofit {

std::vector<std::string> ExperimentConfig::validate(Topology topology) const
{
    if (restarts < 1)
        throw ValidationError("restarts must be at least 1");
    SwarmConfig swarm_cfg = swarm;
    swarm_cfg.topology = topology;
    auto warnings = swarm_cfg.validate();
    if (!(bounds.k_min < bounds.k_max))
        throw ValidationError("k bounds must satisfy k_min < k_max");
    if (bounds.phi_max < 1)
        throw ValidationError("phi_max must be at least 1");
    return warnings;
}

SampleStats summarize(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("cannot summarize an empty sample");
    const double n = static_cast<double>(values.size());

    SampleStats stats;
    stats.best = *std::min_element(values.begin(), values.end());
    stats.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - stats.mean) * (v - stats.mean);
        stats.std = std::sqrt(ss / (n - 1.0));
    }

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    stats.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return stats;
}

RunSummary run_restarts(const Dataset& data, const ExperimentConfig& cfg, Topology topology,
                        int setting_id)
{
    cfg.validate(topology);
    const BoxDomain domain = build_domain(data, cfg.bounds);
    const Objective objective = make_objective(data);

    RunSummary summary;
    summary.setting_id = setting_id;
    summary.topology = topology;
    summary.per_restart.reserve(cfg.restarts);

    std::vector<double> values;
    values.reserve(cfg.restarts);
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        SwarmConfig swarm = cfg.swarm;
        swarm.topology = topology;
        swarm.seed = mix64(cfg.master_seed, r);
        OptResult result = optimize(objective, domain, swarm);
        values.push_back(result.best_value);
        summary.per_restart.push_back({swarm.seed, result.best_value, std::move(result.best_position)});
    }

    const SampleStats stats = summarize(values);
    summary.best = stats.best;
    summary.mean = stats.mean;
    summary.std = stats.std;
    summary.median = stats.median;

    const auto best_it = std::min_element(values.begin(), values.end());
    summary.best_params =
        decode_position(summary.per_restart[static_cast<std::size_t>(best_it - values.begin())].position);
    return summary;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::span<const int> settings)
{
    if (settings.empty())
        throw ValidationError("at least one setting is required");
    cfg.validate(Topology::Gbest);
    cfg.validate(Topology::Lbest);

    ExperimentResult result;
    for (int id : settings) {
        const Setting& setting = builtin_setting(id);
        Dataset data = generate_dataset(setting, cfg.data_seed);
        result.summaries.push_back(run_restarts(data, cfg, Topology::Gbest, id));
        result.summaries.push_back(run_restarts(data, cfg, Topology::Lbest, id));
        result.datasets.push_back({id, std::move(data)});
    }
    return result;
}

namespace {

std::vector<const RunSummary*> sorted_rows(std::span<const RunSummary> summaries)
{
    std::vector<const RunSummary*> rows;
    for (const auto& s : summaries)
        rows.push_back(&s);
    std::stable_sort(rows.begin(), rows.end(), [](const RunSummary* a, const RunSummary* b) {
        if (a->setting_id != b->setting_id)
            return a->setting_id < b->setting_id;
        return static_cast<int>(a->topology) < static_cast<int>(b->topology);
    });
    return rows;
}

} // namespace

std::string emit_results_table(std::span<const RunSummary> summaries)
{
    std::ostringstream out;
    out << "setting,topology,best,mean,std,median\n";
    for (const RunSummary* s : sorted_rows(summaries))
        out << s->setting_id << ',' << to_string(s->topology) << ',' << format_fixed(s->best, 2)
            << ',' << format_fixed(s->mean, 2) << ',' << format_fixed(s->std, 2) << ','
            << format_fixed(s->median, 2) << '\n';
    return out.str();
}

std::string emit_params_table(std::span<const RunSummary> summaries)
{
    std::ostringstream out;
    out << "setting,topology,k_g,t_g,mu_g,phi_g\n";
    for (const RunSummary* s : sorted_rows(summaries)) {
        const NbParams& p = s->best_params;
        out << s->setting_id << ',' << to_string(s->topology) << ',' << format_fixed(p.k_g, 4)
            << ',' << format_fixed(p.t_g, 4) << ',' << format_fixed(p.mu_g, 4) << ',' << p.phi_g
            << '\n';
    }
    return out.str();
}

std::string emit_fit_curve(const NbParams& params, const std::optional<NbParams>& true_params,
                           std::size_t grid_size)
{
    if (grid_size < 2)
        throw std::invalid_argument("curve grid needs at least 2 points");
    std::ostringstream out;
    out << "t,tau_fit" << (true_params ? ",tau_true" : "") << '\n';
    const double last = static_cast<double>(grid_size - 1);
    for (std::size_t j = 0; j < grid_size; ++j) {
        const double t = static_cast<double>(j) / last;
        out << format_shortest(t) << ',' << format_shortest(sigmoid_mean(t, params));
        if (true_params)
            out << ',' << format_shortest(sigmoid_mean(t, *true_params));
        out << '\n';
    }
    return out.str();
}

void to_json(nlohmann::json& j, const NbParams& p)
{
    j = {{"k_g", p.k_g}, {"t_g", p.t_g}, {"mu_g", p.mu_g}, {"phi_g", p.phi_g}};
}

void from_json(const nlohmann::json& j, NbParams& p)
{
    j.at("k_g").get_to(p.k_g);
    j.at("t_g").get_to(p.t_g);
    j.at("mu_g").get_to(p.mu_g);
    j.at("phi_g").get_to(p.phi_g);
}

void to_json(nlohmann::json& j, const RunSummary& s)
{
    nlohmann::json restarts = nlohmann::json::array();
    for (std::size_t r = 0; r < s.per_restart.size(); ++r) {
        const auto& o = s.per_restart[r];
        restarts.push_back({{"restart", r}, {"seed", o.seed}, {"value", o.value}, {"position", o.position}});
    }
    j = {{"setting_id", s.setting_id},
         {"topology", std::string(to_string(s.topology))},
         {"best", s.best},
         {"mean", s.mean},
         {"std", s.std},
         {"median", s.median},
         {"best_params", s.best_params},
         {"per_restart", std::move(restarts)}};
}

void from_json(const nlohmann::json& j, RunSummary& s)
{
    j.at("setting_id").get_to(s.setting_id);
    s.topology = parse_topology(j.at("topology").get<std::string>());
    j.at("best").get_to(s.best);
    j.at("mean").get_to(s.mean);
    j.at("std").get_to(s.std);
    j.at("median").get_to(s.median);
    j.at("best_params").get_to(s.best_params);
    s.per_restart.clear();
    for (const auto& r : j.at("per_restart"))
        s.per_restart.push_back({r.at("seed").get<std::uint64_t>(), r.at("value").get<double>(),
                                 r.at("position").get<Vector>()});
}

void to_json(nlohmann::json& j, const ExperimentConfig& cfg)
{
    j = {{"restarts", cfg.restarts},
         {"w", cfg.swarm.w},
         {"c1", cfg.swarm.c1},
         {"c2", cfg.swarm.c2},
         {"particles", cfg.swarm.n_particles},
         {"iters", cfg.swarm.n_iterations},
         {"m", cfg.swarm.m_neighbors},
         {"scalar_r", cfg.swarm.scalar_r},
         {"k_min", cfg.bounds.k_min},
         {"k_max", cfg.bounds.k_max},
         {"phi_max", cfg.bounds.phi_max},
         {"master_seed", cfg.master_seed},
         {"data_seed", cfg.data_seed}};
}

} // namespace psofit
