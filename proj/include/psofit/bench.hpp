#pragma once

#include "psofit/model.hpp"
#include "psofit/simgen.hpp"
#include "psofit/swarm.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psofit {

struct RestartOutcome
{
    std::uint64_t seed = 0;
    double value = 0.0;
    Vector position;
};

/// Statistics over the terminal best values of a batch of restarts.
struct RunSummary
{
    int setting_id = 0; ///< 0 when the data did not come from a built-in setting
    Topology topology = Topology::Gbest;
    double best = 0.0;
    double mean = 0.0;
    double std = 0.0; ///< sample standard deviation (divisor R - 1); 0 when R == 1
    double median = 0.0;
    NbParams best_params;
    std::vector<RestartOutcome> per_restart;
};

struct ExperimentConfig
{
    std::size_t restarts = 50;
    SwarmConfig swarm; ///< seed and topology are set per run
    ModelBounds bounds;
    std::uint64_t master_seed = 0;
    std::uint64_t data_seed = 0;

    /// Validates against `topology`; returns swarm warnings.
    std::vector<std::string> validate(Topology topology) const;
};

struct SampleStats
{
    double best = 0.0;
    double mean = 0.0;
    double std = 0.0;
    double median = 0.0;
};

SampleStats summarize(std::span<const double> values);

/// Restart r runs with seed mix64(cfg.master_seed, r) on the same dataset.
RunSummary run_restarts(const Dataset& data, const ExperimentConfig& cfg, Topology topology,
                        int setting_id = 0);

struct SettingData
{
    int setting_id;
    Dataset data;
};

struct ExperimentResult
{
    std::vector<SettingData> datasets;
    /// Ordered by setting, gbest before lbest.
    std::vector<RunSummary> summaries;
};

/// Generates each setting's dataset once from cfg.data_seed and fits it with
/// both topologies under the same master seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::span<const int> settings);

std::string emit_results_table(std::span<const RunSummary> summaries);
std::string emit_params_table(std::span<const RunSummary> summaries);
std::string emit_fit_curve(const NbParams& params, const std::optional<NbParams>& true_params,
                           std::size_t grid_size);

void to_json(nlohmann::json& j, const NbParams& p);
void from_json(const nlohmann::json& j, NbParams& p);
void to_json(nlohmann::json& j, const RunSummary& s);
void from_json(const nlohmann::json& j, RunSummary& s);
void to_json(nlohmann::json& j, const ExperimentConfig& cfg);

} // namespace psofit
