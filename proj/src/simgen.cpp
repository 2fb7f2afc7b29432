#include "psofit/simgen.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace psofit {

const std::vector<Setting>& builtin_settings()
{
    static const std::vector<Setting> settings = {
        {1, 400, {7.0, 0.4, 6.0, 25}},   {2, 400, {-8.0, 0.85, 4.0, 80}},
        {3, 400, {1.6, 1.0, 1.4, 2}},    {4, 100, {7.0, 0.4, 6.0, 25}},
        {5, 100, {-8.0, 0.85, 4.0, 80}}, {6, 100, {1.6, 1.0, 1.4, 2}},
    };
    return settings;
}

const Setting& builtin_setting(int id)
{
    const auto& all = builtin_settings();
    if (id < 1 || id > static_cast<int>(all.size()))
        throw ValidationError("setting must be in 1..6 (got " + std::to_string(id) + ")");
    return all[static_cast<std::size_t>(id - 1)];
}

std::vector<double> sample_pseudotimes(std::size_t cells, Rng& rng)
{
    if (cells < 1)
        throw ValidationError("number of cells must be at least 1");
    std::vector<double> times(cells);
    for (auto& t : times)
        t = rng.uniform01();
    return times;
}

std::int64_t sample_nb(double tau, int phi, Rng& rng)
{
    if (!(tau > 0.0))
        throw std::domain_error("negative-binomial mean must be positive");
    if (phi < 1)
        throw std::domain_error("negative-binomial dispersion must be at least 1");
    std::gamma_distribution<double> gamma(static_cast<double>(phi), tau / phi);
    const double lambda = gamma(rng);
    if (!(lambda > 0.0))
        return 0;
    std::poisson_distribution<std::int64_t> poisson(lambda);
    return poisson(rng);
}

Dataset generate_dataset(const Setting& setting, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<double> times = sample_pseudotimes(setting.cells, rng);
    std::vector<std::int64_t> counts(times.size());
    for (std::size_t c = 0; c < times.size(); ++c)
        counts[c] = sample_nb(sigmoid_mean(times[c], setting.params), setting.params.phi_g, rng);
    return Dataset(std::move(times), std::move(counts));
}

} // namespace psofit
