#pragma once

#include "psofit/model.hpp"
#include "psofit/rng.hpp"

#include <cstdint>
#include <vector>

namespace psofit {

/// One simulation scenario: C cells drawn from the model at `params`.
struct Setting
{
    int id = 0;
    std::size_t cells = 0;
    NbParams params;
};

/// The six reference scenarios (three parameter sets at C = 400 and C = 100).
const std::vector<Setting>& builtin_settings();

/// Throws ValidationError unless 1 <= id <= 6.
const Setting& builtin_setting(int id);

/// C independent uniform pseudotimes on [0, 1).
std::vector<double> sample_pseudotimes(std::size_t cells, Rng& rng);

/// Negative-binomial draw with mean tau and dispersion phi, as a gamma-Poisson
/// mixture: lambda ~ Gamma(shape = phi, scale = tau / phi), y ~ Poisson(lambda).
std::int64_t sample_nb(double tau, int phi, Rng& rng);

/// Deterministic in (setting, seed).
Dataset generate_dataset(const Setting& setting, std::uint64_t seed);

} // namespace psofit
