#pragma once

#include "psofit/swarm.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace psofit {

/// Sigmoidal negative-binomial model parameters.
struct NbParams
{
    double k_g = 0.0;  ///< activation strength; its sign picks up- or down-regulation
    double t_g = 0.0;  ///< activation time (pseudotime of the sigmoid midpoint)
    double mu_g = 1.0; ///< average peak expression; the curve saturates at 2 * mu_g
    int phi_g = 1;     ///< negative-binomial dispersion

    friend bool operator==(const NbParams&, const NbParams&) = default;
};

/// Paired pseudotimes and counts for one gene.
///
/// Immutable. Rows are stored sorted by (time, count) so that every
/// reduction over the data is independent of input row order.
class Dataset
{
public:
    Dataset(std::vector<double> times, std::vector<std::int64_t> counts);

    std::size_t size() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

    /// Distinct count values with their multiplicities, ascending by count.
    const std::vector<std::pair<std::int64_t, std::size_t>>& count_histogram() const noexcept
    {
        return histogram_;
    }

    /// Rows of `a` followed by rows of `b`.
    static Dataset concat(const Dataset& a, const Dataset& b);

private:
    std::vector<double> times_;
    std::vector<std::int64_t> counts_;
    std::vector<std::pair<std::int64_t, std::size_t>> histogram_;
};

/// Smallest mean the link function returns.
inline constexpr double kTauFloor = 1e-12;
/// Lower bound substituted for the mean parameter when the smallest count is 0.
inline constexpr double kMuFloor = 1e-6;

/// 2 mu / (1 + exp(-k (t - t_g))), floored at kTauFloor.
double sigmoid_mean(double t, const NbParams& params);

/// Log of the mean-parameterized negative-binomial pmf at y.
/// Throws std::domain_error when tau <= 0 or phi < 1.
double nb_log_pmf(std::int64_t y, double tau, int phi);

/// -sum_c log P(y_c | sigmoid_mean(t_c), phi).
double neg_log_likelihood(const NbParams& params, const Dataset& data);

struct ModelBounds
{
    double k_min = -20.0;
    double k_max = 20.0;
    int phi_max = 200;
};

/// Search box over (k, t, mu, phi). t spans the observed pseudotimes and
/// 2 mu spans the observed counts. Any warnings (degenerate mean box) are
/// appended to `warnings` when it is non-null.
BoxDomain build_domain(const Dataset& data, const ModelBounds& bounds = {},
                       std::vector<std::string>* warnings = nullptr);

/// Maps a search position to parameters; phi rounds half-up and is clamped at 1.
NbParams decode_position(std::span<const double> x);

/// Negative log-likelihood as a function of the search position.
Objective make_objective(Dataset data);

/// `t,y` CSV with one row per cell.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

} // namespace psofit
