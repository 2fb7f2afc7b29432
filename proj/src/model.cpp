#include "psofit/model.hpp"

#include "psofit/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace psofit {

namespace {

constexpr double kExpClamp = 700.0;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line, std::string_view column)
{
    text = trim(text);
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::runtime_error("line " + std::to_string(line) + ": cannot parse " +
                                 std::string(column) + " value '" + std::string(text) + "'");
    return value;
}

/// log C(y + phi - 1, y)
double log_binomial(std::int64_t y, int phi)
{
    return std::lgamma(static_cast<double>(y) + phi) - std::lgamma(static_cast<double>(y) + 1.0) -
           std::lgamma(static_cast<double>(phi));
}

} // namespace

Dataset::Dataset(std::vector<double> times, std::vector<std::int64_t> counts)
{
    if (times.size() != counts.size())
        throw ValidationError("dataset times and counts differ in length");
    if (times.empty())
        throw ValidationError("dataset must contain at least one row");
    for (std::size_t c = 0; c < times.size(); ++c) {
        if (!std::isfinite(times[c]))
            throw ValidationError("dataset time at row " + std::to_string(c) + " is not finite");
        if (counts[c] < 0)
            throw ValidationError("dataset count at row " + std::to_string(c) + " is negative");
    }

    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return times[a] != times[b] ? times[a] < times[b] : counts[a] < counts[b];
    });
    times_.reserve(order.size());
    counts_.reserve(order.size());
    for (std::size_t idx : order) {
        times_.push_back(times[idx]);
        counts_.push_back(counts[idx]);
    }

    std::vector<std::int64_t> sorted = counts_;
    std::sort(sorted.begin(), sorted.end());
    for (std::int64_t y : sorted) {
        if (histogram_.empty() || histogram_.back().first != y)
            histogram_.emplace_back(y, 0);
        ++histogram_.back().second;
    }
}

Dataset Dataset::concat(const Dataset& a, const Dataset& b)
{
    std::vector<double> times = a.times_;
    std::vector<std::int64_t> counts = a.counts_;
    times.insert(times.end(), b.times_.begin(), b.times_.end());
    counts.insert(counts.end(), b.counts_.begin(), b.counts_.end());
    return Dataset(std::move(times), std::move(counts));
}

double sigmoid_mean(double t, const NbParams& params)
{
    const double z = std::clamp(-params.k_g * (t - params.t_g), -kExpClamp, kExpClamp);
    const double tau = 2.0 * params.mu_g / (1.0 + std::exp(z));
    return std::max(tau, kTauFloor);
}

double nb_log_pmf(std::int64_t y, double tau, int phi)
{
    if (!(tau > 0.0))
        throw std::domain_error("negative-binomial mean must be positive");
    if (phi < 1)
        throw std::domain_error("negative-binomial dispersion must be at least 1");
    if (y < 0)
        throw std::domain_error("negative-binomial support is the non-negative integers");
    const double phi_d = phi;
    const double denom = tau + phi_d;
    return log_binomial(y, phi) + static_cast<double>(y) * std::log(tau / denom) +
           phi_d * std::log(phi_d / denom);
}

double neg_log_likelihood(const NbParams& params, const Dataset& data)
{
    if (params.phi_g < 1)
        throw std::domain_error("negative-binomial dispersion must be at least 1");
    const double phi = params.phi_g;

    // The binomial coefficient depends only on (y, phi): one lgamma triple per distinct count.
    double log_lik = 0.0;
    for (const auto& [y, multiplicity] : data.count_histogram())
        log_lik += static_cast<double>(multiplicity) * log_binomial(y, params.phi_g);

    const auto& times = data.times();
    const auto& counts = data.counts();
    for (std::size_t c = 0; c < times.size(); ++c) {
        const double tau = sigmoid_mean(times[c], params);
        const double denom = tau + phi;
        log_lik += static_cast<double>(counts[c]) * std::log(tau / denom) + phi * std::log(phi / denom);
    }
    return -log_lik;
}

BoxDomain build_domain(const Dataset& data, const ModelBounds& bounds,
                       std::vector<std::string>* warnings)
{
    if (!(bounds.k_min < bounds.k_max))
        throw ValidationError("k bounds must satisfy k_min < k_max");
    if (bounds.phi_max < 1)
        throw ValidationError("phi_max must be at least 1");

    const auto [t_lo, t_hi] = std::minmax_element(data.times().begin(), data.times().end());
    const auto [y_lo, y_hi] = std::minmax_element(data.counts().begin(), data.counts().end());

    const double mu_lo = std::max(static_cast<double>(*y_lo) / 2.0, kMuFloor);
    const double mu_hi = std::max(static_cast<double>(*y_hi) / 2.0, kMuFloor);
    if (warnings && mu_lo == mu_hi)
        warnings->push_back("all counts are equal; the mean-parameter box is a single point");

    BoxDomain domain{{bounds.k_min, *t_lo, mu_lo, 1.0},
                     {bounds.k_max, *t_hi, mu_hi, static_cast<double>(bounds.phi_max)}};
    domain.validate();
    return domain;
}

NbParams decode_position(std::span<const double> x)
{
    if (x.size() != 4)
        throw std::invalid_argument("model positions have exactly 4 coordinates");
    const double phi = std::max(std::floor(x[3] + 0.5), 1.0);
    return {x[0], x[1], x[2], static_cast<int>(phi)};
}

Objective make_objective(Dataset data)
{
    auto shared = std::make_shared<const Dataset>(std::move(data));
    return [shared](std::span<const double> x) {
        return neg_log_likelihood(decode_position(x), *shared);
    };
}

Dataset read_dataset_csv(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<double> times;
    std::vector<std::int64_t> counts;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty())
            continue;
        const std::size_t comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected two columns");
        if (!header_seen) {
            if (trim(row.substr(0, comma)) != "t" || trim(row.substr(comma + 1)) != "y")
                throw std::runtime_error("missing `t,y` header");
            header_seen = true;
            continue;
        }
        times.push_back(parse_field<double>(row.substr(0, comma), line_no, "t"));
        counts.push_back(parse_field<std::int64_t>(row.substr(comma + 1), line_no, "y"));
    }
    if (!header_seen)
        throw std::runtime_error("missing `t,y` header");
    return Dataset(std::move(times), std::move(counts));
}

Dataset read_dataset_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data)
{
    out << "t,y\n";
    for (std::size_t c = 0; c < data.size(); ++c)
        out << format_shortest(data.times()[c]) << ',' << data.counts()[c] << '\n';
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    write_dataset_csv(out, data);
}

} // namespace psofit
