#include "psofit/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace psofit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        sum += diff * diff;
    }
    return sum;
}

void check_coefficient(std::string_view name, double value, std::vector<std::string>& warnings)
{
    if (!std::isfinite(value))
        throw ValidationError(std::string(name) + " must be finite");
    if (value < 0.0 || value > 2.0) {
        std::ostringstream msg;
        msg << name << " = " << value << " lies outside the customary range [0, 2]";
        warnings.push_back(msg.str());
    }
}

} // namespace

bool BoxDomain::contains(std::span<const double> x) const noexcept
{
    if (x.size() != dimension())
        return false;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (!(lower[j] <= x[j] && x[j] <= upper[j]))
            return false;
    return true;
}

void BoxDomain::validate() const
{
    if (lower.empty())
        throw ValidationError("domain must have at least one dimension");
    if (lower.size() != upper.size())
        throw ValidationError("domain lower and upper bounds differ in length");
    for (std::size_t j = 0; j < lower.size(); ++j) {
        if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]))
            throw ValidationError("domain bounds must be finite (dimension " + std::to_string(j) + ")");
        if (lower[j] > upper[j])
            throw ValidationError("domain lower bound exceeds upper bound (dimension " +
                                  std::to_string(j) + ")");
    }
}

std::string_view to_string(Topology topology) noexcept
{
    return topology == Topology::Gbest ? "gbest" : "lbest";
}

Topology parse_topology(std::string_view name)
{
    if (name == "gbest")
        return Topology::Gbest;
    if (name == "lbest")
        return Topology::Lbest;
    throw ValidationError("unknown topology '" + std::string(name) + "' (expected gbest or lbest)");
}

std::vector<std::string> SwarmConfig::validate() const
{
    std::vector<std::string> warnings;
    check_coefficient("w", w, warnings);
    check_coefficient("c1", c1, warnings);
    check_coefficient("c2", c2, warnings);
    if (n_particles < 1)
        throw ValidationError("n_particles must be at least 1");
    if (n_iterations < 1)
        throw ValidationError("n_iterations must be at least 1");
    if (topology == Topology::Lbest && (m_neighbors < 1 || m_neighbors > n_particles))
        throw ValidationError("m_neighbors must lie in [1, n_particles] (got " +
                              std::to_string(m_neighbors) + " with " +
                              std::to_string(n_particles) + " particles)");
    return warnings;
}

double evaluate(const Objective& objective, std::span<const double> x)
{
    const double value = objective(x);
    return std::isfinite(value) ? value : kInf;
}

Swarm init_swarm(const BoxDomain& domain, const SwarmConfig& config, const Objective& objective,
                 Rng& rng)
{
    const std::size_t d = domain.dimension();
    Swarm swarm;
    swarm.particles.resize(config.n_particles);
    for (auto& p : swarm.particles) {
        p.position.resize(d);
        p.velocity.resize(d);
        for (std::size_t j = 0; j < d; ++j)
            p.position[j] = rng.uniform(domain.lower[j], domain.upper[j]);
        for (std::size_t j = 0; j < d; ++j) {
            const double half = 0.5 * (domain.upper[j] - domain.lower[j]);
            p.velocity[j] = rng.uniform(-half, half);
        }
        p.best_position = p.position;
        p.best_value = evaluate(objective, p.position);
    }
    const std::size_t g = select_global_best(swarm.particles);
    swarm.global_best = {swarm.particles[g].best_position, swarm.particles[g].best_value};
    return swarm;
}

Vector velocity_update(std::span<const double> v, std::span<const double> x,
                       std::span<const double> p_i, std::span<const double> p_ref, double w,
                       double c1, double c2, std::span<const double> r1,
                       std::span<const double> r2)
{
    Vector out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        out[j] = w * v[j] + c1 * r1[j] * (p_i[j] - x[j]) + c2 * r2[j] * (p_ref[j] - x[j]);
    return out;
}

Move position_update(std::span<const double> x, std::span<const double> v_new,
                     const BoxDomain& domain)
{
    Move move{Vector(x.size()), Vector(x.size())};
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double candidate = x[j] + v_new[j];
        if (candidate < domain.lower[j]) {
            move.position[j] = domain.lower[j];
            move.velocity[j] = 0.0;
        } else if (candidate > domain.upper[j]) {
            move.position[j] = domain.upper[j];
            move.velocity[j] = 0.0;
        } else {
            move.position[j] = candidate;
            move.velocity[j] = v_new[j];
        }
    }
    return move;
}

std::size_t select_global_best(std::span<const Particle> particles)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < particles.size(); ++i)
        if (particles[i].best_value < particles[best].best_value)
            best = i;
    return best;
}

std::size_t select_neighborhood_best(std::span<const Particle> particles, std::size_t i,
                                     std::size_t m)
{
    const std::size_t n = particles.size();
    if (m < 1 || m > n)
        throw ValidationError("neighborhood size must lie in [1, n_particles]");

    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
        if (j != i)
            ranked.emplace_back(squared_distance(particles[j].position, particles[i].position), j);
    // Only the m - 1 nearest others are needed; pairs compare by (distance, index).
    const auto cut = ranked.begin() + static_cast<std::ptrdiff_t>(m - 1);
    std::partial_sort(ranked.begin(), cut, ranked.end());

    std::size_t best = i;
    for (auto it = ranked.begin(); it != cut; ++it) {
        const std::size_t j = it->second;
        const double vj = particles[j].best_value;
        const double vb = particles[best].best_value;
        if (vj < vb || (vj == vb && j < best))
            best = j;
    }
    return best;
}

void step(Swarm& swarm, const Objective& objective, const BoxDomain& domain,
          const SwarmConfig& config, Rng& rng)
{
    auto& particles = swarm.particles;
    const std::size_t n = particles.size();
    const std::size_t d = domain.dimension();

    // Attractors are snapshotted before anyone moves.
    std::vector<Vector> attractor(n);
    if (config.topology == Topology::Gbest) {
        const Vector& g = particles[select_global_best(particles)].best_position;
        std::fill(attractor.begin(), attractor.end(), g);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            attractor[i] = particles[select_neighborhood_best(particles, i, config.m_neighbors)]
                               .best_position;
    }

    Vector r1(d), r2(d);
    for (std::size_t i = 0; i < n; ++i) {
        Particle& p = particles[i];
        if (config.scalar_r) {
            std::fill(r1.begin(), r1.end(), rng.uniform01());
            std::fill(r2.begin(), r2.end(), rng.uniform01());
        } else {
            for (auto& r : r1)
                r = rng.uniform01();
            for (auto& r : r2)
                r = rng.uniform01();
        }
        const Vector v_new = velocity_update(p.velocity, p.position, p.best_position, attractor[i],
                                             config.w, config.c1, config.c2, r1, r2);
        Move move = position_update(p.position, v_new, domain);
        p.position = std::move(move.position);
        p.velocity = std::move(move.velocity);

        const double value = evaluate(objective, p.position);
        if (value < p.best_value) {
            p.best_value = value;
            p.best_position = p.position;
        }
    }

    const std::size_t g = select_global_best(particles);
    if (particles[g].best_value < swarm.global_best.value)
        swarm.global_best = {particles[g].best_position, particles[g].best_value};
}

OptResult optimize(const Objective& objective, const BoxDomain& domain, const SwarmConfig& config)
{
    domain.validate();
    config.validate();

    Rng rng(config.seed);
    Swarm swarm = init_swarm(domain, config, objective, rng);

    OptResult result;
    result.trace.reserve(config.n_iterations);
    for (std::size_t k = 0; k < config.n_iterations; ++k) {
        step(swarm, objective, domain, config, rng);
        result.trace.push_back(swarm.global_best.value);
    }
    result.best_position = swarm.global_best.position;
    result.best_value = swarm.global_best.value;
    return result;
}

} // namespace psofit
