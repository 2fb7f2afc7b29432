#pragma once

#include "psofit/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psofit {

using Vector = std::vector<double>;

/// Objective to minimize. Must be a pure function of its argument; any
/// non-finite return is treated as +infinity by the optimizer.
using Objective = std::function<double(std::span<const double>)>;

/// Raised for invalid domains and configurations, before any evaluation.
class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Closed per-dimension box [lower[j], upper[j]].
struct BoxDomain
{
    Vector lower;
    Vector upper;

    std::size_t dimension() const noexcept { return lower.size(); }
    bool contains(std::span<const double> x) const noexcept;
    void validate() const;
};

enum class Topology { Gbest, Lbest };

std::string_view to_string(Topology topology) noexcept;
Topology parse_topology(std::string_view name);

struct SwarmConfig
{
    double w = 0.9;
    double c1 = 1.5;
    double c2 = 0.3;
    std::size_t n_particles = 10;
    Topology topology = Topology::Gbest;
    std::size_t m_neighbors = 5;
    std::size_t n_iterations = 100;
    std::uint64_t seed = 0;
    /// Draw one r1 and one r2 per particle per iteration instead of one per dimension.
    bool scalar_r = false;

    /// Throws ValidationError on hard errors; returns human-readable warnings
    /// for coefficients outside the customary [0, 2] range.
    std::vector<std::string> validate() const;
};

struct Particle
{
    Vector position;
    Vector velocity;
    Vector best_position;
    double best_value = 0.0;
};

struct BestRecord
{
    Vector position;
    double value = 0.0;
};

struct Swarm
{
    std::vector<Particle> particles;
    /// Swarm-wide best; replaced only on strict improvement.
    BestRecord global_best;
};

struct OptResult
{
    Vector best_position;
    double best_value = 0.0;
    /// Swarm-best value after each iteration.
    std::vector<double> trace;
};

/// Evaluates the objective, mapping NaN and infinities to +infinity.
double evaluate(const Objective& objective, std::span<const double> x);

Swarm init_swarm(const BoxDomain& domain, const SwarmConfig& config, const Objective& objective,
                 Rng& rng);

/// w*v + c1*r1*(p_i - x) + c2*r2*(p_ref - x), elementwise.
Vector velocity_update(std::span<const double> v, std::span<const double> x,
                       std::span<const double> p_i, std::span<const double> p_ref, double w,
                       double c1, double c2, std::span<const double> r1,
                       std::span<const double> r2);

struct Move
{
    Vector position;
    Vector velocity;
};

/// x + v_new with an absorbing boundary: a coordinate that leaves the box is
/// clamped to the violated bound and its velocity component set to zero.
Move position_update(std::span<const double> x, std::span<const double> v_new,
                     const BoxDomain& domain);

/// Index of the particle with the lowest best_value; lowest index wins ties.
std::size_t select_global_best(std::span<const Particle> particles);

/// Index of the particle with the lowest best_value among the m particles
/// nearest to particle i (by Euclidean distance between current positions).
/// Particle i always ranks first; remaining ties go to the lower index.
std::size_t select_neighborhood_best(std::span<const Particle> particles, std::size_t i,
                                     std::size_t m);

/// One synchronous iteration: every attractor is chosen from the state at
/// the start of the iteration, then all particles move.
void step(Swarm& swarm, const Objective& objective, const BoxDomain& domain,
          const SwarmConfig& config, Rng& rng);

OptResult optimize(const Objective& objective, const BoxDomain& domain, const SwarmConfig& config);

} // namespace psofit
