#include "psofit/swarm.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace psofit;

namespace {

double sphere(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return s;
}

Particle make_particle(Vector x, double best_value)
{
    Particle p;
    p.position = x;
    p.velocity = Vector(x.size(), 0.0);
    p.best_position = std::move(x);
    p.best_value = best_value;
    return p;
}

bool same_state(const Swarm& a, const Swarm& b)
{
    if (a.particles.size() != b.particles.size())
        return false;
    for (std::size_t i = 0; i < a.particles.size(); ++i) {
        const auto& p = a.particles[i];
        const auto& q = b.particles[i];
        if (p.position != q.position || p.velocity != q.velocity ||
            p.best_position != q.best_position || p.best_value != q.best_value)
            return false;
    }
    return a.global_best.position == b.global_best.position &&
           a.global_best.value == b.global_best.value;
}

/// Reference iteration written straight from the update equations, with the
/// attractor chosen by `attractor_of`. Shares only the Rng with the library.
template <typename AttractorFn>
void reference_step(Swarm& swarm, const Objective& f, const BoxDomain& dom, const SwarmConfig& cfg,
                    Rng& rng, AttractorFn attractor_of)
{
    const std::size_t n = swarm.particles.size();
    const std::size_t d = dom.dimension();
    const std::vector<Particle> start = swarm.particles;
    for (std::size_t i = 0; i < n; ++i) {
        auto& p = swarm.particles[i];
        const Vector pref = attractor_of(start, i);
        Vector r1(d), r2(d);
        if (cfg.scalar_r) {
            std::fill(r1.begin(), r1.end(), rng.uniform01());
            std::fill(r2.begin(), r2.end(), rng.uniform01());
        } else {
            for (auto& r : r1)
                r = rng.uniform01();
            for (auto& r : r2)
                r = rng.uniform01();
        }
        for (std::size_t j = 0; j < d; ++j) {
            double v = cfg.w * p.velocity[j] + cfg.c1 * r1[j] * (p.best_position[j] - p.position[j]) +
                       cfg.c2 * r2[j] * (pref[j] - p.position[j]);
            double x = p.position[j] + v;
            if (x < dom.lower[j]) {
                x = dom.lower[j];
                v = 0.0;
            } else if (x > dom.upper[j]) {
                x = dom.upper[j];
                v = 0.0;
            }
            p.position[j] = x;
            p.velocity[j] = v;
        }
        const double value = f(p.position);
        if (value < p.best_value) {
            p.best_value = value;
            p.best_position = p.position;
        }
    }
    for (const auto& p : swarm.particles)
        if (p.best_value < swarm.global_best.value)
            swarm.global_best = {p.best_position, p.best_value};
}

} // namespace

TEST_SUITE("swarm_core")
{
    TEST_CASE("init_swarm draws positions in the box and half-range velocities")
    {
        const BoxDomain dom{{0.0}, {1.0}};
        SwarmConfig cfg;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            const Swarm s = init_swarm(dom, cfg, sphere, rng);
            REQUIRE(s.particles.size() == 10);
            for (const auto& p : s.particles) {
                CHECK(p.position[0] >= 0.0);
                CHECK(p.position[0] <= 1.0);
                CHECK(p.velocity[0] >= -0.5);
                CHECK(p.velocity[0] <= 0.5);
                CHECK(p.best_position == p.position);
                CHECK(p.best_value == sphere(p.position));
            }
            CHECK(s.global_best.value == s.particles[select_global_best(s.particles)].best_value);
        }
    }

    TEST_CASE("init_swarm on a zero-width domain")
    {
        const BoxDomain dom{{3.0}, {3.0}};
        Rng rng(11);
        const Swarm s = init_swarm(dom, SwarmConfig{}, sphere, rng);
        for (const auto& p : s.particles) {
            CHECK(p.position[0] == 3.0);
            CHECK(p.velocity[0] == 0.0);
        }
    }

    TEST_CASE("init_swarm is deterministic in the seed")
    {
        const BoxDomain dom{{-1.0, 0.0, 5.0}, {1.0, 2.0, 9.0}};
        Rng a(42), b(42);
        CHECK(same_state(init_swarm(dom, SwarmConfig{}, sphere, a),
                         init_swarm(dom, SwarmConfig{}, sphere, b)));
    }

    TEST_CASE("non-finite objective values become +inf and never win")
    {
        const BoxDomain dom{{0.0}, {1.0}};
        const Objective f = [](std::span<const double> x) {
            return x[0] < 0.5 ? std::numeric_limits<double>::quiet_NaN() : x[0];
        };
        Rng rng(5);
        const Swarm s = init_swarm(dom, SwarmConfig{}, f, rng);
        bool any_finite = false;
        for (const auto& p : s.particles) {
            if (p.position[0] < 0.5)
                CHECK(p.best_value == std::numeric_limits<double>::infinity());
            else
                any_finite = true;
        }
        REQUIRE(any_finite);
        CHECK(std::isfinite(s.global_best.value));

        const Objective all_bad = [](std::span<const double>) { return -std::numeric_limits<double>::infinity(); };
        Rng rng2(5);
        const Swarm bad = init_swarm(dom, SwarmConfig{}, all_bad, rng2);
        CHECK(bad.global_best.value == std::numeric_limits<double>::infinity());
    }

    TEST_CASE("velocity_update")
    {
        const Vector zero{0.0, 0.0}, half{0.5, 0.5}, x{1.0, -2.0};
        CHECK(velocity_update(zero, x, x, x, 0.9, 1.5, 0.3, half, half) == Vector{0.0, 0.0});
        CHECK(velocity_update(Vector{1.0, 2.0}, x, zero, zero, 1.0, 0.0, 0.0, half, half) ==
              Vector{1.0, 2.0});
        // 0.9 + 1.5*0.5*2 + 0.3*0.5*4
        const Vector v = velocity_update(Vector{1.0}, Vector{0.0}, Vector{2.0}, Vector{4.0}, 0.9,
                                         1.5, 0.3, Vector{0.5}, Vector{0.5});
        CHECK(v[0] == doctest::Approx(3.0).epsilon(1e-15));
    }

    TEST_CASE("position_update with absorbing boundary")
    {
        const BoxDomain dom{{0.0}, {5.0}};
        auto m = position_update(Vector{1.0}, Vector{2.0}, dom);
        CHECK(m.position == Vector{3.0});
        CHECK(m.velocity == Vector{2.0});
        m = position_update(Vector{4.0}, Vector{3.0}, dom);
        CHECK(m.position == Vector{5.0});
        CHECK(m.velocity == Vector{0.0});
        m = position_update(Vector{0.5}, Vector{-1.0}, dom);
        CHECK(m.position == Vector{0.0});
        CHECK(m.velocity == Vector{0.0});
    }

    TEST_CASE("select_global_best picks the lowest value, earliest index on ties")
    {
        std::vector<Particle> ps{make_particle({0.0}, 3), make_particle({1.0}, 1), make_particle({2.0}, 2)};
        CHECK(select_global_best(ps) == 1);
        ps = {make_particle({0.0}, 2), make_particle({1.0}, 2), make_particle({2.0}, 5)};
        CHECK(select_global_best(ps) == 0);
        ps = {make_particle({7.0}, 9)};
        CHECK(select_global_best(ps) == 0);
    }

    TEST_CASE("select_neighborhood_best matches brute-force ranking")
    {
        std::vector<Particle> ps{make_particle({0.0}, 5), make_particle({1.0}, 4),
                                 make_particle({2.0}, 3), make_particle({10.0}, 0)};
        CHECK(oracle::neighborhood_best_brute({{0.0}, {1.0}, {2.0}, {10.0}}, {5, 4, 3, 0}, 0, 2) == 1);
        CHECK(select_neighborhood_best(ps, 0, 2) == 1);
        CHECK(ps[select_neighborhood_best(ps, 0, 2)].best_value == 4.0);

        // random swarms, every (i, m)
        Rng rng(99);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 2 + rng() % 9;
            std::vector<Particle> sw;
            std::vector<std::vector<double>> pos;
            std::vector<double> vals;
            for (std::size_t i = 0; i < n; ++i) {
                // coarse lattice so distance and value ties occur
                Vector x{std::floor(rng.uniform(0, 4)), std::floor(rng.uniform(0, 4))};
                const double v = std::floor(rng.uniform(0, 3));
                sw.push_back(make_particle(x, v));
                pos.push_back(x);
                vals.push_back(v);
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t m = 1; m <= n; ++m)
                    REQUIRE(select_neighborhood_best(sw, i, m) ==
                            oracle::neighborhood_best_brute(pos, vals, i, m));
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(select_neighborhood_best(sw, i, n) == select_global_best(sw));
                CHECK(select_neighborhood_best(sw, i, 1) == i);
            }
        }
    }

    TEST_CASE("select_neighborhood_best rejects m outside [1, n]")
    {
        std::vector<Particle> ps{make_particle({0.0}, 1), make_particle({1.0}, 2)};
        CHECK_THROWS_AS(select_neighborhood_best(ps, 0, 3), ValidationError);
        CHECK_THROWS_AS(select_neighborhood_best(ps, 0, 0), ValidationError);
    }

    TEST_CASE("step leaves a converged swarm unchanged")
    {
        const BoxDomain dom{{-1.0, -1.0}, {1.0, 1.0}};
        Swarm s;
        for (int i = 0; i < 4; ++i)
            s.particles.push_back(make_particle({0.0, 0.0}, 0.0));
        s.global_best = {{0.0, 0.0}, 0.0};
        const Swarm before = s;
        Rng rng(1);
        for (auto topo : {Topology::Gbest, Topology::Lbest}) {
            SwarmConfig cfg;
            cfg.topology = topo;
            cfg.n_particles = 4;
            cfg.m_neighbors = 2;
            step(s, sphere, dom, cfg, rng);
            CHECK(same_state(s, before));
        }
    }

    TEST_CASE("step matches the reference update for gbest (vector and scalar r)")
    {
        const BoxDomain dom{{-5.0, -5.0, -5.0}, {5.0, 5.0, 5.0}};
        for (bool scalar : {false, true}) {
            SwarmConfig cfg;
            cfg.scalar_r = scalar;
            Rng ra(3), rb(3);
            Swarm a = init_swarm(dom, cfg, sphere, ra);
            Swarm b = init_swarm(dom, cfg, sphere, rb);
            for (int k = 0; k < 30; ++k) {
                step(a, sphere, dom, cfg, ra);
                reference_step(b, sphere, dom, cfg, rb, [](const std::vector<Particle>& ps, std::size_t) {
                    std::size_t g = 0;
                    for (std::size_t j = 1; j < ps.size(); ++j)
                        if (ps[j].best_value < ps[g].best_value)
                            g = j;
                    return ps[g].best_position;
                });
                REQUIRE(same_state(a, b));
            }
        }
    }

    TEST_CASE("self-neighborhood reduces to the personal-best-only update")
    {
        const BoxDomain dom{{-5.0, -5.0}, {5.0, 5.0}};
        SwarmConfig cfg;
        cfg.topology = Topology::Lbest;
        cfg.m_neighbors = 1;
        Rng ra(17), rb(17);
        Swarm a = init_swarm(dom, cfg, sphere, ra);
        Swarm b = init_swarm(dom, cfg, sphere, rb);
        for (int k = 0; k < 50; ++k) {
            step(a, sphere, dom, cfg, ra);
            reference_step(b, sphere, dom, cfg, rb,
                           [](const std::vector<Particle>& ps, std::size_t i) { return ps[i].best_position; });
            REQUIRE(same_state(a, b));
        }
    }

    TEST_CASE("lbest with m = n follows the gbest trajectory exactly")
    {
        const BoxDomain dom{{-3.0, 0.0, 1.0, 1.0}, {3.0, 1.0, 4.0, 50.0}};
        const Objective f = [](std::span<const double> x) {
            return std::sin(3 * x[0]) + (x[1] - 0.3) * (x[1] - 0.3) + std::abs(x[2] - 2) + std::floor(x[3]) / 10;
        };
        for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
            SwarmConfig g;
            g.seed = seed;
            SwarmConfig l = g;
            l.topology = Topology::Lbest;
            l.m_neighbors = l.n_particles;
            Rng ra(seed), rb(seed);
            Swarm a = init_swarm(dom, g, f, ra);
            Swarm b = init_swarm(dom, l, f, rb);
            for (int k = 0; k < 100; ++k) {
                const double before = a.global_best.value;
                step(a, f, dom, g, ra);
                step(b, f, dom, l, rb);
                REQUIRE(same_state(a, b));
                CHECK(a.global_best.value <= before);
            }
        }
    }

    TEST_CASE("box containment and personal-best dominance hold every iteration")
    {
        const BoxDomain dom{{-2.0, 10.0}, {-1.0, 10.5}};
        const Objective f = [](std::span<const double> x) { return std::cos(7 * x[0]) * x[1]; };
        for (auto topo : {Topology::Gbest, Topology::Lbest}) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                SwarmConfig cfg;
                cfg.topology = topo;
                cfg.w = 1.8; // aggressive, so the boundary gets hit
                cfg.c1 = 2.0;
                Rng rng(seed);
                Swarm s = init_swarm(dom, cfg, f, rng);
                for (int k = 0; k < 60; ++k) {
                    step(s, f, dom, cfg, rng);
                    for (const auto& p : s.particles) {
                        REQUIRE(dom.contains(p.position));
                        REQUIRE(p.best_value <= f(p.position));
                        REQUIRE(p.best_value == f(p.best_position));
                    }
                }
            }
        }
    }

    TEST_CASE("optimize finds the minimizer of a 1-d quadratic")
    {
        const Objective f = [](std::span<const double> x) { return (x[0] - 0.3) * (x[0] - 0.3); };
        // dense grid oracle over [0, 1] at step 1e-6
        double grid_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 1000000; ++i) {
            const double x = i * 1e-6;
            grid_min = std::min(grid_min, (x - 0.3) * (x - 0.3));
        }
        SwarmConfig cfg;
        const OptResult r = optimize(f, BoxDomain{{0.0}, {1.0}}, cfg);
        CHECK(r.best_value < 1e-4);
        CHECK(r.best_value - grid_min < 1e-4);
        CHECK(r.trace.size() == 100);
        CHECK(r.best_value == r.trace.back());
    }

    TEST_CASE("optimize on a constant objective")
    {
        const OptResult r = optimize([](std::span<const double>) { return 7.0; }, BoxDomain{{0, 0}, {1, 1}},
                                     SwarmConfig{});
        CHECK(r.best_value == 7.0);
        CHECK(std::all_of(r.trace.begin(), r.trace.end(), [](double v) { return v == 7.0; }));
    }

    TEST_CASE("optimize is deterministic and its trace is monotone")
    {
        const BoxDomain dom{{-5.0, -5.0}, {5.0, 5.0}};
        for (auto topo : {Topology::Gbest, Topology::Lbest}) {
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                SwarmConfig cfg;
                cfg.topology = topo;
                cfg.seed = seed;
                const OptResult a = optimize(sphere, dom, cfg);
                const OptResult b = optimize(sphere, dom, cfg);
                CHECK(a.best_position == b.best_position);
                CHECK(a.trace == b.trace);
                for (std::size_t k = 1; k < a.trace.size(); ++k)
                    REQUIRE(a.trace[k] <= a.trace[k - 1]);
            }
        }
    }

    TEST_CASE("sphere sanity: median over 50 seeds below 1e-2")
    {
        std::vector<double> finals;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            SwarmConfig cfg;
            cfg.seed = seed;
            finals.push_back(optimize(sphere, BoxDomain{{-5, -5}, {5, 5}}, cfg).best_value);
        }
        std::nth_element(finals.begin(), finals.begin() + 25, finals.end());
        CHECK(finals[25] < 1e-2);
    }

    TEST_CASE("validation happens before any evaluation")
    {
        int calls = 0;
        const Objective counting = [&](std::span<const double>) {
            ++calls;
            return 0.0;
        };
        CHECK_THROWS_AS(optimize(counting, BoxDomain{{1.0}, {0.0}}, SwarmConfig{}), ValidationError);
        CHECK_THROWS_AS(optimize(counting, BoxDomain{{}, {}}, SwarmConfig{}), ValidationError);
        CHECK_THROWS_AS(optimize(counting, BoxDomain{{0.0, 0.0}, {1.0}}, SwarmConfig{}), ValidationError);
        SwarmConfig cfg;
        cfg.topology = Topology::Lbest;
        cfg.m_neighbors = 11;
        CHECK_THROWS_AS(optimize(counting, BoxDomain{{0.0}, {1.0}}, cfg), ValidationError);
        cfg = SwarmConfig{};
        cfg.n_particles = 0;
        CHECK_THROWS_AS(optimize(counting, BoxDomain{{0.0}, {1.0}}, cfg), ValidationError);
        cfg = SwarmConfig{};
        cfg.n_iterations = 0;
        CHECK_THROWS_AS(optimize(counting, BoxDomain{{0.0}, {1.0}}, cfg), ValidationError);
        CHECK(calls == 0);
    }

    TEST_CASE("coefficients outside [0, 2] warn but do not fail")
    {
        SwarmConfig cfg;
        CHECK(cfg.validate().empty());
        cfg.w = 2.5;
        cfg.c2 = -0.1;
        CHECK(cfg.validate().size() == 2);
        cfg.c1 = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(cfg.validate(), ValidationError);
    }

    TEST_CASE("topology names")
    {
        CHECK(parse_topology("gbest") == Topology::Gbest);
        CHECK(parse_topology("lbest") == Topology::Lbest);
        CHECK(to_string(Topology::Lbest) == "lbest");
        CHECK_THROWS_AS(parse_topology("ring"), ValidationError);
    }
}
