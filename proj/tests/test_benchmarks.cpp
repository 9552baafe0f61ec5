#include <doctest.h>

#include <cmath>

#include "dxnn/benchmarks.hpp"
#include "dxnn/errors.hpp"
#include "oracles.hpp"

using namespace dxnn;

namespace {

DxnnGenotype zero_controller(const Task& task)
{
    IdAllocator ids;
    Rng rng(1);
    DxnnGenotype g = create_seed_genotype(task.sensors, task.actuators, SeedOptions{}, ids, rng);
    for (NeuronElement& n : g.neurons)
        std::fill(n.weights.begin(), n.weights.end(), 0.0);
    return g;
}

// |x1 - x2| - 1 through an abs hidden neuron and a linear output.
DxnnGenotype perfect_xor()
{
    IdAllocator ids;
    Rng rng(1);
    DxnnGenotype g;
    g.id = ids.next(ElementKind::network);
    g.core.id = ids.next(ElementKind::core);
    g.core.sensors.push_back(SensorSpec{ids.next(ElementKind::sensor), "xor_input", 2, {}});
    g.core.actuators.push_back(ActuatorSpec{ids.next(ElementKind::actuator), "xor_output", 1, {}});
    g.neurons.push_back(make_neuron(ids.next(ElementKind::neuron), "abs", "none", 0));
    g.neurons.push_back(make_neuron(ids.next(ElementKind::neuron), "linear", "none", 0));
    const ElementId h = g.neurons[0].id, o = g.neurons[1].id;
    g.core.supervised = {h, o};
    connect_sensor(g, 0, h, LinkType::block, rng);
    connect_neurons(g, h, o, rng);
    connect_actuator(g, 0, o);
    g.find_neuron(h)->weights = {1.0, -1.0};
    g.find_neuron(o)->weights = {1.0};
    g.find_neuron(o)->bias = -1.0;
    return g;
}

std::vector<CartPoleState> synthetic_trajectory(std::size_t n)
{
    std::vector<CartPoleState> out;
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k);
        out.push_back(CartPoleState{0.01 * kk, -0.02 * std::sin(kk), 0.001 * kk, 0.05 * std::cos(kk), 0.0, 0.0});
    }
    return out;
}

} // namespace

TEST_CASE("upright cart with no force stays at rest")
{
    const CartPoleConstants c;
    const CartPoleState s{};
    CHECK(rk4_step(s, 0.0, 0.01, c) == s);
}

TEST_CASE("RK4 step converges to an extrapolated fine Euler integrator at fifth order")
{
    const testing::Check check = testing::physics_step_convergence();
    INFO(check.detail);
    CHECK(check.pass);
}

TEST_CASE("frictionless free motion conserves energy")
{
    const testing::Check check = testing::physics_energy_drift(1000);
    INFO(check.detail);
    CHECK(check.pass);
    CartPoleConstants c;
    const CartPoleState s{0.1, 0.2, 0.05, -0.3, 0.01, 0.4};
    CHECK(mechanical_energy(s, c) == doctest::Approx(testing::reference_energy(s, c)).epsilon(1e-12));
}

TEST_CASE("bounds are strict")
{
    CartPoleState s;
    s.x = kTrackLimit;
    CHECK_FALSE(out_of_bounds(s));
    s.x = std::nextafter(kTrackLimit, 10.0);
    CHECK(out_of_bounds(s));
    s = CartPoleState{};
    s.theta2 = -kAngleLimit;
    CHECK_FALSE(out_of_bounds(s));
}

TEST_CASE("force mapping")
{
    const DpbConfig c;
    CHECK(dpb_force(0.0, c) == 0.0);
    CHECK(dpb_force(1.0, c) == 10.0);
    CHECK(dpb_force(-7.0, c) == -10.0);
    CHECK(dpb_force(1e-6, c) == doctest::Approx(10.0 / 256.0));
    CHECK(dpb_force(-1e-6, c) == doctest::Approx(-10.0 / 256.0));
}

TEST_CASE("observations per variant")
{
    const DpbConfig c;
    const CartPoleState s{1.2, 5.0, 0.262, 2.5, 0.1, 1.0};
    CHECK(dpb_input_width(DpbVariant::with_velocities) == 6);
    CHECK(dpb_input_width(DpbVariant::no_velocities_damped) == 3);
    const std::vector<double> full = dpb_observation(s, DpbVariant::with_velocities, c);
    CHECK(full[0] == doctest::Approx(0.5));
    CHECK(full[1] == doctest::Approx(0.5));
    CHECK(dpb_observation(s, DpbVariant::no_velocities_undamped, c).size() == 3);
}

TEST_CASE("damped fitness matches the reference script")
{
    CHECK(damped_fitness(synthetic_trajectory(99), 1000) == doctest::Approx(0.0099).epsilon(1e-12));
    CHECK(damped_fitness(synthetic_trajectory(100), 1000) == doctest::Approx(0.021460814098548477).epsilon(1e-12));
    CHECK(damped_fitness(synthetic_trajectory(250), 1000) == doctest::Approx(0.028014354992238668).epsilon(1e-12));
}

TEST_CASE("a silent controller drops the poles")
{
    const DpbConfig config;
    for (DpbVariant v : {DpbVariant::with_velocities, DpbVariant::no_velocities_damped}) {
        Phenotype p = compile(zero_controller(dpb_task(v, config)));
        const DpbEpisode e = run_dpb_episode(p, config, v);
        CHECK(e.steps < 1000);
        CHECK_FALSE(e.solved);
    }
}

TEST_CASE("surviving the horizon counts as solved")
{
    DpbConfig config;
    config.horizon = 10;
    Phenotype p = compile(zero_controller(dpb_task(DpbVariant::with_velocities, config)));
    const DpbEpisode e = run_dpb_episode(p, config, DpbVariant::with_velocities);
    CHECK(e.solved);
    CHECK(e.steps == 10);
    CHECK(DpbConfig{}.horizon == 100000);
}

TEST_CASE("XOR fitness")
{
    Phenotype perfect = compile(perfect_xor());
    const XorResult r = xor_fitness(perfect);
    CHECK(r.solved);
    CHECK(r.fitness == doctest::Approx(1.0 / kXorEpsilon));

    Phenotype silent = compile(zero_controller(xor_task()));
    const XorResult z = xor_fitness(silent);
    CHECK_FALSE(z.solved);
    CHECK(z.fitness == doctest::Approx(1.0 / (kXorEpsilon + 4.0)));
}

TEST_CASE("a single monotone neuron cannot solve XOR")
{
    DxnnGenotype g = zero_controller(xor_task());
    REQUIRE(g.size() == 1);
    Rng rng(6);
    for (const char* af : {"tanh", "linear"}) {
        g.neurons[0].activation = af;
        for (int i = 0; i < 2000; ++i) {
            for (double& w : g.neurons[0].weights)
                w = uniform_real(rng, -5.0, 5.0);
            g.neurons[0].bias = uniform_real(rng, -5.0, 5.0);
            Phenotype p = compile(g);
            CHECK_FALSE(xor_fitness(p).solved);
        }
    }
}

TEST_CASE("evolution on the velocity task reaches a short horizon")
{
    DpbConfig dc;
    dc.horizon = 2000;
    const Task task = dpb_task(DpbVariant::with_velocities, dc);
    RunConfig rc;
    rc.seed = 3;
    const RunResult r = run_evolution(task, rc);
    CHECK(r.solved);
    CHECK(r.failure == FailureCause::none);
    CHECK(r.evaluations <= rc.max_evaluations);
    CHECK(r.neurons == r.champion.size());
}

TEST_CASE("generation hook sees every tuned population")
{
    RunConfig rc;
    rc.seed = 4;
    rc.stop_when_solved = false;
    rc.max_generations = 2;
    std::vector<std::size_t> seen;
    const RunResult r = run_evolution(xor_task(), rc, [&](std::size_t gen, const std::vector<DxnnGenotype>& pop) {
        seen.push_back(gen);
        CHECK(pop.size() <= rc.population_limit);
        for (const DxnnGenotype& g : pop)
            CHECK(g.fitness.has_value());
    });
    CHECK(seen == std::vector<std::size_t>{0, 1, 2});
    CHECK(r.failure == FailureCause::none);
    CHECK(r.generations == 2);
}

TEST_CASE("evaluation cap ends a run as a failure")
{
    RunConfig rc;
    rc.max_evaluations = 30;
    rc.seed = 2;
    const RunResult r = run_evolution(dpb_task(DpbVariant::no_velocities_damped), rc);
    CHECK_FALSE(r.solved);
    CHECK(r.failure == FailureCause::evaluation_cap);
    CHECK(r.evaluations <= 30);
}

TEST_CASE("runs are reproducible from the seed")
{
    RunConfig rc;
    rc.seed = 11;
    rc.max_evaluations = 400;
    const RunResult a = run_evolution(xor_task(), rc);
    const RunResult b = run_evolution(xor_task(), rc);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(structurally_equal(a.champion, b.champion));
}

TEST_CASE("variant names parse")
{
    CHECK(parse_dpb_variant("dpb-vel") == DpbVariant::with_velocities);
    CHECK(parse_dpb_variant("dpb-novel-damped") == DpbVariant::no_velocities_damped);
    CHECK_FALSE(parse_dpb_variant("cartpole").has_value());
}
