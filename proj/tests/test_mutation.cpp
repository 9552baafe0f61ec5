#include <doctest.h>

#include <algorithm>

#include "dxnn/errors.hpp"
#include "dxnn/mutation.hpp"
#include "dxnn/phenotype.hpp"
#include "oracles.hpp"

using namespace dxnn;

namespace {

struct Fixture {
    IdAllocator ids;
    Rng rng{21};
    MutationConfig config;
    std::set<ElementId> touched;

    DxnnGenotype seed(std::size_t sensor_len = 1)
    {
        const SensorTemplate in{"in", sensor_len, true};
        const ActuatorTemplate out{"out", 1, true};
        return create_seed_genotype(std::span(&in, 1), std::span(&out, 1), SeedOptions{}, ids, rng);
    }

    bool apply(DxnnGenotype& g, MutationOp op) { return apply_operator(g, op, config, ids, rng, touched); }
};

std::size_t link_endpoints(const DxnnGenotype& g)
{
    std::size_t n = 0;
    for (const NeuronElement& x : g.neurons)
        n += x.inputs.size() + x.outputs.size();
    return n;
}

} // namespace

TEST_CASE("one-neuron parent receives exactly one operator")
{
    Fixture f;
    const DxnnGenotype parent = f.seed();
    for (int i = 0; i < 50; ++i) {
        MutationReport report;
        const DxnnGenotype child = mutate_offspring(parent, f.config, f.ids, f.rng, &report);
        CHECK(report.drawn_count == 1);
        CHECK(report.applied.size() == 1);
        CHECK(child.core.generation == parent.core.generation + 1);
        CHECK(child.id != parent.id);
    }
}

TEST_CASE("operators without a legal site are redrawn")
{
    Fixture f;
    DxnnGenotype parent = f.seed();
    parent.neurons[0].bias = 0.1;
    std::size_t redraws = 0;
    for (int i = 0; i < 100; ++i) {
        MutationReport report;
        mutate_offspring(parent, f.config, f.ids, f.rng, &report);
        redraws += report.redraws;
        CHECK(std::find(report.applied.begin(), report.applied.end(), MutationOp::add_bias) == report.applied.end());
        CHECK(std::find(report.applied.begin(), report.applied.end(), MutationOp::change_af) == report.applied.end());
    }
    CHECK(redraws > 0);
}

TEST_CASE("add_neuron grows the network by one")
{
    Fixture f;
    DxnnGenotype g = f.seed();
    const std::size_t before = link_endpoints(g);
    REQUIRE(f.apply(g, MutationOp::add_neuron));
    CHECK(g.size() == 2);
    CHECK(link_endpoints(g) >= before + 2);
    for (int i = 0; i < 49; ++i)
        REQUIRE(f.apply(g, MutationOp::add_neuron));
    CHECK(g.size() == 51);
    CHECK(check_invariants(g).empty());
}

TEST_CASE("new neurons carry the phase generation")
{
    Fixture f;
    const DxnnGenotype parent = f.seed();
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
        MutationReport report;
        const DxnnGenotype child = mutate_offspring(parent, f.config, f.ids, f.rng, &report);
        if (report.applied == std::vector<MutationOp>{MutationOp::add_neuron}) {
            CHECK(child.neurons.back().generation == child.core.generation);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("add_link never duplicates a link")
{
    Fixture f;
    DxnnGenotype g = f.seed();
    // Single neuron: possible new links are the self-loop and nothing else.
    REQUIRE(f.apply(g, MutationOp::add_link));
    CHECK(has_neuron_link(g, g.neurons[0].id, g.neurons[0].id));
    CHECK(g.neurons[0].weights.size() == 2);
    CHECK_FALSE(f.apply(g, MutationOp::add_link));
}

TEST_CASE("single link on a long sensor adds one weight")
{
    Fixture f;
    DxnnGenotype g = f.seed(100);
    IdAllocator more(1000);
    NeuronElement extra = make_neuron(more.next(ElementKind::neuron), "tanh", "none", 0);
    const ElementId id = extra.id;
    g.neurons.push_back(extra);
    connect_sensor(g, 0, id, LinkType::single, f.rng);
    const NeuronElement& n = *g.find_neuron(id);
    CHECK(n.weights.size() == 1);
    const FanoutEntry& e = g.core.sensors[0].fanout.back();
    CHECK(e.type == LinkType::single);
    CHECK(e.index < 100);
}

TEST_CASE("splice puts a neuron in the middle of a link")
{
    Fixture f;
    DxnnGenotype g = f.seed();
    const ElementId a = g.neurons[0].id;
    connect_neurons(g, a, a, f.rng);
    REQUIRE(f.apply(g, MutationOp::splice_neuron));
    REQUIRE(g.size() == 2);
    const ElementId c = g.neurons[1].id;
    CHECK_FALSE(has_neuron_link(g, a, a));
    CHECK(has_neuron_link(g, a, c));
    CHECK(has_neuron_link(g, c, a));
}

TEST_CASE("splice on a feed-forward link adds one hop")
{
    Fixture f;
    DxnnGenotype g = f.seed();
    const ElementId a = g.neurons[0].id;
    NeuronElement extra = make_neuron(f.ids.next(ElementKind::neuron), "tanh", "none", 0);
    const ElementId b = extra.id;
    g.neurons.push_back(std::move(extra));
    g.core.supervised.push_back(b);
    connect_neurons(g, a, b, f.rng);
    REQUIRE(f.apply(g, MutationOp::splice_neuron));
    REQUIRE(g.size() == 3);
    const ElementId c = g.neurons.back().id;
    CHECK_FALSE(has_neuron_link(g, a, b));
    CHECK(has_neuron_link(g, a, c));
    CHECK(has_neuron_link(g, c, b));
}

TEST_CASE("add_bias adds one weight and only once")
{
    Fixture f;
    DxnnGenotype g = f.seed();
    const std::size_t before = g.neurons[0].weight_count();
    REQUIRE(f.apply(g, MutationOp::add_bias));
    CHECK(g.neurons[0].weight_count() == before + 1);
    CHECK_FALSE(f.apply(g, MutationOp::add_bias));
}

TEST_CASE("tag changes need an alternative")
{
    Fixture f;
    DxnnGenotype g = f.seed();
    CHECK_FALSE(f.apply(g, MutationOp::change_af));
    CHECK_FALSE(f.apply(g, MutationOp::change_lm));
    f.config.learning_methods = {"none", "hebbian"};
    REQUIRE(f.apply(g, MutationOp::change_lm));
    CHECK(g.neurons[0].learning == "hebbian");
    g.neurons[0].weights.assign(g.neurons[0].weights.size(), 0.5);
    Phenotype p = compile(g);
    const std::vector<double> x{1.0};
    p.step_flat(x);
    CHECK(p.weights(g.neurons[0].id)[0] != 0.5);
}

TEST_CASE("add_sensor_tag connects an unused sensor")
{
    Fixture f;
    const std::vector<SensorTemplate> sensors{{"range", 5, true}, {"color", 5, false}};
    const ActuatorTemplate drive{"drive", 2, true};
    DxnnGenotype g = create_seed_genotype(sensors, std::span(&drive, 1), SeedOptions{}, f.ids, f.rng);
    REQUIRE_FALSE(g.core.sensors[1].in_use());
    REQUIRE(f.apply(g, MutationOp::add_sensor_tag));
    CHECK(g.core.sensors[1].in_use());
    CHECK_FALSE(f.apply(g, MutationOp::add_sensor_tag));
    CHECK(check_invariants(g).empty());
}

TEST_CASE("add_actuator_tag fills every slot of the actuator")
{
    Fixture f;
    const SensorTemplate in{"in", 1, true};
    const std::vector<ActuatorTemplate> acts{{"out", 1, true}, {"extra", 2, false}};
    DxnnGenotype g = create_seed_genotype(std::span(&in, 1), acts, SeedOptions{}, f.ids, f.rng);
    REQUIRE(f.apply(g, MutationOp::add_actuator_tag));
    CHECK(g.core.actuators[1].fanin.size() == 2);
    CHECK(check_invariants(g).empty());
    CHECK_FALSE(f.apply(g, MutationOp::add_actuator_tag));
}

TEST_CASE("new weights follow the configured initial range")
{
    Fixture f;
    f.config.initial_weight_range = 0.05;
    DxnnGenotype g = f.seed();
    const std::vector<double> old = g.neurons[0].weights;
    for (int i = 0; i < 30; ++i)
        f.apply(g, MutationOp::add_neuron);
    for (const NeuronElement& n : g.neurons)
        for (std::size_t k = 0; k < n.weights.size(); ++k)
            if (!(n.id == g.neurons[0].id && k < old.size()))
                CHECK(std::abs(n.weights[k]) <= 0.05);
}

TEST_CASE("mutation config validation")
{
    MutationConfig c;
    c.sensor_tag_probability = 1.5;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = MutationConfig{};
    c.activations.clear();
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = MutationConfig{};
    c.initial_weight_range = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("mutation closure and operator-count uniformity")
{
    const testing::Check closure = testing::mutation_closure(2000, 3);
    INFO(closure.detail);
    CHECK(closure.pass);
    const testing::Check chi = testing::mutation_count_uniformity(5000, 5);
    INFO(chi.detail);
    CHECK(chi.pass);
}
