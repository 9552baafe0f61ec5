#include "dxnn/genotype.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "dxnn/errors.hpp"

namespace dxnn {

namespace {

char kind_prefix(ElementKind kind)
{
    switch (kind) {
    case ElementKind::core: return 'c';
    case ElementKind::neuron: return 'n';
    case ElementKind::sensor: return 's';
    case ElementKind::actuator: return 'a';
    case ElementKind::bias: return 'b';
    case ElementKind::network: return 'x';
    case ElementKind::population: return 'p';
    }
    return '?';
}

const std::string& pick(const std::vector<std::string>& tags, Rng& rng)
{
    return tags[uniform_index(rng, tags.size())];
}

LinkType random_link_type(Rng& rng)
{
    return static_cast<LinkType>(uniform_index(rng, 3));
}

} // namespace

std::string to_string(ElementId id)
{
    return kind_prefix(id.kind) + std::to_string(id.serial);
}

std::optional<ElementId> parse_element_id(std::string_view text)
{
    if (text.size() < 2)
        return std::nullopt;
    ElementId id;
    switch (text.front()) {
    case 'c': id.kind = ElementKind::core; break;
    case 'n': id.kind = ElementKind::neuron; break;
    case 's': id.kind = ElementKind::sensor; break;
    case 'a': id.kind = ElementKind::actuator; break;
    case 'b': id.kind = ElementKind::bias; break;
    case 'x': id.kind = ElementKind::network; break;
    case 'p': id.kind = ElementKind::population; break;
    default: return std::nullopt;
    }
    const char* first = text.data() + 1;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, id.serial);
    if (ec != std::errc{} || ptr != last)
        return std::nullopt;
    return id;
}

std::string_view to_string(LinkType type)
{
    switch (type) {
    case LinkType::single: return "single";
    case LinkType::block: return "block";
    case LinkType::all: return "all";
    }
    return "?";
}

std::optional<LinkType> parse_link_type(std::string_view text)
{
    if (text == "single")
        return LinkType::single;
    if (text == "block")
        return LinkType::block;
    if (text == "all")
        return LinkType::all;
    return std::nullopt;
}

std::size_t NeuronElement::weight_offset(std::size_t k) const
{
    std::size_t offset = 0;
    for (std::size_t i = 0; i < k; ++i)
        offset += inputs[i].vector_length;
    return offset;
}

NeuronElement* DxnnGenotype::find_neuron(ElementId neuron)
{
    auto it = std::find_if(neurons.begin(), neurons.end(), [&](const NeuronElement& n) { return n.id == neuron; });
    return it == neurons.end() ? nullptr : &*it;
}

const NeuronElement* DxnnGenotype::find_neuron(ElementId neuron) const
{
    auto it = std::find_if(neurons.begin(), neurons.end(), [&](const NeuronElement& n) { return n.id == neuron; });
    return it == neurons.end() ? nullptr : &*it;
}

std::optional<std::size_t> DxnnGenotype::neuron_index(ElementId neuron) const
{
    for (std::size_t i = 0; i < neurons.size(); ++i)
        if (neurons[i].id == neuron)
            return i;
    return std::nullopt;
}

std::optional<std::size_t> DxnnGenotype::sensor_index(ElementId sensor) const
{
    for (std::size_t i = 0; i < core.sensors.size(); ++i)
        if (core.sensors[i].id == sensor)
            return i;
    return std::nullopt;
}

std::optional<std::size_t> DxnnGenotype::actuator_index(ElementId actuator) const
{
    for (std::size_t i = 0; i < core.actuators.size(); ++i)
        if (core.actuators[i].id == actuator)
            return i;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Wiring

double initial_weight(Rng& rng, double range)
{
    return uniform_real(rng, -range, range);
}

NeuronElement make_neuron(ElementId id, std::string activation, std::string learning, std::uint64_t generation)
{
    NeuronElement n;
    n.id = id;
    n.activation = std::move(activation);
    n.learning = std::move(learning);
    n.generation = generation;
    return n;
}

namespace {

NeuronElement& require_neuron(DxnnGenotype& g, ElementId id)
{
    NeuronElement* n = g.find_neuron(id);
    if (n == nullptr)
        throw ConfigError("no neuron " + to_string(id) + " in " + to_string(g.id));
    return *n;
}

void append_weights(NeuronElement& n, std::size_t count, Rng& rng, double range)
{
    for (std::size_t i = 0; i < count; ++i)
        n.weights.push_back(initial_weight(rng, range));
}

} // namespace

void connect_all(DxnnGenotype& g, std::vector<std::size_t> sensor_indices, ElementId neuron, Rng& rng,
                 double range)
{
    std::sort(sensor_indices.begin(), sensor_indices.end());
    sensor_indices.erase(std::unique(sensor_indices.begin(), sensor_indices.end()), sensor_indices.end());
    NeuronElement& n = require_neuron(g, neuron);
    std::size_t offset = 0;
    for (std::size_t s : sensor_indices) {
        SensorSpec& sensor = g.core.sensors.at(s);
        sensor.fanout.push_back(FanoutEntry{neuron, LinkType::all, offset});
        offset += sensor.vector_length;
    }
    n.inputs.push_back(InputLink{g.core.id, offset});
    append_weights(n, offset, rng, range);
}

void connect_sensor(DxnnGenotype& g, std::size_t sensor_index, ElementId neuron, LinkType type, Rng& rng,
                    double range)
{
    if (type == LinkType::all) {
        std::vector<std::size_t> participating{sensor_index};
        for (std::size_t s = 0; s < g.core.sensors.size(); ++s)
            if (g.core.sensors[s].in_use())
                participating.push_back(s);
        connect_all(g, std::move(participating), neuron, rng, range);
        return;
    }
    SensorSpec& sensor = g.core.sensors.at(sensor_index);
    NeuronElement& n = require_neuron(g, neuron);
    if (type == LinkType::single) {
        const std::size_t index = uniform_index(rng, sensor.vector_length);
        sensor.fanout.push_back(FanoutEntry{neuron, LinkType::single, index});
        n.inputs.push_back(InputLink{sensor.id, 1});
        append_weights(n, 1, rng, range);
    } else {
        sensor.fanout.push_back(FanoutEntry{neuron, LinkType::block, 0});
        n.inputs.push_back(InputLink{sensor.id, sensor.vector_length});
        append_weights(n, sensor.vector_length, rng, range);
    }
}

void connect_neurons(DxnnGenotype& g, ElementId from, ElementId to, Rng& rng, double range)
{
    NeuronElement& source = require_neuron(g, from);
    source.outputs.push_back(to);
    NeuronElement& dest = require_neuron(g, to);
    dest.inputs.push_back(InputLink{from, 1});
    append_weights(dest, 1, rng, range);
}

void connect_actuator(DxnnGenotype& g, std::size_t actuator_index, ElementId neuron)
{
    ActuatorSpec& actuator = g.core.actuators.at(actuator_index);
    require_neuron(g, neuron).outputs.push_back(actuator.id);
    actuator.fanin.push_back(neuron);
}

bool disconnect_neurons(DxnnGenotype& g, ElementId from, ElementId to)
{
    NeuronElement* dest = g.find_neuron(to);
    NeuronElement* source = g.find_neuron(from);
    if (dest == nullptr || source == nullptr)
        return false;
    auto in = std::find_if(dest->inputs.begin(), dest->inputs.end(),
                           [&](const InputLink& l) { return l.from == from; });
    if (in == dest->inputs.end())
        return false;
    const auto k = static_cast<std::size_t>(in - dest->inputs.begin());
    const std::size_t offset = dest->weight_offset(k);
    dest->weights.erase(dest->weights.begin() + static_cast<std::ptrdiff_t>(offset),
                        dest->weights.begin() + static_cast<std::ptrdiff_t>(offset + in->vector_length));
    dest->inputs.erase(in);
    auto out = std::find(source->outputs.begin(), source->outputs.end(), to);
    if (out != source->outputs.end())
        source->outputs.erase(out);
    return true;
}

bool has_neuron_link(const DxnnGenotype& g, ElementId from, ElementId to)
{
    const NeuronElement* dest = g.find_neuron(to);
    if (dest == nullptr)
        return false;
    return std::any_of(dest->inputs.begin(), dest->inputs.end(), [&](const InputLink& l) { return l.from == from; });
}

bool has_sensor_link(const DxnnGenotype& g, std::size_t sensor_index, ElementId neuron)
{
    const SensorSpec& sensor = g.core.sensors.at(sensor_index);
    return std::any_of(sensor.fanout.begin(), sensor.fanout.end(), [&](const FanoutEntry& e) {
        return e.neuron == neuron && e.type != LinkType::all;
    });
}

bool has_all_link(const DxnnGenotype& g, ElementId neuron)
{
    const NeuronElement* n = g.find_neuron(neuron);
    if (n == nullptr)
        return false;
    return std::any_of(n->inputs.begin(), n->inputs.end(),
                       [&](const InputLink& l) { return l.from.kind == ElementKind::core; });
}

// ---------------------------------------------------------------------------
// Seeding

DxnnGenotype create_seed_genotype(std::span<const SensorTemplate> sensors,
                                  std::span<const ActuatorTemplate> actuators,
                                  const SeedOptions& options, IdAllocator& ids, Rng& rng)
{
    if (options.activations.empty() || options.learning_methods.empty())
        throw ConfigError("seed options need at least one activation function and learning method");

    DxnnGenotype g;
    g.id = ids.next(ElementKind::network);
    g.core.id = ids.next(ElementKind::core);

    std::vector<std::size_t> connected_sensors;
    for (const SensorTemplate& t : sensors) {
        if (t.vector_length == 0)
            throw ConfigError("sensor '" + t.tag + "' has zero vector length");
        if (t.connected)
            connected_sensors.push_back(g.core.sensors.size());
        g.core.sensors.push_back(SensorSpec{ids.next(ElementKind::sensor), t.tag, t.vector_length, {}});
    }
    std::vector<std::size_t> connected_actuators;
    std::size_t output_width = 0;
    for (const ActuatorTemplate& t : actuators) {
        if (t.vector_length == 0)
            throw ConfigError("actuator '" + t.tag + "' has zero vector length");
        if (t.connected) {
            connected_actuators.push_back(g.core.actuators.size());
            output_width += t.vector_length;
        }
        g.core.actuators.push_back(ActuatorSpec{ids.next(ElementKind::actuator), t.tag, t.vector_length, {}});
    }
    if (connected_sensors.empty() || connected_actuators.empty())
        throw ConfigError("a seed needs at least one connected sensor and one connected actuator");

    auto new_neuron = [&]() -> ElementId {
        NeuronElement n = make_neuron(ids.next(ElementKind::neuron), pick(options.activations, rng),
                                      pick(options.learning_methods, rng), 0);
        g.neurons.push_back(std::move(n));
        return g.neurons.back().id;
    };

    auto link_to_sensor = [&](std::size_t sensor_index, ElementId neuron) {
        const LinkType type = random_link_type(rng);
        if (type == LinkType::all)
            connect_all(g, connected_sensors, neuron, rng, options.initial_weight_range);
        else
            connect_sensor(g, sensor_index, neuron, type, rng, options.initial_weight_range);
    };

    if (connected_sensors.size() == 1 && output_width == 1) {
        const ElementId n = new_neuron();
        link_to_sensor(connected_sensors.front(), n);
        connect_actuator(g, connected_actuators.front(), n);
    } else {
        std::vector<ElementId> first_layer;
        for (std::size_t s : connected_sensors) {
            const ElementId n = new_neuron();
            link_to_sensor(s, n);
            first_layer.push_back(n);
        }
        for (std::size_t a : connected_actuators) {
            for (std::size_t k = 0; k < g.core.actuators[a].vector_length; ++k) {
                const ElementId n = new_neuron();
                for (ElementId source : first_layer)
                    connect_neurons(g, source, n, rng, options.initial_weight_range);
                connect_actuator(g, a, n);
            }
        }
    }

    for (const NeuronElement& n : g.neurons)
        g.core.supervised.push_back(n.id);
    return g;
}

Population create_seed(std::span<const SensorTemplate> sensors, std::span<const ActuatorTemplate> actuators,
                       std::size_t count, const SeedOptions& options, std::uint64_t seed)
{
    if (count == 0)
        throw ConfigError("seed population must contain at least one genotype");
    Population pop;
    pop.rng_seed = seed;
    pop.limit = count;
    pop.id = pop.ids.next(ElementKind::population);
    Rng rng(seed);
    pop.members.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        pop.members.push_back(create_seed_genotype(sensors, actuators, options, pop.ids, rng));
    return pop;
}

// ---------------------------------------------------------------------------
// Cloning

DxnnGenotype clone_with_new_id(const DxnnGenotype& parent, IdAllocator& ids)
{
    std::map<ElementId, ElementId> remap;
    remap[parent.id] = ids.next(ElementKind::network);
    remap[parent.core.id] = ids.next(ElementKind::core);
    for (const SensorSpec& s : parent.core.sensors)
        remap[s.id] = ids.next(ElementKind::sensor);
    for (const ActuatorSpec& a : parent.core.actuators)
        remap[a.id] = ids.next(ElementKind::actuator);
    for (const NeuronElement& n : parent.neurons)
        remap[n.id] = ids.next(ElementKind::neuron);

    auto map_id = [&](ElementId id) {
        auto it = remap.find(id);
        return it == remap.end() ? id : it->second;
    };

    DxnnGenotype child = parent;
    child.fitness.reset();
    child.id = map_id(child.id);
    child.core.id = map_id(child.core.id);
    for (SensorSpec& s : child.core.sensors) {
        s.id = map_id(s.id);
        for (FanoutEntry& e : s.fanout)
            e.neuron = map_id(e.neuron);
    }
    for (ActuatorSpec& a : child.core.actuators) {
        a.id = map_id(a.id);
        for (ElementId& n : a.fanin)
            n = map_id(n);
    }
    for (ElementId& n : child.core.supervised)
        n = map_id(n);
    for (HistoryEntry& h : child.core.history)
        h.element = map_id(h.element);
    for (NeuronElement& n : child.neurons) {
        n.id = map_id(n.id);
        for (InputLink& in : n.inputs)
            in.from = map_id(in.from);
        for (ElementId& out : n.outputs)
            out = map_id(out);
    }
    return child;
}

// ---------------------------------------------------------------------------
// Invariants

std::vector<std::string> check_invariants(const DxnnGenotype& g)
{
    std::vector<std::string> errors;
    auto fail = [&](std::string msg) { errors.push_back(std::move(msg)); };

    std::set<ElementId> seen{g.id, g.core.id};
    auto claim = [&](ElementId id) {
        if (!seen.insert(id).second)
            fail("duplicate element id " + to_string(id));
    };
    for (const SensorSpec& s : g.core.sensors)
        claim(s.id);
    for (const ActuatorSpec& a : g.core.actuators)
        claim(a.id);
    for (const NeuronElement& n : g.neurons)
        claim(n.id);

    std::set<ElementId> neuron_ids;
    for (const NeuronElement& n : g.neurons)
        neuron_ids.insert(n.id);
    const std::set<ElementId> supervised(g.core.supervised.begin(), g.core.supervised.end());
    if (supervised != neuron_ids || supervised.size() != g.core.supervised.size())
        fail("supervised neuron ids differ from the neuron set");

    for (const NeuronElement& n : g.neurons) {
        const std::string who = to_string(n.id);
        if (n.generation > g.core.generation)
            fail(who + " generation exceeds core generation");
        if (n.inputs.empty())
            fail(who + " has no inputs");
        std::size_t expected = 0;
        std::set<ElementId> sources;
        for (const InputLink& in : n.inputs) {
            expected += in.vector_length;
            if (in.vector_length == 0)
                fail(who + " has a zero-length input");
            if (!sources.insert(in.from).second)
                fail(who + " has two inputs from " + to_string(in.from));

            switch (in.from.kind) {
            case ElementKind::neuron: {
                const NeuronElement* src = g.find_neuron(in.from);
                if (src == nullptr) {
                    fail(who + " input from missing neuron " + to_string(in.from));
                    break;
                }
                if (in.vector_length != 1)
                    fail(who + " neuron input must have length 1");
                if (std::count(src->outputs.begin(), src->outputs.end(), n.id) != 1)
                    fail("link " + to_string(in.from) + "->" + who + " not mirrored in output list");
                break;
            }
            case ElementKind::sensor: {
                auto si = g.sensor_index(in.from);
                if (!si) {
                    fail(who + " input from missing sensor " + to_string(in.from));
                    break;
                }
                const SensorSpec& s = g.core.sensors[*si];
                auto entries = std::count_if(s.fanout.begin(), s.fanout.end(), [&](const FanoutEntry& e) {
                    return e.neuron == n.id && e.type != LinkType::all;
                });
                if (entries != 1) {
                    fail("link " + to_string(s.id) + "->" + who + " not mirrored in sensor fanout");
                    break;
                }
                const FanoutEntry& e = *std::find_if(s.fanout.begin(), s.fanout.end(), [&](const FanoutEntry& f) {
                    return f.neuron == n.id && f.type != LinkType::all;
                });
                if (e.type == LinkType::single && (in.vector_length != 1 || e.index >= s.vector_length))
                    fail(who + " single link from " + to_string(s.id) + " out of range");
                if (e.type == LinkType::block && in.vector_length != s.vector_length)
                    fail(who + " block link length mismatch with " + to_string(s.id));
                break;
            }
            case ElementKind::core: {
                if (in.from != g.core.id) {
                    fail(who + " input from foreign core " + to_string(in.from));
                    break;
                }
                std::size_t total = 0;
                for (const SensorSpec& s : g.core.sensors) {
                    for (const FanoutEntry& e : s.fanout) {
                        if (e.neuron != n.id || e.type != LinkType::all)
                            continue;
                        if (e.index != total)
                            fail(who + " all-link segment offsets are not contiguous");
                        total += s.vector_length;
                    }
                }
                if (total != in.vector_length)
                    fail(who + " all-link length does not match its sensors");
                break;
            }
            default:
                fail(who + " input from invalid element " + to_string(in.from));
            }
        }
        if (expected != n.weights.size())
            fail(who + " weight count " + std::to_string(n.weights.size()) + " != " + std::to_string(expected));

        for (ElementId out : n.outputs) {
            if (out.kind == ElementKind::neuron) {
                const NeuronElement* dst = g.find_neuron(out);
                if (dst == nullptr || std::none_of(dst->inputs.begin(), dst->inputs.end(),
                                                   [&](const InputLink& l) { return l.from == n.id; }))
                    fail("output " + who + "->" + to_string(out) + " not mirrored in input list");
            } else if (out.kind == ElementKind::actuator) {
                auto ai = g.actuator_index(out);
                if (!ai) {
                    fail(who + " outputs to missing actuator " + to_string(out));
                    continue;
                }
                const auto& fanin = g.core.actuators[*ai].fanin;
                if (std::count(fanin.begin(), fanin.end(), n.id) !=
                    std::count(n.outputs.begin(), n.outputs.end(), out))
                    fail("output " + who + "->" + to_string(out) + " not mirrored in actuator fanin");
            } else {
                fail(who + " outputs to invalid element " + to_string(out));
            }
        }
    }

    for (const SensorSpec& s : g.core.sensors) {
        if (s.vector_length == 0)
            fail(to_string(s.id) + " has zero vector length");
        for (const FanoutEntry& e : s.fanout) {
            const NeuronElement* dst = g.find_neuron(e.neuron);
            if (dst == nullptr) {
                fail(to_string(s.id) + " routes to missing neuron " + to_string(e.neuron));
                continue;
            }
            const ElementId expected_from = e.type == LinkType::all ? g.core.id : s.id;
            if (std::none_of(dst->inputs.begin(), dst->inputs.end(),
                             [&](const InputLink& l) { return l.from == expected_from; }))
                fail(to_string(s.id) + " fanout to " + to_string(e.neuron) + " not mirrored in input list");
            if (e.type == LinkType::single && e.index >= s.vector_length)
                fail(to_string(s.id) + " single fanout index out of range");
        }
    }

    for (const ActuatorSpec& a : g.core.actuators) {
        if (a.active() && a.fanin.size() != a.vector_length)
            fail(to_string(a.id) + " fanin length " + std::to_string(a.fanin.size()) + " != vector length " +
                 std::to_string(a.vector_length));
        for (ElementId n : a.fanin) {
            const NeuronElement* src = g.find_neuron(n);
            if (src == nullptr || std::find(src->outputs.begin(), src->outputs.end(), a.id) == src->outputs.end())
                fail(to_string(a.id) + " fanin " + to_string(n) + " not mirrored in output list");
        }
    }

    // Reachability: from a sensor forwards, or into an actuator backwards.
    if (errors.empty()) {
        std::set<ElementId> from_sensor;
        std::vector<ElementId> frontier;
        for (const SensorSpec& s : g.core.sensors)
            for (const FanoutEntry& e : s.fanout)
                if (from_sensor.insert(e.neuron).second)
                    frontier.push_back(e.neuron);
        while (!frontier.empty()) {
            const ElementId cur = frontier.back();
            frontier.pop_back();
            for (ElementId out : g.find_neuron(cur)->outputs)
                if (out.kind == ElementKind::neuron && from_sensor.insert(out).second)
                    frontier.push_back(out);
        }
        std::set<ElementId> to_actuator;
        for (const ActuatorSpec& a : g.core.actuators)
            for (ElementId n : a.fanin)
                if (to_actuator.insert(n).second)
                    frontier.push_back(n);
        while (!frontier.empty()) {
            const ElementId cur = frontier.back();
            frontier.pop_back();
            for (const InputLink& in : g.find_neuron(cur)->inputs)
                if (in.from.kind == ElementKind::neuron && to_actuator.insert(in.from).second)
                    frontier.push_back(in.from);
        }
        for (const NeuronElement& n : g.neurons)
            if (!from_sensor.contains(n.id) && !to_actuator.contains(n.id))
                fail(to_string(n.id) + " is neither reachable from a sensor nor feeding an actuator");
    }
    return errors;
}

void validate(const DxnnGenotype& g)
{
    const auto errors = check_invariants(g);
    if (errors.empty())
        return;
    std::ostringstream msg;
    msg << "genotype " << to_string(g.id) << " is invalid:";
    for (std::size_t i = 0; i < errors.size() && i < 5; ++i)
        msg << "\n  " << errors[i];
    throw ConfigError(msg.str());
}

bool structurally_equal(const DxnnGenotype& a, const DxnnGenotype& b)
{
    if (a.neurons.size() != b.neurons.size() || a.core.sensors.size() != b.core.sensors.size() ||
        a.core.actuators.size() != b.core.actuators.size() || a.fitness != b.fitness)
        return false;

    std::map<ElementId, ElementId> m{{a.id, b.id}, {a.core.id, b.core.id}};
    for (std::size_t i = 0; i < a.core.sensors.size(); ++i)
        m[a.core.sensors[i].id] = b.core.sensors[i].id;
    for (std::size_t i = 0; i < a.core.actuators.size(); ++i)
        m[a.core.actuators[i].id] = b.core.actuators[i].id;
    for (std::size_t i = 0; i < a.neurons.size(); ++i)
        m[a.neurons[i].id] = b.neurons[i].id;
    auto same = [&](ElementId x, ElementId y) {
        auto it = m.find(x);
        return it == m.end() ? x == y : it->second == y;
    };
    auto same_list = [&](const std::vector<ElementId>& x, const std::vector<ElementId>& y) {
        return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), same);
    };

    const CoreElement& ca = a.core;
    const CoreElement& cb = b.core;
    if (ca.generation != cb.generation || ca.parameters != cb.parameters || !same_list(ca.supervised, cb.supervised) ||
        ca.history.size() != cb.history.size())
        return false;
    for (std::size_t i = 0; i < ca.history.size(); ++i) {
        const HistoryEntry& x = ca.history[i];
        const HistoryEntry& y = cb.history[i];
        if (x.op != y.op || x.info != y.info || !same(x.element, y.element))
            return false;
    }
    for (std::size_t i = 0; i < ca.sensors.size(); ++i) {
        const SensorSpec& x = ca.sensors[i];
        const SensorSpec& y = cb.sensors[i];
        if (x.tag != y.tag || x.vector_length != y.vector_length || x.fanout.size() != y.fanout.size())
            return false;
        for (std::size_t k = 0; k < x.fanout.size(); ++k)
            if (!same(x.fanout[k].neuron, y.fanout[k].neuron) || x.fanout[k].type != y.fanout[k].type ||
                x.fanout[k].index != y.fanout[k].index)
                return false;
    }
    for (std::size_t i = 0; i < ca.actuators.size(); ++i) {
        const ActuatorSpec& x = ca.actuators[i];
        const ActuatorSpec& y = cb.actuators[i];
        if (x.tag != y.tag || x.vector_length != y.vector_length || !same_list(x.fanin, y.fanin))
            return false;
    }
    for (std::size_t i = 0; i < a.neurons.size(); ++i) {
        const NeuronElement& x = a.neurons[i];
        const NeuronElement& y = b.neurons[i];
        if (x.activation != y.activation || x.learning != y.learning || x.weights != y.weights ||
            x.bias != y.bias || x.parameters != y.parameters || x.generation != y.generation ||
            x.inputs.size() != y.inputs.size() || !same_list(x.outputs, y.outputs))
            return false;
        for (std::size_t k = 0; k < x.inputs.size(); ++k)
            if (!same(x.inputs[k].from, y.inputs[k].from) || x.inputs[k].vector_length != y.inputs[k].vector_length)
                return false;
    }
    return true;
}

} // namespace dxnn
