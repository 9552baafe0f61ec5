#include "dxnn/mutation.hpp"

#include <algorithm>
#include <cmath>

#include "dxnn/errors.hpp"

namespace dxnn {

std::string_view to_string(MutationOp op)
{
    switch (op) {
    case MutationOp::add_neuron: return "add_neuron";
    case MutationOp::add_link: return "add_link";
    case MutationOp::splice_neuron: return "splice_neuron";
    case MutationOp::change_af: return "change_af";
    case MutationOp::change_lm: return "change_lm";
    case MutationOp::add_bias: return "add_bias";
    case MutationOp::add_sensor_tag: return "add_sensor_tag";
    case MutationOp::add_actuator_tag: return "add_actuator_tag";
    }
    return "?";
}

void validate(const MutationConfig& config)
{
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(config.sensor_tag_probability) || !in_unit(config.actuator_tag_probability))
        throw ConfigError("sensor/actuator tag probabilities must lie in [0, 1]");
    if (config.activations.empty())
        throw ConfigError("mutation needs at least one activation function");
    if (config.learning_methods.empty())
        throw ConfigError("mutation needs at least one learning method");
    if (!(config.initial_weight_range > 0.0) || !std::isfinite(config.initial_weight_range))
        throw ConfigError("initial_weight_range must be a positive real");
}

std::size_t draw_mutation_count(std::size_t neurons, Rng& rng)
{
    const auto cap = static_cast<std::size_t>(std::round(std::sqrt(static_cast<double>(neurons))));
    return uniform_int(rng, 1, std::max<std::size_t>(1, cap));
}

MutationOp draw_operator(const MutationConfig& config, Rng& rng)
{
    if (bernoulli(rng, config.sensor_tag_probability))
        return MutationOp::add_sensor_tag;
    if (bernoulli(rng, config.actuator_tag_probability))
        return MutationOp::add_actuator_tag;
    return kCoreOperators[uniform_index(rng, kCoreOperators.size())];
}

namespace {

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng)
{
    return v[uniform_index(rng, v.size())];
}

struct Context {
    DxnnGenotype& g;
    const MutationConfig& config;
    IdAllocator& ids;
    Rng& rng;
    std::set<ElementId>& touched;

    void record(MutationOp op, ElementId element, std::string info)
    {
        g.core.history.push_back(HistoryEntry{std::string(to_string(op)), element, std::move(info)});
    }

    ElementId new_neuron()
    {
        NeuronElement n = make_neuron(ids.next(ElementKind::neuron), pick(config.activations, rng),
                                      pick(config.learning_methods, rng), g.core.generation);
        g.neurons.push_back(std::move(n));
        g.core.supervised.push_back(g.neurons.back().id);
        touched.insert(g.neurons.back().id);
        return g.neurons.back().id;
    }

    std::vector<std::size_t> used_sensors() const
    {
        std::vector<std::size_t> out;
        for (std::size_t s = 0; s < g.core.sensors.size(); ++s)
            if (g.core.sensors[s].in_use())
                out.push_back(s);
        return out;
    }

    // Link type for a sensor->neuron link; `all` only if the neuron has none yet.
    LinkType sensor_link_type(ElementId neuron)
    {
        if (has_all_link(g, neuron))
            return bernoulli(rng, 0.5) ? LinkType::single : LinkType::block;
        return static_cast<LinkType>(uniform_index(rng, 3));
    }

    std::string link_info(ElementId from, ElementId to) const { return to_string(from) + "->" + to_string(to); }
};

bool add_neuron(Context& c)
{
    std::vector<ElementId> sources;
    for (std::size_t s : c.used_sensors())
        sources.push_back(c.g.core.sensors[s].id);
    for (const NeuronElement& n : c.g.neurons)
        sources.push_back(n.id);
    if (c.g.neurons.empty())
        return false;
    const ElementId from = pick(sources, c.rng);
    const ElementId to = c.g.neurons[uniform_index(c.rng, c.g.neurons.size())].id;

    const ElementId n = c.new_neuron();
    if (from.kind == ElementKind::sensor) {
        connect_sensor(c.g, *c.g.sensor_index(from), n, c.sensor_link_type(n), c.rng,
                       c.config.initial_weight_range);
    } else {
        connect_neurons(c.g, from, n, c.rng, c.config.initial_weight_range);
        c.touched.insert(from);
    }
    connect_neurons(c.g, n, to, c.rng, c.config.initial_weight_range);
    c.touched.insert(to);
    c.record(MutationOp::add_neuron, n, c.link_info(from, n) + "," + c.link_info(n, to));
    return true;
}

bool add_link(Context& c)
{
    struct Pair {
        ElementId from;
        ElementId to;
    };
    std::vector<Pair> legal;
    for (const NeuronElement& dst : c.g.neurons) {
        for (std::size_t s : c.used_sensors())
            if (!has_sensor_link(c.g, s, dst.id))
                legal.push_back(Pair{c.g.core.sensors[s].id, dst.id});
        for (const NeuronElement& src : c.g.neurons)
            if (!has_neuron_link(c.g, src.id, dst.id))
                legal.push_back(Pair{src.id, dst.id});
    }
    if (legal.empty())
        return false;
    const Pair p = pick(legal, c.rng);
    if (p.from.kind == ElementKind::sensor) {
        connect_sensor(c.g, *c.g.sensor_index(p.from), p.to, c.sensor_link_type(p.to), c.rng,
                       c.config.initial_weight_range);
    } else {
        connect_neurons(c.g, p.from, p.to, c.rng, c.config.initial_weight_range);
        c.touched.insert(p.from);
    }
    c.touched.insert(p.to);
    c.record(MutationOp::add_link, p.to, c.link_info(p.from, p.to));
    return true;
}

bool splice_neuron(Context& c)
{
    std::vector<std::pair<ElementId, ElementId>> links;
    for (const NeuronElement& dst : c.g.neurons)
        for (const InputLink& in : dst.inputs)
            if (in.from.kind == ElementKind::neuron)
                links.emplace_back(in.from, dst.id);
    if (links.empty())
        return false;
    const auto [a, b] = pick(links, c.rng);
    disconnect_neurons(c.g, a, b);
    const ElementId n = c.new_neuron();
    connect_neurons(c.g, a, n, c.rng, c.config.initial_weight_range);
    connect_neurons(c.g, n, b, c.rng, c.config.initial_weight_range);
    c.touched.insert(a);
    c.touched.insert(b);
    c.record(MutationOp::splice_neuron, n, c.link_info(a, n) + "," + c.link_info(n, b));
    return true;
}

bool change_tag(Context& c, MutationOp op, const std::vector<std::string>& options,
                std::string NeuronElement::*field)
{
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < c.g.neurons.size(); ++i) {
        const std::string& current = c.g.neurons[i].*field;
        if (std::any_of(options.begin(), options.end(), [&](const std::string& t) { return t != current; }))
            eligible.push_back(i);
    }
    if (eligible.empty())
        return false;
    NeuronElement& n = c.g.neurons[pick(eligible, c.rng)];
    std::vector<std::string> alternatives;
    for (const std::string& t : options)
        if (t != n.*field && std::find(alternatives.begin(), alternatives.end(), t) == alternatives.end())
            alternatives.push_back(t);
    const std::string old = n.*field;
    n.*field = pick(alternatives, c.rng);
    c.touched.insert(n.id);
    c.record(op, n.id, old + "->" + n.*field);
    return true;
}

bool add_bias(Context& c)
{
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < c.g.neurons.size(); ++i)
        if (!c.g.neurons[i].bias)
            eligible.push_back(i);
    if (eligible.empty())
        return false;
    NeuronElement& n = c.g.neurons[pick(eligible, c.rng)];
    n.bias = initial_weight(c.rng, c.config.initial_weight_range);
    c.touched.insert(n.id);
    c.record(MutationOp::add_bias, n.id, "");
    return true;
}

bool add_sensor_tag(Context& c)
{
    std::vector<std::size_t> unused;
    for (std::size_t s = 0; s < c.g.core.sensors.size(); ++s)
        if (!c.g.core.sensors[s].in_use())
            unused.push_back(s);
    if (unused.empty() || c.g.neurons.empty())
        return false;
    const std::size_t s = pick(unused, c.rng);
    const ElementId n = c.g.neurons[uniform_index(c.rng, c.g.neurons.size())].id;
    const LinkType type = c.sensor_link_type(n);
    connect_sensor(c.g, s, n, type, c.rng, c.config.initial_weight_range);
    c.touched.insert(n);
    c.record(MutationOp::add_sensor_tag, c.g.core.sensors[s].id,
             c.g.core.sensors[s].tag + ":" + std::string(to_string(type)) + "->" + to_string(n));
    return true;
}

bool add_actuator_tag(Context& c)
{
    std::vector<std::size_t> unused;
    for (std::size_t a = 0; a < c.g.core.actuators.size(); ++a)
        if (!c.g.core.actuators[a].active())
            unused.push_back(a);
    if (unused.empty() || c.g.neurons.empty())
        return false;
    const std::size_t a = pick(unused, c.rng);
    const std::size_t width = c.g.core.actuators[a].vector_length;
    std::vector<std::size_t> order(c.g.neurons.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::shuffle(order.begin(), order.end(), c.rng);
    std::string info = c.g.core.actuators[a].tag + ":";
    for (std::size_t k = 0; k < width; ++k) {
        const std::size_t i = k < order.size() ? order[k] : uniform_index(c.rng, order.size());
        const ElementId n = c.g.neurons[i].id;
        connect_actuator(c.g, a, n);
        c.touched.insert(n);
        info += (k ? "," : "") + to_string(n);
    }
    c.record(MutationOp::add_actuator_tag, c.g.core.actuators[a].id, info);
    return true;
}

} // namespace

bool apply_operator(DxnnGenotype& g, MutationOp op, const MutationConfig& config, IdAllocator& ids, Rng& rng,
                    std::set<ElementId>& touched)
{
    DxnnGenotype work = g;
    std::set<ElementId> work_touched = touched;
    Context c{work, config, ids, rng, work_touched};
    bool ok = false;
    switch (op) {
    case MutationOp::add_neuron: ok = add_neuron(c); break;
    case MutationOp::add_link: ok = add_link(c); break;
    case MutationOp::splice_neuron: ok = splice_neuron(c); break;
    case MutationOp::change_af: ok = change_tag(c, op, config.activations, &NeuronElement::activation); break;
    case MutationOp::change_lm: ok = change_tag(c, op, config.learning_methods, &NeuronElement::learning); break;
    case MutationOp::add_bias: ok = add_bias(c); break;
    case MutationOp::add_sensor_tag: ok = add_sensor_tag(c); break;
    case MutationOp::add_actuator_tag: ok = add_actuator_tag(c); break;
    }
    // A structurally valid but disconnected result (possible for add_neuron
    // between two half-connected neurons) counts as no legal site.
    if (!ok || !check_invariants(work).empty())
        return false;
    g = std::move(work);
    touched = std::move(work_touched);
    return true;
}

DxnnGenotype mutate_offspring(const DxnnGenotype& parent, const MutationConfig& config, IdAllocator& ids, Rng& rng,
                              MutationReport* report)
{
    validate(config);
    DxnnGenotype child = clone_with_new_id(parent, ids);
    child.core.generation += 1;
    const std::size_t m = draw_mutation_count(parent.size(), rng);
    MutationReport local;
    local.drawn_count = m;

    std::set<ElementId> touched;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t attempt = 0; attempt <= config.max_redraws; ++attempt) {
            const MutationOp op = draw_operator(config, rng);
            if (apply_operator(child, op, config, ids, rng, touched)) {
                local.applied.push_back(op);
                break;
            }
            ++local.redraws;
        }
    }
    for (NeuronElement& n : child.neurons)
        if (touched.contains(n.id))
            n.generation = child.core.generation;
    if (report != nullptr)
        *report = std::move(local);
    return child;
}

} // namespace dxnn
