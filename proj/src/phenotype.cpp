#include "dxnn/phenotype.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "dxnn/errors.hpp"

namespace dxnn {

namespace {

[[noreturn]] void dangling(ElementId from, ElementId to)
{
    throw CompileError("dangling link " + to_string(from) + " -> " + to_string(to));
}

// Kahn ordering over neuron->neuron edges (self-loops ignored). When every
// remaining neuron waits on a cycle, the smallest serial is released.
std::vector<std::size_t> schedule(const DxnnGenotype& g, const std::vector<std::vector<std::size_t>>& preds)
{
    const std::size_t n = g.neurons.size();
    std::vector<std::vector<std::size_t>> succs(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u : preds[v])
            if (u != v) {
                succs[u].push_back(v);
                ++indegree[v];
            }

    auto by_serial = [&](std::size_t a, std::size_t b) { return g.neurons[a].id > g.neurons[b].id; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_serial)> ready(by_serial);
    std::set<ElementId> remaining;
    for (std::size_t v = 0; v < n; ++v) {
        remaining.insert(g.neurons[v].id);
        if (indegree[v] == 0)
            ready.push(v);
    }
    std::vector<bool> placed(n, false);
    std::vector<std::size_t> order;
    order.reserve(n);
    auto place = [&](std::size_t v) {
        placed[v] = true;
        remaining.erase(g.neurons[v].id);
        order.push_back(v);
        for (std::size_t w : succs[v])
            if (!placed[w] && --indegree[w] == 0)
                ready.push(w);
    };
    while (order.size() < n) {
        if (!ready.empty()) {
            const std::size_t v = ready.top();
            ready.pop();
            if (!placed[v])
                place(v);
            continue;
        }
        place(*g.neuron_index(*remaining.begin()));
    }
    return order;
}

} // namespace

Phenotype compile(const DxnnGenotype& g)
{
    Phenotype p;
    const std::size_t n = g.neurons.size();

    std::vector<std::size_t> sensor_base;
    for (const SensorSpec& s : g.core.sensors) {
        sensor_base.push_back(p.sensor_width_);
        p.sensor_lengths_.push_back(s.vector_length);
        p.sensor_width_ += s.vector_length;
    }

    std::map<ElementId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i)
        index[g.neurons[i].id] = i;

    std::vector<std::vector<std::size_t>> preds(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (const InputLink& in : g.neurons[v].inputs) {
            if (in.from.kind != ElementKind::neuron)
                continue;
            auto it = index.find(in.from);
            if (it == index.end())
                dangling(in.from, g.neurons[v].id);
            preds[v].push_back(it->second);
        }
    }

    const std::vector<std::size_t> order = schedule(g, preds);
    std::vector<std::size_t> position(n);
    for (std::size_t k = 0; k < n; ++k) {
        position[order[k]] = k;
        p.order_.push_back(g.neurons[order[k]].id);
    }
    auto slot_of = [&](std::size_t v) { return p.sensor_width_ + position[v]; };

    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u : preds[v])
            p.edges_.push_back(CompiledEdge{g.neurons[u].id, g.neurons[v].id, position[u] >= position[v]});

    for (std::size_t k = 0; k < n; ++k) {
        const NeuronElement& src = g.neurons[order[k]];
        CompiledNeuron cn;
        cn.id = src.id;
        cn.activation = find_activation(src.activation);
        if (cn.activation == nullptr)
            throw CompileError("unknown activation function '" + src.activation + "' on " + to_string(src.id));
        if (!has_learning(src.learning))
            throw CompileError("unknown learning method '" + src.learning + "' on " + to_string(src.id));
        cn.learning = find_learning(src.learning);
        cn.slot = p.sensor_width_ + k;
        cn.gather_begin = p.gather_.size();

        for (const InputLink& in : src.inputs) {
            const std::size_t at = p.gather_.size();
            switch (in.from.kind) {
            case ElementKind::neuron:
                p.gather_.push_back(slot_of(index.at(in.from)));
                break;
            case ElementKind::sensor: {
                auto si = g.sensor_index(in.from);
                if (!si)
                    dangling(in.from, src.id);
                const SensorSpec& s = g.core.sensors[*si];
                auto e = std::find_if(s.fanout.begin(), s.fanout.end(), [&](const FanoutEntry& f) {
                    return f.neuron == src.id && f.type != LinkType::all;
                });
                if (e == s.fanout.end())
                    dangling(in.from, src.id);
                if (e->type == LinkType::single) {
                    if (e->index >= s.vector_length)
                        throw CompileError("single link index out of range on " + to_string(s.id));
                    p.gather_.push_back(sensor_base[*si] + e->index);
                } else {
                    for (std::size_t j = 0; j < s.vector_length; ++j)
                        p.gather_.push_back(sensor_base[*si] + j);
                }
                break;
            }
            case ElementKind::core: {
                p.gather_.resize(at + in.vector_length, p.sensor_width_);
                std::size_t covered = 0;
                for (std::size_t si = 0; si < g.core.sensors.size(); ++si) {
                    const SensorSpec& s = g.core.sensors[si];
                    for (const FanoutEntry& e : s.fanout) {
                        if (e.neuron != src.id || e.type != LinkType::all)
                            continue;
                        if (e.index + s.vector_length > in.vector_length)
                            throw CompileError("all-link segment overflow on " + to_string(src.id));
                        for (std::size_t j = 0; j < s.vector_length; ++j)
                            p.gather_[at + e.index + j] = sensor_base[si] + j;
                        covered += s.vector_length;
                    }
                }
                if (covered != in.vector_length)
                    dangling(in.from, src.id);
                break;
            }
            default:
                dangling(in.from, src.id);
            }
            if (p.gather_.size() - at != in.vector_length)
                throw CompileError("input " + to_string(in.from) + " -> " + to_string(src.id) +
                                   " has inconsistent vector length");
        }
        cn.gather_count = p.gather_.size() - cn.gather_begin;
        if (cn.gather_count != src.weights.size())
            throw CompileError("weight count mismatch on " + to_string(src.id));
        cn.weight_begin = p.weights_.size();
        p.weights_.insert(p.weights_.end(), src.weights.begin(), src.weights.end());
        if (src.bias) {
            cn.has_bias = true;
            p.weights_.push_back(*src.bias);
        }
        p.neurons_.push_back(cn);
    }

    for (const ActuatorSpec& a : g.core.actuators) {
        std::vector<std::size_t> slots;
        for (ElementId from : a.fanin) {
            auto it = index.find(from);
            if (it == index.end())
                dangling(from, a.id);
            slots.push_back(slot_of(it->second));
        }
        p.actuator_slots_.push_back(std::move(slots));
        p.outputs_.emplace_back(a.vector_length, 0.0);
    }

    p.initial_weights_ = p.weights_;
    p.signal_.assign(p.sensor_width_ + n, 0.0);
    return p;
}

void Phenotype::reset()
{
    std::fill(signal_.begin(), signal_.end(), 0.0);
    weights_ = initial_weights_;
}

const std::vector<std::vector<double>>& Phenotype::step(std::span<const std::vector<double>> sensors)
{
    if (sensors.size() != sensor_lengths_.size())
        throw RuntimeError("expected " + std::to_string(sensor_lengths_.size()) + " sensor vectors, got " +
                           std::to_string(sensors.size()));
    for (std::size_t i = 0; i < sensors.size(); ++i)
        if (sensors[i].size() != sensor_lengths_[i])
            throw RuntimeError("sensor " + std::to_string(i) + " expects length " +
                               std::to_string(sensor_lengths_[i]) + ", got " + std::to_string(sensors[i].size()));
    std::size_t at = 0;
    for (const auto& v : sensors) {
        std::copy(v.begin(), v.end(), signal_.begin() + static_cast<std::ptrdiff_t>(at));
        at += v.size();
    }
    think();
    return outputs_;
}

const std::vector<std::vector<double>>& Phenotype::step_flat(std::span<const double> sensor_scalars)
{
    if (sensor_scalars.size() != sensor_width_)
        throw RuntimeError("expected " + std::to_string(sensor_width_) + " sensor scalars, got " +
                           std::to_string(sensor_scalars.size()));
    std::copy(sensor_scalars.begin(), sensor_scalars.end(), signal_.begin());
    think();
    return outputs_;
}

void Phenotype::think()
{
    double* signal = signal_.data();
    for (CompiledNeuron& cn : neurons_) {
        const std::size_t* g = gather_.data() + cn.gather_begin;
        double* w = weights_.data() + cn.weight_begin;
        double acc = 0.0;
        for (std::size_t i = 0; i < cn.gather_count; ++i)
            acc += w[i] * signal[g[i]];
        if (cn.has_bias)
            acc += w[cn.gather_count];
        const double out = cn.activation(acc);
        if (cn.learning != nullptr) {
            scratch_.resize(cn.gather_count);
            for (std::size_t i = 0; i < cn.gather_count; ++i)
                scratch_[i] = signal[g[i]];
            cn.learning(std::span<double>(w, cn.gather_count + (cn.has_bias ? 1 : 0)), scratch_, out);
        }
        signal[cn.slot] = out;
    }
    for (std::size_t a = 0; a < actuator_slots_.size(); ++a) {
        const auto& slots = actuator_slots_[a];
        for (std::size_t k = 0; k < slots.size(); ++k)
            outputs_[a][k] = signal[slots[k]];
    }
}

std::size_t Phenotype::recurrent_edge_count() const
{
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [](const CompiledEdge& e) { return e.recurrent; }));
}

std::span<const double> Phenotype::weights(ElementId neuron) const
{
    for (const CompiledNeuron& cn : neurons_)
        if (cn.id == neuron)
            return std::span<const double>(weights_.data() + cn.weight_begin,
                                           cn.gather_count + (cn.has_bias ? 1 : 0));
    throw RuntimeError("no neuron " + to_string(neuron) + " in phenotype");
}

double Phenotype::output(ElementId neuron) const
{
    for (const CompiledNeuron& cn : neurons_)
        if (cn.id == neuron)
            return signal_[cn.slot];
    throw RuntimeError("no neuron " + to_string(neuron) + " in phenotype");
}

} // namespace dxnn
