#pragma once

// Tuple-encoded genotype: one Core element plus a list of Neuron elements.
//
// Every link is stored twice: once on the receiving neuron's input list and
// once on the sending side (a sensor's fanout, a neuron's output list, or an
// actuator's fanin). check_invariants() verifies the two views agree.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "dxnn/random.hpp"

namespace dxnn {

enum class ElementKind : std::uint8_t { core, neuron, sensor, actuator, bias, network, population };

struct ElementId {
    ElementKind kind = ElementKind::neuron;
    std::uint64_t serial = 0;

    friend auto operator<=>(const ElementId&, const ElementId&) = default;
};

std::string to_string(ElementId id);
std::optional<ElementId> parse_element_id(std::string_view text);

// Hands out serials that are unique across every element kind of a population.
class IdAllocator {
public:
    explicit IdAllocator(std::uint64_t next = 0) : next_(next) {}

    ElementId next(ElementKind kind) { return ElementId{kind, next_++}; }
    std::uint64_t peek() const { return next_; }

private:
    std::uint64_t next_;
};

enum class LinkType : std::uint8_t { single, block, all };

std::string_view to_string(LinkType type);
std::optional<LinkType> parse_link_type(std::string_view text);

// Routing entry on a sensor. For `single` links `index` selects the scalar;
// for `all` links it is the offset of this sensor's segment inside the
// concatenated vector; for `block` links it is 0.
struct FanoutEntry {
    ElementId neuron;
    LinkType type = LinkType::block;
    std::size_t index = 0;

    friend bool operator==(const FanoutEntry&, const FanoutEntry&) = default;
};

struct SensorSpec {
    ElementId id{ElementKind::sensor, 0};
    std::string tag;
    std::size_t vector_length = 1;
    std::vector<FanoutEntry> fanout;

    bool in_use() const { return !fanout.empty(); }
};

struct ActuatorSpec {
    ElementId id{ElementKind::actuator, 0};
    std::string tag;
    std::size_t vector_length = 1;
    std::vector<ElementId> fanin; // insertion order is the output vector order

    bool active() const { return !fanin.empty(); }
};

struct Parameter {
    std::string key;
    std::string value;

    friend bool operator==(const Parameter&, const Parameter&) = default;
};
using ParameterList = std::vector<Parameter>;

// {From_Id, Vector_Length}. Links of type `all` come from the Core id.
struct InputLink {
    ElementId from;
    std::size_t vector_length = 1;

    friend bool operator==(const InputLink&, const InputLink&) = default;
};

struct NeuronElement {
    ElementId id;
    std::vector<InputLink> inputs;
    std::vector<ElementId> outputs;
    std::string activation = "tanh";
    std::string learning = "none";
    // One weight per incoming scalar, laid out in input-list order.
    std::vector<double> weights;
    std::optional<double> bias;
    ParameterList parameters;
    std::uint64_t generation = 0;

    std::size_t weight_count() const { return weights.size() + (bias ? 1 : 0); }
    // Offset of input `k`'s slice inside `weights`.
    std::size_t weight_offset(std::size_t k) const;
};

struct HistoryEntry {
    std::string op;
    ElementId element;
    std::string info;

    friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct CoreElement {
    ElementId id{ElementKind::core, 0};
    std::vector<SensorSpec> sensors;
    std::vector<ActuatorSpec> actuators;
    ParameterList parameters;
    std::vector<ElementId> supervised;
    std::uint64_t generation = 0;
    std::vector<HistoryEntry> history;
};

struct DxnnGenotype {
    ElementId id{ElementKind::network, 0};
    CoreElement core;
    std::vector<NeuronElement> neurons;
    std::optional<double> fitness;

    std::size_t size() const { return neurons.size(); }

    NeuronElement* find_neuron(ElementId neuron);
    const NeuronElement* find_neuron(ElementId neuron) const;
    std::optional<std::size_t> neuron_index(ElementId neuron) const;
    std::optional<std::size_t> sensor_index(ElementId sensor) const;
    std::optional<std::size_t> actuator_index(ElementId actuator) const;
};

struct Population {
    ElementId id{ElementKind::population, 0};
    std::vector<DxnnGenotype> members;
    std::size_t limit = 1;
    std::uint64_t rng_seed = 0;
    IdAllocator ids;
};

// ---------------------------------------------------------------------------
// Seeding

struct SensorTemplate {
    std::string tag;
    std::size_t vector_length = 1;
    bool connected = true; // unconnected sensors sit unused in the SensorList
};

struct ActuatorTemplate {
    std::string tag;
    std::size_t vector_length = 1;
    bool connected = true;
};

inline constexpr double kDefaultInitialWeightRange = std::numbers::pi / 2.0;

struct SeedOptions {
    std::vector<std::string> activations{"tanh"};
    std::vector<std::string> learning_methods{"none"};
    double initial_weight_range = kDefaultInitialWeightRange;
};

DxnnGenotype create_seed_genotype(std::span<const SensorTemplate> sensors,
                                  std::span<const ActuatorTemplate> actuators,
                                  const SeedOptions& options, IdAllocator& ids, Rng& rng);

Population create_seed(std::span<const SensorTemplate> sensors, std::span<const ActuatorTemplate> actuators,
                       std::size_t count, const SeedOptions& options, std::uint64_t seed);

// Deep copy with a fresh network id and fresh, contiguous element serials.
// Fitness is cleared, history is kept (with ids remapped).
DxnnGenotype clone_with_new_id(const DxnnGenotype& parent, IdAllocator& ids);

// ---------------------------------------------------------------------------
// Wiring primitives shared by seeding and mutation. All of them keep both
// sides of a link in sync and draw new weights with initial_weight().

// Initial weight: uniform in (-range, range), range defaulting to pi/2.
double initial_weight(Rng& rng, double range = kDefaultInitialWeightRange);

// Neuron gets a link from core.sensors[sensor_index]. For `all` links the
// concatenation covers every in-use sensor plus this one.
void connect_sensor(DxnnGenotype& g, std::size_t sensor_index, ElementId neuron, LinkType type, Rng& rng,
                    double range = kDefaultInitialWeightRange);
// `all` link over an explicit set of sensors (concatenated in SensorList order).
void connect_all(DxnnGenotype& g, std::vector<std::size_t> sensor_indices, ElementId neuron, Rng& rng,
                 double range = kDefaultInitialWeightRange);
void connect_neurons(DxnnGenotype& g, ElementId from, ElementId to, Rng& rng,
                     double range = kDefaultInitialWeightRange);
void connect_actuator(DxnnGenotype& g, std::size_t actuator_index, ElementId neuron);
// Removes the from->to neuron link and its weight slice. Returns false if absent.
bool disconnect_neurons(DxnnGenotype& g, ElementId from, ElementId to);

bool has_neuron_link(const DxnnGenotype& g, ElementId from, ElementId to);
// True when `neuron` already takes a single/block link from the sensor.
bool has_sensor_link(const DxnnGenotype& g, std::size_t sensor_index, ElementId neuron);
bool has_all_link(const DxnnGenotype& g, ElementId neuron);

NeuronElement make_neuron(ElementId id, std::string activation, std::string learning, std::uint64_t generation);

// ---------------------------------------------------------------------------
// Invariants

// Empty result means the genotype is well formed.
std::vector<std::string> check_invariants(const DxnnGenotype& g);
// Throws ConfigError listing the first violations.
void validate(const DxnnGenotype& g);

// Equality up to a consistent renaming of element ids.
bool structurally_equal(const DxnnGenotype& a, const DxnnGenotype& b);

} // namespace dxnn
