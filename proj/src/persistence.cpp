#include "dxnn/persistence.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dxnn/errors.hpp"

namespace dxnn {

std::string format_real(double value)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{})
        throw PersistenceError("cannot format real value");
    return std::string(buf.data(), ptr);
}

namespace {

constexpr std::string_view kMagic = "DXNN-POPULATION 1";

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

void write_parameters(std::ostream& out, const ParameterList& params)
{
    out << '[';
    for (std::size_t i = 0; i < params.size(); ++i)
        out << (i ? ", " : "") << '{' << quote(params[i].key) << ", " << quote(params[i].value) << '}';
    out << ']';
}

void write_core(std::ostream& out, const CoreElement& core)
{
    out << "CORE {" << to_string(core.id) << ", [";
    for (std::size_t i = 0; i < core.sensors.size(); ++i) {
        const SensorSpec& s = core.sensors[i];
        out << (i ? ", " : "") << '{' << to_string(s.id) << ", " << s.tag << ", " << s.vector_length << ", [";
        for (std::size_t k = 0; k < s.fanout.size(); ++k)
            out << (k ? ", " : "") << '{' << to_string(s.fanout[k].neuron) << ", " << to_string(s.fanout[k].type)
                << ", " << s.fanout[k].index << '}';
        out << "]}";
    }
    out << "], [";
    for (std::size_t i = 0; i < core.actuators.size(); ++i) {
        const ActuatorSpec& a = core.actuators[i];
        out << (i ? ", " : "") << '{' << to_string(a.id) << ", " << a.tag << ", " << a.vector_length << ", [";
        for (std::size_t k = 0; k < a.fanin.size(); ++k)
            out << (k ? ", " : "") << to_string(a.fanin[k]);
        out << "]}";
    }
    out << "], ";
    write_parameters(out, core.parameters);
    out << ", [";
    for (std::size_t i = 0; i < core.supervised.size(); ++i)
        out << (i ? ", " : "") << to_string(core.supervised[i]);
    out << "], " << core.generation << ", [";
    for (std::size_t i = 0; i < core.history.size(); ++i) {
        const HistoryEntry& h = core.history[i];
        out << (i ? ", " : "") << '{' << h.op << ", " << to_string(h.element) << ", " << quote(h.info) << '}';
    }
    out << "]}\n";
}

void write_neuron(std::ostream& out, const NeuronElement& n)
{
    out << "NEURON {" << to_string(n.id) << ", [";
    for (std::size_t i = 0; i < n.inputs.size(); ++i)
        out << (i ? ", " : "") << '{' << to_string(n.inputs[i].from) << ", " << n.inputs[i].vector_length << '}';
    out << "], [";
    for (std::size_t i = 0; i < n.outputs.size(); ++i)
        out << (i ? ", " : "") << to_string(n.outputs[i]);
    out << "], " << n.activation << ", " << n.learning << ", [";
    for (std::size_t i = 0; i < n.weights.size(); ++i)
        out << (i ? ", " : "") << format_real(n.weights[i]);
    if (n.bias)
        out << (n.weights.empty() ? "" : ", ") << "{bias, " << format_real(*n.bias) << '}';
    out << "], ";
    write_parameters(out, n.parameters);
    out << ", " << n.generation << "}\n";
}

// ---------------------------------------------------------------------------
// Reading

struct Node {
    enum class Kind { atom, string, list, tuple } kind = Kind::atom;
    std::string text;
    std::vector<Node> items;
};

class Parser {
public:
    Parser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    Node parse_value()
    {
        skip_space();
        if (pos_ >= text_.size())
            fail("unexpected end of record");
        const char c = text_[pos_];
        if (c == '[' || c == '{') {
            Node node;
            node.kind = c == '[' ? Node::Kind::list : Node::Kind::tuple;
            const char close = c == '[' ? ']' : '}';
            ++pos_;
            skip_space();
            if (peek() == close) {
                ++pos_;
                return node;
            }
            while (true) {
                node.items.push_back(parse_value());
                skip_space();
                const char next = peek();
                ++pos_;
                if (next == close)
                    return node;
                if (next != ',')
                    fail(std::string("expected ',' or '") + close + "'");
            }
        }
        if (c == '"') {
            Node node;
            node.kind = Node::Kind::string;
            ++pos_;
            while (true) {
                if (pos_ >= text_.size())
                    fail("unterminated string");
                char ch = text_[pos_++];
                if (ch == '"')
                    return node;
                if (ch == '\\') {
                    if (pos_ >= text_.size())
                        fail("unterminated escape");
                    ch = text_[pos_++];
                    if (ch == 'n')
                        ch = '\n';
                }
                node.text += ch;
            }
        }
        Node node;
        while (pos_ < text_.size()) {
            const char ch = text_[pos_];
            if (ch == ',' || ch == '[' || ch == ']' || ch == '{' || ch == '}' || ch == '"' || ch == ' ' || ch == '\t')
                break;
            node.text += ch;
            ++pos_;
        }
        if (node.text.empty())
            fail("empty token");
        return node;
    }

    void expect_end()
    {
        skip_space();
        if (pos_ != text_.size())
            fail("trailing characters");
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw PersistenceError("line " + std::to_string(line_) + ": " + what);
    }

private:
    void skip_space()
    {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
            ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

class RecordReader {
public:
    explicit RecordReader(std::size_t line) : line_(line) {}

    [[noreturn]] void fail(const std::string& what) const
    {
        throw PersistenceError("line " + std::to_string(line_) + ": " + what);
    }

    const Node& expect(const Node& node, Node::Kind kind, std::size_t arity, const char* what) const
    {
        if (node.kind != kind || (arity != 0 && node.items.size() != arity))
            fail(std::string("malformed ") + what);
        return node;
    }

    ElementId id(const Node& node) const
    {
        auto parsed = node.kind == Node::Kind::atom ? parse_element_id(node.text) : std::nullopt;
        if (!parsed)
            fail("bad element id '" + node.text + "'");
        return *parsed;
    }

    template <typename T>
    T integer(const std::string& text) const
    {
        T value{};
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            fail("bad integer '" + text + "'");
        return value;
    }

    std::size_t size(const Node& node) const
    {
        if (node.kind != Node::Kind::atom)
            fail("expected integer");
        return integer<std::size_t>(node.text);
    }

    double real(const std::string& text) const
    {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            fail("bad real '" + text + "'");
        return value;
    }

    std::string atom(const Node& node) const
    {
        if (node.kind != Node::Kind::atom)
            fail("expected a tag");
        return node.text;
    }

    ParameterList parameters(const Node& node) const
    {
        expect(node, Node::Kind::list, 0, "parameter list");
        ParameterList params;
        for (const Node& p : node.items) {
            expect(p, Node::Kind::tuple, 2, "parameter");
            if (p.items[0].kind != Node::Kind::string || p.items[1].kind != Node::Kind::string)
                fail("parameter entries must be quoted");
            params.push_back(Parameter{p.items[0].text, p.items[1].text});
        }
        return params;
    }

private:
    std::size_t line_;
};

CoreElement read_core(const Node& root, const RecordReader& r)
{
    r.expect(root, Node::Kind::tuple, 7, "CORE record");
    CoreElement core;
    core.id = r.id(root.items[0]);
    for (const Node& s : r.expect(root.items[1], Node::Kind::list, 0, "sensor list").items) {
        r.expect(s, Node::Kind::tuple, 4, "sensor");
        SensorSpec spec{r.id(s.items[0]), r.atom(s.items[1]), r.size(s.items[2]), {}};
        for (const Node& e : r.expect(s.items[3], Node::Kind::list, 0, "fanout").items) {
            r.expect(e, Node::Kind::tuple, 3, "fanout entry");
            auto type = parse_link_type(r.atom(e.items[1]));
            if (!type)
                r.fail("unknown link type '" + e.items[1].text + "'");
            spec.fanout.push_back(FanoutEntry{r.id(e.items[0]), *type, r.size(e.items[2])});
        }
        core.sensors.push_back(std::move(spec));
    }
    for (const Node& a : r.expect(root.items[2], Node::Kind::list, 0, "actuator list").items) {
        r.expect(a, Node::Kind::tuple, 4, "actuator");
        ActuatorSpec spec{r.id(a.items[0]), r.atom(a.items[1]), r.size(a.items[2]), {}};
        for (const Node& n : r.expect(a.items[3], Node::Kind::list, 0, "fanin").items)
            spec.fanin.push_back(r.id(n));
        core.actuators.push_back(std::move(spec));
    }
    core.parameters = r.parameters(root.items[3]);
    for (const Node& n : r.expect(root.items[4], Node::Kind::list, 0, "supervised list").items)
        core.supervised.push_back(r.id(n));
    core.generation = r.size(root.items[5]);
    for (const Node& h : r.expect(root.items[6], Node::Kind::list, 0, "history").items) {
        r.expect(h, Node::Kind::tuple, 3, "history entry");
        if (h.items[2].kind != Node::Kind::string)
            r.fail("history info must be quoted");
        core.history.push_back(HistoryEntry{r.atom(h.items[0]), r.id(h.items[1]), h.items[2].text});
    }
    return core;
}

NeuronElement read_neuron(const Node& root, const RecordReader& r)
{
    r.expect(root, Node::Kind::tuple, 8, "NEURON record");
    NeuronElement n;
    n.id = r.id(root.items[0]);
    for (const Node& in : r.expect(root.items[1], Node::Kind::list, 0, "input list").items) {
        r.expect(in, Node::Kind::tuple, 2, "input entry");
        n.inputs.push_back(InputLink{r.id(in.items[0]), r.size(in.items[1])});
    }
    for (const Node& out : r.expect(root.items[2], Node::Kind::list, 0, "output list").items)
        n.outputs.push_back(r.id(out));
    n.activation = r.atom(root.items[3]);
    n.learning = r.atom(root.items[4]);
    const auto& weights = r.expect(root.items[5], Node::Kind::list, 0, "weight list").items;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const Node& w = weights[i];
        if (w.kind == Node::Kind::tuple) {
            if (i + 1 != weights.size() || w.items.size() != 2 || r.atom(w.items[0]) != "bias")
                r.fail("bias must be the last weight entry");
            n.bias = r.real(r.atom(w.items[1]));
        } else {
            n.weights.push_back(r.real(r.atom(w)));
        }
    }
    n.parameters = r.parameters(root.items[6]);
    n.generation = r.size(root.items[7]);
    return n;
}

std::pair<std::string_view, std::string_view> split_record(std::string_view line)
{
    const auto space = line.find(' ');
    if (space == std::string_view::npos)
        return {line, {}};
    return {line.substr(0, space), line.substr(space + 1)};
}

std::vector<std::string> words(std::string_view rest)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(rest)};
    std::string w;
    while (in >> w)
        out.push_back(w);
    return out;
}

} // namespace

void write_population(std::ostream& out, const Population& population)
{
    out << kMagic << '\n';
    out << "POP " << to_string(population.id) << ' ' << population.limit << ' ' << population.rng_seed << ' '
        << population.ids.peek() << '\n';
    for (const DxnnGenotype& g : population.members) {
        out << "DXNN " << to_string(g.id) << ' ' << (g.fitness ? format_real(*g.fitness) : std::string("none"))
            << '\n';
        write_core(out, g.core);
        for (const NeuronElement& n : g.neurons)
            write_neuron(out, n);
    }
    out << "END " << population.members.size() << '\n';
}

Population read_population(std::istream& in)
{
    Population pop;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    bool have_pop = false;
    bool have_end = false;
    bool have_core = false;

    auto finish_member = [&](std::size_t at) {
        if (pop.members.empty())
            return;
        if (!have_core)
            throw PersistenceError("line " + std::to_string(at) + ": DXNN " + to_string(pop.members.back().id) +
                                   " has no CORE record");
        try {
            validate(pop.members.back());
        } catch (const ConfigError& e) {
            throw PersistenceError("line " + std::to_string(at) + ": " + e.what());
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        RecordReader r(line_no);
        if (!have_header) {
            if (line != kMagic)
                r.fail("not a population file");
            have_header = true;
            continue;
        }
        if (have_end)
            r.fail("record after END");
        auto [kind, rest] = split_record(line);
        if (kind == "POP") {
            if (have_pop)
                r.fail("duplicate POP record");
            const auto w = words(rest);
            if (w.size() != 4)
                r.fail("malformed POP record");
            auto id = parse_element_id(w[0]);
            if (!id)
                r.fail("bad population id");
            pop.id = *id;
            pop.limit = r.integer<std::size_t>(w[1]);
            pop.rng_seed = r.integer<std::uint64_t>(w[2]);
            pop.ids = IdAllocator(r.integer<std::uint64_t>(w[3]));
            have_pop = true;
        } else if (kind == "DXNN") {
            if (!have_pop)
                r.fail("DXNN before POP");
            finish_member(line_no);
            const auto w = words(rest);
            if (w.size() != 2)
                r.fail("malformed DXNN record");
            DxnnGenotype g;
            auto id = parse_element_id(w[0]);
            if (!id)
                r.fail("bad network id");
            g.id = *id;
            if (w[1] != "none")
                g.fitness = r.real(w[1]);
            pop.members.push_back(std::move(g));
            have_core = false;
        } else if (kind == "CORE") {
            if (pop.members.empty() || have_core)
                r.fail("CORE record without a DXNN record");
            Parser p(rest, line_no);
            Node root = p.parse_value();
            p.expect_end();
            pop.members.back().core = read_core(root, r);
            have_core = true;
        } else if (kind == "NEURON") {
            if (!have_core)
                r.fail("NEURON record before its CORE");
            Parser p(rest, line_no);
            Node root = p.parse_value();
            p.expect_end();
            pop.members.back().neurons.push_back(read_neuron(root, r));
        } else if (kind == "END") {
            finish_member(line_no);
            const auto w = words(rest);
            if (w.size() != 1 || r.integer<std::size_t>(w[0]) != pop.members.size())
                r.fail("END count does not match the number of DXNN records");
            have_end = true;
        } else {
            r.fail("unknown record '" + std::string(kind) + "'");
        }
    }
    if (!have_header)
        throw PersistenceError("empty population file");
    if (!have_end)
        throw PersistenceError("line " + std::to_string(line_no) + ": file truncated (no END record)");
    return pop;
}

void save(const Population& population, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw PersistenceError("cannot open " + path.string() + " for writing");
    write_population(out, population);
    if (!out)
        throw PersistenceError("write to " + path.string() + " failed");
}

Population load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PersistenceError("cannot open " + path.string());
    return read_population(in);
}

} // namespace dxnn
