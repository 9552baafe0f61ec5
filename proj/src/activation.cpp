#include "dxnn/activation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "dxnn/errors.hpp"

namespace dxnn {

namespace af {
double tanh(double x) { return std::tanh(x); }
double sin(double x) { return std::sin(x); }
double linear(double x) { return x; }
double gauss(double x) { return std::exp(-x * x); }
double sqrt(double x) { return std::copysign(std::sqrt(std::fabs(x)), x); }
double abs(double x) { return std::fabs(x); }
double log(double x) { return std::copysign(std::log1p(std::fabs(x)), x); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
} // namespace af

namespace {

void learn_none(std::span<double>, std::span<const double>, double) {}

void learn_hebbian(std::span<double> weights, std::span<const double> inputs, double output)
{
    constexpr double limit = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double x = i < inputs.size() ? inputs[i] : 1.0;
        weights[i] = std::clamp(weights[i] + kHebbianRate * x * output, -limit, limit);
    }
}

std::map<std::string, ActivationFn, std::less<>>& activations()
{
    static std::map<std::string, ActivationFn, std::less<>> table{
        {"tanh", af::tanh}, {"sin", af::sin},   {"linear", af::linear}, {"gauss", af::gauss},
        {"sqrt", af::sqrt}, {"abs", af::abs},   {"log", af::log},       {"sigmoid", af::sigmoid},
    };
    return table;
}

std::map<std::string, LearningFn, std::less<>>& learnings()
{
    static std::map<std::string, LearningFn, std::less<>> table{{"none", learn_none}, {"hebbian", learn_hebbian}};
    return table;
}

} // namespace

ActivationFn find_activation(std::string_view tag)
{
    auto it = activations().find(tag);
    return it == activations().end() ? nullptr : it->second;
}

LearningFn find_learning(std::string_view tag)
{
    auto it = learnings().find(tag);
    if (it == learnings().end() || it->second == learn_none)
        return nullptr;
    return it->second;
}

bool has_learning(std::string_view tag)
{
    return learnings().contains(tag);
}

void register_activation(std::string tag, ActivationFn fn)
{
    activations()[std::move(tag)] = fn;
}

void register_learning(std::string tag, LearningFn fn)
{
    learnings()[std::move(tag)] = fn;
}

std::vector<std::string> activation_tags()
{
    std::vector<std::string> tags;
    for (const auto& [tag, fn] : activations())
        tags.push_back(tag);
    return tags;
}

std::vector<std::string> learning_tags()
{
    std::vector<std::string> tags;
    for (const auto& [tag, fn] : learnings())
        tags.push_back(tag);
    return tags;
}

double activate(std::string_view tag, double x)
{
    ActivationFn fn = find_activation(tag);
    if (fn == nullptr)
        throw RuntimeError("unknown activation function '" + std::string(tag) + "'");
    return fn(x);
}

std::vector<double> apply_learning(std::string_view lm, std::vector<double> weights, std::span<const double> inputs,
                                   double output)
{
    if (!has_learning(lm))
        throw RuntimeError("unknown learning method '" + std::string(lm) + "'");
    if (LearningFn fn = find_learning(lm))
        fn(weights, inputs, output);
    return weights;
}

} // namespace dxnn
