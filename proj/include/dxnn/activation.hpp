#pragma once

// Activation-function and learning-method registries keyed by tag. The
// built-in entries are present from the start; register_* adds more and must
// be called before any concurrent use.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dxnn {

using ActivationFn = double (*)(double);

// Updates `weights` in place given the inputs that produced `output`. The
// bias weight, when present, is the last weight and sees a constant input 1.
using LearningFn = void (*)(std::span<double> weights, std::span<const double> inputs, double output);

inline constexpr double kHebbianRate = 0.1;

ActivationFn find_activation(std::string_view tag);  // nullptr if unknown
LearningFn find_learning(std::string_view tag);      // nullptr if unknown
bool has_learning(std::string_view tag);

void register_activation(std::string tag, ActivationFn fn);
void register_learning(std::string tag, LearningFn fn);

std::vector<std::string> activation_tags();
std::vector<std::string> learning_tags();

// Throws RuntimeError on an unknown tag.
double activate(std::string_view tag, double x);
std::vector<double> apply_learning(std::string_view lm, std::vector<double> weights,
                                   std::span<const double> inputs, double output);

namespace af {
double tanh(double x);
double sin(double x);
double linear(double x);
double gauss(double x);
double sqrt(double x);
double abs(double x);
double log(double x);
double sigmoid(double x);
} // namespace af

} // namespace dxnn
