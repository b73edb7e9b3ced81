#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "metamodel/parameters.hpp"
#include "metamodel/system_model.hpp"

namespace metamodel {

enum class Activation { Threshold, Logistic };

/// A layered feed-forward network of units. Unit j's incoming tuple
/// lists the units feeding it (empty for input units); weights align
/// with the incoming order. Threshold units fire on weighted input >=
/// theta; logistic units squash weighted input + bias.
struct NeuralNetwork {
  std::vector<std::vector<int>> layers;  // unit indices, layers[0] = inputs
  Milieus incoming;                      // feeding units per unit, 0-based
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;   // per unit; logistic units only
  std::vector<double> theta;  // per unit; threshold units only
  Activation activation = Activation::Logistic;
  StateSet values;            // V: {0,1} for threshold, an interval otherwise
  Entities activations;       // current unit values

  std::size_t unit_count() const { return incoming.size(); }
  std::size_t depth() const {
    return layers.empty() ? 0 : layers.size() - 1;
  }
  bool is_input(int unit) const;

  void validate() const;
  bool operator==(const NeuralNetwork&) const = default;
};

/// Fully connected layered net with weights drawn uniformly from
/// [-0.5, 0.5] by the seeded generator; biases and thresholds start at
/// zero.
NeuralNetwork make_layered(const std::vector<std::size_t>& layer_sizes,
                           Activation activation, std::uint64_t seed);

/// Weighted input of a non-input unit from the current activations,
/// including the unit's bias term.
double input_function(const NeuralNetwork& net, int unit);

/// Threshold: 1 when x >= theta, else 0. Logistic: 1/(1+exp(-x)) with
/// the exponent clamped so large |x| saturates instead of overflowing.
double activate(double x, Activation kind, double theta = 0.0);

/// Feed-forward evaluation, layer by layer; returns the output-layer
/// activations.
std::vector<double> forward(const NeuralNetwork& net,
                            std::span<const double> inputs);

/// Like forward but returns every unit's activation.
std::vector<double> evaluate_all(const NeuralNetwork& net,
                                 std::span<const double> inputs);

/// Sum of squared output errors for one sample.
double sample_loss(const NeuralNetwork& net, std::span<const double> inputs,
                   std::span<const double> targets);

struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;
};

/// Gradient of sample_loss with respect to every weight and bias;
/// logistic networks only.
Gradients backprop_gradients(const NeuralNetwork& net,
                             std::span<const double> inputs,
                             std::span<const double> targets);

/// Training samples as (input tuple, target tuple) pairs.
using Dataset =
    std::vector<std::pair<std::vector<double>, std::vector<double>>>;

struct LearnResult {
  NeuralNetwork net;
  std::vector<AdaptationRecord> log;  // one record per epoch
};

/// Adapts the weights against a dataset: the perceptron rule for
/// threshold nets without hidden layers, stochastic gradient descent
/// with backpropagation for logistic nets. Weight initialization and
/// the per-epoch sample order both derive from the seed. Stops when the
/// epoch mean MSE drops to the tolerance or after max_epochs.
LearnResult learn(const NeuralNetwork& net, const Dataset& dataset,
                  long max_epochs, double tolerance, double learning_rate,
                  std::uint64_t seed);

/// The network as a system model: unit activations become the entity
/// tuple, V the state set, the incoming tuples the milieus, and the
/// bound update function computes each non-input unit's activation from
/// its milieu snapshot (input units are fixed points). A network of
/// depth d settles in d steps. The learning function stays bound as the
/// model's adaptation operation.
SystemModel ann_to_system_model(const NeuralNetwork& net);

/// Inverse construction for models bound to 'ann-forward'.
NeuralNetwork system_model_to_ann(const SystemModel& model);

/// Registry factory behind update_fn_id "ann-forward".
UpdateFunction make_ann_forward_fn(const ConcreteParameters& params);

}  // namespace metamodel
