#include "metamodel/ann.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <string>

#include "metamodel/errors.hpp"

namespace metamodel {
namespace {

/// Layer index per unit; throws when layers do not partition the units.
std::vector<int> layer_map(const NeuralNetwork& net) {
  const std::size_t b = net.unit_count();
  std::vector<int> layer_of(b, -1);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    for (int unit : net.layers[l]) {
      if (unit < 0 || static_cast<std::size_t>(unit) >= b) {
        throw ValidationError("layer references unit " +
                              std::to_string(unit + 1) + " out of range");
      }
      if (layer_of[static_cast<std::size_t>(unit)] != -1) {
        throw ValidationError("unit " + std::to_string(unit + 1) +
                              " appears in more than one layer");
      }
      layer_of[static_cast<std::size_t>(unit)] = static_cast<int>(l);
    }
  }
  for (std::size_t j = 0; j < b; ++j) {
    if (layer_of[j] == -1) {
      throw ValidationError("unit " + std::to_string(j + 1) +
                            " belongs to no layer");
    }
  }
  return layer_of;
}

std::string activation_name(Activation kind) {
  return kind == Activation::Threshold ? "threshold" : "logistic";
}

Activation activation_from_name(const std::string& name) {
  if (name == "threshold") return Activation::Threshold;
  if (name == "logistic") return Activation::Logistic;
  throw ValidationError("unknown activation kind '" + name + "'");
}

}  // namespace

bool NeuralNetwork::is_input(int unit) const {
  if (layers.empty()) return false;
  return std::find(layers.front().begin(), layers.front().end(), unit) !=
         layers.front().end();
}

void NeuralNetwork::validate() const {
  const std::size_t b = unit_count();
  if (b == 0) throw ValidationError("a network needs at least one unit");
  if (layers.size() < 2) {
    throw ValidationError("a network needs an input and an output layer");
  }
  if (weights.size() != b || bias.size() != b || theta.size() != b ||
      activations.size() != b) {
    throw ValidationError(
        "weights, bias, theta and activations must all have one entry per "
        "unit");
  }
  const std::vector<int> layer_of = layer_map(*this);
  for (std::size_t j = 0; j < b; ++j) {
    if (layer_of[j] == 0) {
      if (!incoming[j].empty()) {
        throw ValidationError("input unit " + std::to_string(j + 1) +
                              " must have an empty incoming tuple");
      }
    } else if (incoming[j].empty()) {
      throw ValidationError("unit " + std::to_string(j + 1) +
                            " in a non-input layer has no incoming units");
    }
    if (weights[j].size() != incoming[j].size()) {
      throw ValidationError("unit " + std::to_string(j + 1) +
                            " has a weight count different from its incoming "
                            "count");
    }
    for (int i : incoming[j]) {
      if (i < 0 || static_cast<std::size_t>(i) >= b) {
        throw ValidationError("incoming index out of range on unit " +
                              std::to_string(j + 1));
      }
      if (layer_of[static_cast<std::size_t>(i)] >= layer_of[j]) {
        throw ValidationError("unit " + std::to_string(j + 1) +
                              " receives from a non-earlier layer; the "
                              "network must be feed-forward");
      }
    }
    if (!values.contains(activations[j])) {
      throw ValidationError("activation of unit " + std::to_string(j + 1) +
                            " is outside the value set");
    }
  }
  if (activation == Activation::Threshold) {
    if (!values.is_finite() || values.count() != 2 || !values.contains(0.0) ||
        !values.contains(1.0)) {
      throw ValidationError("threshold networks use the value set {0,1}");
    }
  } else if (values.is_finite()) {
    throw ValidationError("logistic networks use an interval value set");
  }
}

NeuralNetwork make_layered(const std::vector<std::size_t>& layer_sizes,
                           Activation activation, std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw PreconditionError("a layered network needs at least two layers");
  }
  for (std::size_t n : layer_sizes) {
    if (n == 0) throw PreconditionError("every layer needs at least one unit");
  }
  NeuralNetwork net;
  net.activation = activation;
  net.values = activation == Activation::Threshold
                   ? StateSet::finite({0, 1})
                   : StateSet::interval(0.0, 1.0);

  int next_unit = 0;
  for (std::size_t n : layer_sizes) {
    std::vector<int> layer(n);
    std::iota(layer.begin(), layer.end(), next_unit);
    next_unit += static_cast<int>(n);
    net.layers.push_back(std::move(layer));
  }
  const std::size_t b = static_cast<std::size_t>(next_unit);
  net.incoming.resize(b);
  net.weights.resize(b);
  net.bias.assign(b, 0.0);
  net.theta.assign(b, 0.0);
  net.activations.assign(b, 0.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> init(-0.5, 0.5);
  for (std::size_t l = 1; l < net.layers.size(); ++l) {
    for (int unit : net.layers[l]) {
      const std::size_t j = static_cast<std::size_t>(unit);
      net.incoming[j] = net.layers[l - 1];
      net.weights[j].resize(net.incoming[j].size());
      for (double& w : net.weights[j]) w = init(rng);
    }
  }
  net.validate();
  return net;
}

double input_function(const NeuralNetwork& net, int unit) {
  if (unit < 0 || static_cast<std::size_t>(unit) >= net.unit_count()) {
    throw RangeError("unit index out of range");
  }
  if (net.is_input(unit)) {
    throw DomainError("input units have no input function");
  }
  const std::size_t j = static_cast<std::size_t>(unit);
  if (net.incoming[j].empty()) {
    throw DomainError("unit " + std::to_string(unit + 1) +
                      " has no incoming units; the network is malformed");
  }
  double sum = net.bias[j];
  for (std::size_t pos = 0; pos < net.incoming[j].size(); ++pos) {
    sum += net.weights[j][pos] *
           net.activations[static_cast<std::size_t>(net.incoming[j][pos])];
  }
  return sum;
}

double activate(double x, Activation kind, double theta) {
  if (kind == Activation::Threshold) {
    return x >= theta ? 1.0 : 0.0;
  }
  const double clamped = std::clamp(x, -500.0, 500.0);
  return 1.0 / (1.0 + std::exp(-clamped));
}

std::vector<double> evaluate_all(const NeuralNetwork& net,
                                 std::span<const double> inputs) {
  if (inputs.size() != net.layers.front().size()) {
    throw DimensionError("expected " +
                         std::to_string(net.layers.front().size()) +
                         " input values, got " + std::to_string(inputs.size()));
  }
  std::vector<double> a(net.unit_count(), 0.0);
  for (std::size_t q = 0; q < inputs.size(); ++q) {
    a[static_cast<std::size_t>(net.layers.front()[q])] = inputs[q];
  }
  for (std::size_t l = 1; l < net.layers.size(); ++l) {
    for (int unit : net.layers[l]) {
      const std::size_t j = static_cast<std::size_t>(unit);
      double sum = net.bias[j];
      for (std::size_t pos = 0; pos < net.incoming[j].size(); ++pos) {
        sum += net.weights[j][pos] *
               a[static_cast<std::size_t>(net.incoming[j][pos])];
      }
      a[j] = activate(sum, net.activation, net.theta[j]);
    }
  }
  return a;
}

std::vector<double> forward(const NeuralNetwork& net,
                            std::span<const double> inputs) {
  const std::vector<double> a = evaluate_all(net, inputs);
  std::vector<double> out;
  out.reserve(net.layers.back().size());
  for (int unit : net.layers.back()) {
    out.push_back(a[static_cast<std::size_t>(unit)]);
  }
  return out;
}

double sample_loss(const NeuralNetwork& net, std::span<const double> inputs,
                   std::span<const double> targets) {
  const std::vector<double> out = forward(net, inputs);
  if (targets.size() != out.size()) {
    throw DimensionError("expected " + std::to_string(out.size()) +
                         " target values, got " +
                         std::to_string(targets.size()));
  }
  double sum = 0.0;
  for (std::size_t q = 0; q < out.size(); ++q) {
    const double d = out[q] - targets[q];
    sum += d * d;
  }
  return sum;
}

Gradients backprop_gradients(const NeuralNetwork& net,
                             std::span<const double> inputs,
                             std::span<const double> targets) {
  if (net.activation != Activation::Logistic) {
    throw CapabilityError(
        "backpropagation is defined for logistic networks only");
  }
  if (targets.size() != net.layers.back().size()) {
    throw DimensionError("target tuple does not match the output layer");
  }
  const std::vector<double> a = evaluate_all(net, inputs);
  const std::size_t b = net.unit_count();
  std::vector<double> delta(b, 0.0);
  std::vector<double> acc(b, 0.0);

  Gradients grads;
  grads.weights.resize(b);
  grads.bias.assign(b, 0.0);
  for (std::size_t j = 0; j < b; ++j) {
    grads.weights[j].assign(net.weights[j].size(), 0.0);
  }

  const std::size_t last = net.layers.size() - 1;
  for (std::size_t l = last; l >= 1; --l) {
    for (std::size_t q = 0; q < net.layers[l].size(); ++q) {
      const std::size_t j = static_cast<std::size_t>(net.layers[l][q]);
      const double upstream =
          l == last ? 2.0 * (a[j] - targets[q]) : acc[j];
      delta[j] = upstream * a[j] * (1.0 - a[j]);
      grads.bias[j] = delta[j];
      for (std::size_t pos = 0; pos < net.incoming[j].size(); ++pos) {
        const std::size_t i =
            static_cast<std::size_t>(net.incoming[j][pos]);
        grads.weights[j][pos] = delta[j] * a[i];
        acc[i] += net.weights[j][pos] * delta[j];
      }
    }
  }
  return grads;
}

LearnResult learn(const NeuralNetwork& start, const Dataset& dataset,
                  long max_epochs, double tolerance, double learning_rate,
                  std::uint64_t seed) {
  if (dataset.empty()) {
    throw PreconditionError("learning needs a nonempty dataset");
  }
  if (max_epochs < 1) {
    throw PreconditionError("learning needs g >= 1 epochs");
  }
  if (learning_rate <= 0.0) {
    throw PreconditionError("learning rate must be positive");
  }
  start.validate();
  if (start.activation == Activation::Threshold && start.depth() > 1) {
    throw CapabilityError(
        "threshold networks with hidden layers cannot be trained; use a "
        "logistic network");
  }
  const std::size_t n_in = start.layers.front().size();
  const std::size_t n_out = start.layers.back().size();
  for (const auto& [x, t] : dataset) {
    if (x.size() != n_in || t.size() != n_out) {
      throw DimensionError("dataset sample shape does not match the network");
    }
  }

  NeuralNetwork net = start;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> init(-0.5, 0.5);
  for (std::size_t l = 1; l < net.layers.size(); ++l) {
    for (int unit : net.layers[l]) {
      const std::size_t j = static_cast<std::size_t>(unit);
      for (double& w : net.weights[j]) w = init(rng);
      net.bias[j] = 0.0;
      net.theta[j] = 0.0;
    }
  }

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const auto epoch_loss = [&]() {
    double sum = 0.0;
    for (const auto& [x, t] : dataset) {
      sum += sample_loss(net, x, t) / static_cast<double>(n_out);
    }
    return sum / static_cast<double>(dataset.size());
  };

  std::vector<AdaptationRecord> log;
  for (long epoch = 1; epoch <= max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const auto& [x, t] = dataset[idx];
      if (net.activation == Activation::Threshold) {
        const std::vector<double> a = evaluate_all(net, x);
        for (std::size_t q = 0; q < n_out; ++q) {
          const std::size_t j =
              static_cast<std::size_t>(net.layers.back()[q]);
          const double err = t[q] - a[j];
          if (err == 0.0) continue;
          for (std::size_t pos = 0; pos < net.incoming[j].size(); ++pos) {
            const std::size_t i =
                static_cast<std::size_t>(net.incoming[j][pos]);
            net.weights[j][pos] += learning_rate * err * a[i];
          }
          net.theta[j] -= learning_rate * err;
        }
      } else {
        const Gradients grads = backprop_gradients(net, x, t);
        for (std::size_t j = 0; j < net.unit_count(); ++j) {
          for (std::size_t pos = 0; pos < net.weights[j].size(); ++pos) {
            net.weights[j][pos] -= learning_rate * grads.weights[j][pos];
          }
          net.bias[j] -= learning_rate * grads.bias[j];
        }
      }
    }
    const double mean = epoch_loss();
    log.push_back(AdaptationRecord{epoch, mean, true, "-"});
    if (mean <= tolerance) break;
  }
  return LearnResult{std::move(net), std::move(log)};
}

namespace {

nlohmann::json ann_config_json(const NeuralNetwork& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : net.layers) {
    nlohmann::json row = nlohmann::json::array();
    for (int unit : layer) row.push_back(unit + 1);
    layers.push_back(std::move(row));
  }
  return nlohmann::json{{"activation", activation_name(net.activation)},
                        {"layers", std::move(layers)},
                        {"weights", net.weights},
                        {"bias", net.bias},
                        {"theta", net.theta}};
}

struct AnnForward {
  std::vector<char> is_input;
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;
  std::vector<double> theta;
  Activation activation = Activation::Logistic;
};

std::vector<std::vector<int>> layers_from_config(const nlohmann::json& cfg,
                                                 std::size_t unit_count) {
  std::vector<std::vector<int>> layers;
  for (const auto& row : cfg.at("layers")) {
    std::vector<int> layer;
    for (const auto& unit : row) {
      const int u = unit.get<int>() - 1;  // files are 1-based
      if (u < 0 || static_cast<std::size_t>(u) >= unit_count) {
        throw ValidationError("ann-forward config references a unit out of "
                              "range");
      }
      layer.push_back(u);
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

}  // namespace

UpdateFunction make_ann_forward_fn(const ConcreteParameters& params) {
  const nlohmann::json& cfg = params.update_fn_config;
  try {
    const std::size_t b = params.entity_count();
    auto state = std::make_shared<AnnForward>();
    state->activation =
        activation_from_name(cfg.at("activation").get<std::string>());
    state->weights = cfg.at("weights").get<std::vector<std::vector<double>>>();
    state->bias = cfg.at("bias").get<std::vector<double>>();
    state->theta = cfg.at("theta").get<std::vector<double>>();
    state->is_input.assign(b, 0);
    const auto layers = layers_from_config(cfg, b);
    if (layers.empty()) {
      throw ValidationError("ann-forward config declares no layers");
    }
    for (int unit : layers.front()) {
      state->is_input[static_cast<std::size_t>(unit)] = 1;
    }
    if (state->weights.size() != b || state->bias.size() != b ||
        state->theta.size() != b) {
      throw ValidationError(
          "ann-forward config sizes do not match the entity count");
    }
    return [state](const UpdateInput& in) {
      const std::size_t j = static_cast<std::size_t>(in.entity);
      if (state->is_input[j]) return in.self;
      const auto& w = state->weights[j];
      if (w.size() != in.milieu.size()) {
        throw DimensionError(
            "unit weight count does not match its milieu size");
      }
      double sum = state->bias[j];
      for (std::size_t pos = 0; pos < w.size(); ++pos) {
        sum += w[pos] * in.milieu[pos];
      }
      return activate(sum, state->activation, state->theta[j]);
    };
  } catch (const nlohmann::json::exception& e) {
    throw BindingError(std::string("malformed ann-forward config: ") +
                       e.what());
  }
}

SystemModel ann_to_system_model(const NeuralNetwork& net) {
  net.validate();
  SystemModel model = SystemModel::make_virtual(
      {kind::entities, kind::states, kind::milieus},
      {kind::update_fn, kind::adaptation_fn});
  ConcreteParameters p;
  p.initial_states = net.activations;
  p.state_set = net.values;
  p.milieus = net.incoming;
  p.update_fn_id = "ann-forward";
  p.update_fn_config = ann_config_json(net);
  p.adaptation_fn_id = net.activation == Activation::Threshold
                           ? "perceptron"
                           : "sgd-backprop";
  p.time_steps = std::max<long>(1, static_cast<long>(net.depth()));
  return model.concretize(std::move(p));
}

NeuralNetwork system_model_to_ann(const SystemModel& model) {
  const ConcreteParameters& p = model.params();
  if (p.update_fn_id != "ann-forward") {
    throw CapabilityError(
        "only models bound to 'ann-forward' convert to a network");
  }
  const nlohmann::json& cfg = p.update_fn_config;
  NeuralNetwork net;
  try {
    net.layers = layers_from_config(cfg, p.entity_count());
    net.weights = cfg.at("weights").get<std::vector<std::vector<double>>>();
    net.bias = cfg.at("bias").get<std::vector<double>>();
    net.theta = cfg.at("theta").get<std::vector<double>>();
    net.activation =
        activation_from_name(cfg.at("activation").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed ann-forward config: ") +
                          e.what());
  }
  net.incoming = p.milieus;
  net.values = p.state_set;
  net.activations = p.initial_states;
  net.validate();
  return net;
}

}  // namespace metamodel
