// Acceptance suite: runs every acceptance criterion and prints one
// [PASS]/[FAIL] line each. Exits nonzero if any criterion fails.
// Usage: acceptance <path-to-cli>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "metamodel/adaptation.hpp"
#include "metamodel/ann.hpp"
#include "metamodel/ca.hpp"
#include "metamodel/equivalence.hpp"
#include "metamodel/errors.hpp"
#include "metamodel/serialization.hpp"
#include "metamodel/system_model.hpp"

namespace fs = std::filesystem;
using namespace metamodel;

namespace {

// frozen fixtures
constexpr std::uint64_t kXorSeed = 1;        // seed in {0..4} that converges
constexpr double kXorRate = 0.5;
constexpr int kHiddenRule = 90;              // generates the hill-climb target
constexpr int kHillStartRule = 0;            // hill climb starts here

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw Failure(message);
}

class Harness {
 public:
  void criterion(const std::string& name, const std::function<void()>& body) {
    try {
      body();
      std::cout << "[PASS] " << name << "\n";
    } catch (const std::exception& e) {
      ++failures_;
      std::cout << "[FAIL] " << name << ": " << e.what() << "\n";
    }
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::vector<int> random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> bit(0, 1);
  std::vector<int> out(n);
  for (int& b : out) b = bit(rng);
  return out;
}

SystemModel elementary_model(int rule, const std::vector<int>& cells) {
  CellularAutomaton ca{cells, StateSet::finite({0, 1}),
                       ring_milieu(cells.size(), 1),
                       elementary_rule_table(rule)};
  return ca_to_system_model(ca);
}

std::vector<int> reference_elementary_step(const std::vector<int>& cells,
                                           int rule) {
  const std::size_t c = cells.size();
  std::vector<int> next(c);
  for (std::size_t i = 0; i < c; ++i) {
    const int code = (cells[(i + c - 1) % c] << 2) | (cells[i] << 1) |
                     cells[(i + 1) % c];
    next[i] = (rule >> code) & 1;
  }
  return next;
}

std::vector<int> reference_life_step(const std::vector<int>& grid,
                                     std::size_t w, std::size_t h) {
  std::vector<int> next(grid.size());
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      int live = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          live += grid[((r + h + static_cast<std::size_t>(dr)) % h) * w +
                       ((c + w + static_cast<std::size_t>(dc)) % w)];
        }
      }
      const int self = grid[r * w + c];
      next[r * w + c] = self ? (live == 2 || live == 3) : (live == 3);
    }
  }
  return next;
}

std::vector<double> to_states(const std::vector<int>& cells) {
  return std::vector<double>(cells.begin(), cells.end());
}

SystemModel threshold_ring_model(std::size_t cells,
                                 const std::vector<double>& weights,
                                 double theta) {
  SystemModel model = SystemModel::make_virtual(
      {kind::entities, kind::states, kind::milieus},
      {kind::update_fn, kind::adaptation_fn});
  ConcreteParameters p;
  p.initial_states.assign(cells, 0.0);
  p.state_set = StateSet::finite({0, 1});
  p.milieus = ring_milieu(cells, (weights.size() - 1) / 2);
  p.update_fn_id = "threshold-unit";
  p.update_fn_config = {{"weights", weights}, {"theta", theta}};
  p.adaptation_fn_id = "perceptron";
  return model.concretize(std::move(p));
}

Dataset xor_dataset() {
  return {{{0, 0}, {0}}, {{0, 1}, {1}}, {{1, 0}, {1}}, {{1, 1}, {0}}};
}

void criterion_ca_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t width = 64;
  for (int rule : {0, 30, 90, 110, 204, 232}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::vector<int> init =
          random_bits(width, seed * 1000 + static_cast<std::uint64_t>(rule));
      SystemModel model = elementary_model(rule, init);
      std::vector<int> reference = init;
      model = model.actualize(100);
      for (int t = 0; t < 100; ++t) {
        reference = reference_elementary_step(reference, rule);
      }
      const auto& rows = model.trajectory().rows;
      require(rows.size() == 101, "trajectory must have 101 rows");
      // compare the full final row and a re-run of the reference for
      // every intermediate row
      std::vector<int> replay = init;
      for (std::size_t t = 0; t < rows.size(); ++t) {
        require(rows[t] == to_states(replay),
                "rule " + std::to_string(rule) + " diverges at step " +
                    std::to_string(t));
        if (t + 1 < rows.size()) {
          replay = reference_elementary_step(replay, rule);
        }
      }
      require(rows.back() == to_states(reference), "final row mismatch");
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(elapsed < 5.0,
          "runtime " + std::to_string(elapsed) + "s exceeds 5s");
}

void criterion_life() {
  // blinker, 5x5 torus, period 2
  std::vector<int> blinker(25, 0);
  blinker[11] = blinker[12] = blinker[13] = 1;
  SystemModel model = ca_to_system_model(CellularAutomaton{
      blinker, StateSet::finite({0, 1}), moore_milieu(5, 5),
      life_rule_table()});
  const SystemModel once = model.step();
  require(once.current_states() != to_states(blinker),
          "blinker must change after one step");
  require(once.step().current_states() == to_states(blinker),
          "blinker must return after two steps");

  // glider, 16x16 torus, displaced by (1,1) after 4 steps
  const std::size_t w = 16, h = 16;
  std::vector<int> grid(w * h, 0);
  grid[2 * w + 3] = 1;
  grid[3 * w + 4] = 1;
  grid[4 * w + 2] = grid[4 * w + 3] = grid[4 * w + 4] = 1;
  SystemModel glider = ca_to_system_model(CellularAutomaton{
      grid, StateSet::finite({0, 1}), moore_milieu(w, h), life_rule_table()});
  std::vector<int> reference = grid;
  for (int t = 0; t < 4; ++t) {
    glider = glider.step();
    reference = reference_life_step(reference, w, h);
    require(glider.current_states() == to_states(reference),
            "life model diverges from the reference at step " +
                std::to_string(t + 1));
  }
  std::vector<int> displaced(w * h, 0);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      displaced[((r + 1) % h) * w + ((c + 1) % w)] = grid[r * w + c];
    }
  }
  require(glider.current_states() == to_states(displaced),
          "glider must return displaced by (1,1) after 4 steps");
}

void criterion_ann_oracle() {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    NeuralNetwork net = make_layered({3, 4, 2}, Activation::Logistic, seed);
    std::mt19937_64 rng(seed + 100);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<double> x = {uniform(rng), uniform(rng),
                                     uniform(rng)};
      for (std::size_t q = 0; q < 3; ++q) net.activations[q] = x[q];
      const SystemModel run = ann_to_system_model(net).actualize(
          static_cast<long>(net.depth()));
      const std::vector<double> direct = forward(net, x);
      const Entities& states = run.current_states();
      for (std::size_t q = 0; q < direct.size(); ++q) {
        const double via_model =
            states[static_cast<std::size_t>(net.layers.back()[q])];
        require(std::abs(via_model - direct[q]) <= 1e-12,
                "metamodel output differs from forward beyond 1e-12");
      }
    }
  }
}

void criterion_gradient_check() {
  const double h = 1e-5;
  double worst = 0.0;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::uint64_t draw = 0; draw < 10; ++draw) {
    const NeuralNetwork net =
        make_layered({2, 2, 1}, Activation::Logistic, draw);
    const std::vector<double> x = {uniform(rng), uniform(rng)};
    const std::vector<double> t = {uniform(rng)};
    const Gradients grads = backprop_gradients(net, x, t);
    for (std::size_t j = 0; j < net.unit_count(); ++j) {
      for (std::size_t pos = 0; pos <= net.weights[j].size(); ++pos) {
        const bool is_bias = pos == net.weights[j].size();
        if (is_bias && net.incoming[j].empty()) continue;
        NeuralNetwork plus = net;
        NeuralNetwork minus = net;
        double analytic = 0.0;
        if (is_bias) {
          plus.bias[j] += h;
          minus.bias[j] -= h;
          analytic = grads.bias[j];
        } else {
          plus.weights[j][pos] += h;
          minus.weights[j][pos] -= h;
          analytic = grads.weights[j][pos];
        }
        const double numeric =
            (sample_loss(plus, x, t) - sample_loss(minus, x, t)) / (2 * h);
        worst = std::max(worst,
                         std::abs(analytic - numeric) /
                             std::max({std::abs(analytic),
                                       std::abs(numeric), 1e-8}));
      }
    }
  }
  require(worst < 1e-4, "max relative gradient error " +
                            std::to_string(worst) + " >= 1e-4");
}

void criterion_learning() {
  const auto start = std::chrono::steady_clock::now();
  const Dataset and_data = {{{0, 0}, {0}}, {{0, 1}, {0}},
                            {{1, 0}, {0}}, {{1, 1}, {1}}};
  const Dataset or_data = {{{0, 0}, {0}}, {{0, 1}, {1}},
                           {{1, 0}, {1}}, {{1, 1}, {1}}};
  for (const Dataset* data : {&and_data, &or_data}) {
    const NeuralNetwork net = make_layered({2, 1}, Activation::Threshold, 0);
    const LearnResult result = learn(net, *data, 100, 0.0, 0.5, 0);
    for (const auto& [x, t] : *data) {
      require(forward(result.net, x) == t,
              "perceptron misclassifies after training");
    }
    require(result.log.size() <= 100, "perceptron exceeded 100 epochs");
  }

  // XOR with the recorded seed, and at least one seed in {0..4}
  bool pinned_seed_passed = false;
  bool any_passed = false;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const NeuralNetwork net =
        make_layered({2, 2, 1}, Activation::Logistic, seed);
    const LearnResult result =
        learn(net, xor_dataset(), 20000, 0.05, kXorRate, seed);
    const bool ok = result.log.back().loss <= 0.05;
    any_passed = any_passed || ok;
    if (seed == kXorSeed) pinned_seed_passed = ok;
  }
  require(any_passed, "no seed in {0..4} reached XOR MSE <= 0.05");
  require(pinned_seed_passed, "the recorded XOR seed no longer converges");

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(elapsed < 30.0,
          "runtime " + std::to_string(elapsed) + "s exceeds 30s");
}

void criterion_adaptation() {
  const std::vector<int> cells = {0, 1, 1, 0, 1, 0, 0, 1};
  AdaptationConfig exhaustive;
  exhaustive.strategy = AdaptationConfig::Strategy::Exhaustive;

  // (a) all-zeros target: rule 0 among the optima
  const AdaptationEnd zeros{Entities(8, 0.0),
                            AdaptationEnd::Scope::FinalState};
  const AdaptationResult a =
      evolve_rules(elementary_model(kHillStartRule, cells), zeros,
                   exhaustive, 5);
  require(a.model.params().rules.update_table->wolfram_number() == 0,
          "expected rule 0 as the smallest optimum for the zeros target");
  require(loss(a.model.actualize(5).current_states(), zeros,
               StateSet::finite({0, 1})) == 0.0,
          "zeros target not reached with loss 0");

  // (b) fixed-point target: rule 204 among the optima
  const AdaptationEnd fixed{to_states(cells),
                            AdaptationEnd::Scope::FinalState};
  const AdaptationResult b =
      evolve_rules(elementary_model(kHillStartRule, cells), fixed,
                   exhaustive, 5);
  require(loss(b.model.actualize(5).current_states(), fixed,
               StateSet::finite({0, 1})) == 0.0,
          "fixed-point target not reached with loss 0");
  const SystemModel rule204 = elementary_model(204, cells).actualize(5);
  require(loss(rule204.current_states(), fixed,
               StateSet::finite({0, 1})) == 0.0,
          "rule 204 must be among the fixed-point optima");
  require(b.model.params().rules.update_table->wolfram_number().value() <=
              204,
          "the tie-break must not pick a rule above 204");

  // hill climbing on a target generated by a hidden rule
  const SystemModel hidden =
      elementary_model(kHiddenRule, cells).actualize(5);
  const AdaptationEnd target{hidden.current_states(),
                             AdaptationEnd::Scope::FinalState};
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    AdaptationConfig cfg;
    cfg.max_iterations = 5000;
    cfg.loss_tolerance = 0.05;
    cfg.seed = seed;
    const AdaptationResult climb =
        evolve_rules(elementary_model(kHillStartRule, cells), target, cfg, 5);
    const double final_loss =
        loss(climb.model.actualize(5).current_states(), target,
             StateSet::finite({0, 1}));
    if (final_loss <= 0.05) ++successes;
  }
  require(successes >= 3, "hill climb reached the target for only " +
                              std::to_string(successes) + " of 5 seeds");
}

void criterion_conditional_equivalence() {
  const SystemModel net = threshold_ring_model(4, {1, 1, 1}, 2.0);

  const SystemModel ca232 = elementary_model(232, {0, 0, 0, 0});
  const EquivalenceReport conditional = check_equivalence(ca232, net);
  require(conditional.conclusion == Conclusion::ConditionallyEquivalent,
          "rule-232 CA vs threshold net must be conditionally equivalent");
  require(conditional.conditions ==
              std::vector<std::string>{"adaptation-fn missing-in-left"},
          "the condition must be exactly the missing adaptation function");
  bool found_update = false;
  for (const OperationalEntry& e : conditional.operational) {
    if (e.kind == kind::update_fn) {
      found_update = true;
      require(e.verdict == OperationalVerdict::ExtensionallyEqual,
              "update functions must be extensionally equal");
      require(e.checked == 8 && !e.sampled,
              "update functions must be checked over all 8 neighbourhoods");
    }
  }
  require(found_update, "the report must cover the update function");

  const SystemModel ca110 = elementary_model(110, {0, 0, 0, 0});
  const EquivalenceReport refuted = check_equivalence(ca110, net);
  require(refuted.conclusion == Conclusion::NotEquivalent,
          "rule-110 CA vs threshold net must not be equivalent");
  for (const OperationalEntry& e : refuted.operational) {
    if (e.kind == kind::update_fn) {
      require(e.verdict == OperationalVerdict::Counterexample,
              "rule 110 must produce a counterexample");
      require(e.counterexample_input == std::vector<double>{1, 1, 1},
              "the counterexample must be the neighbourhood (1,1,1)");
      require(e.left_output == 0.0 && e.right_output == 1.0,
              "the counterexample outputs must be (0, 1)");
    }
  }
}

int run_cli(const std::string& cli, const std::string& args,
            const fs::path& out, const fs::path& err) {
  const std::string cmd =
      cli + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_invariants(const std::string& cli) {
  // regime transitions happen in order or not at all
  const SystemModel virt = SystemModel::make_virtual(
      {kind::entities, kind::states, kind::milieus}, {kind::update_fn});
  bool threw = false;
  try {
    virt.step();
  } catch (const RegimeError&) {
    threw = true;
  }
  require(threw, "a virtual model must refuse to step");
  const SystemModel meta = elementary_model(110, {0, 1, 0, 1});
  try {
    meta.concretize(meta.params());
    require(false, "a metastable model must refuse concretize");
  } catch (const RegimeError&) {
  }
  try {
    meta.actualize(1).actualize(1);
    require(false, "an actual model must refuse actualize");
  } catch (const RegimeError&) {
  }

  // permutation invariance of the synchronous step
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> cells(11);
    for (int& c : cells) c = bit(rng);
    const SystemModel base = elementary_model(110, cells);
    std::vector<std::size_t> perm(cells.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> inverse(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = i;
    ConcreteParameters p = base.params();
    for (std::size_t i = 0; i < perm.size(); ++i) {
      p.initial_states[i] = base.params().initial_states[perm[i]];
      Milieu m;
      for (int nbr : base.params().milieus[perm[i]]) {
        m.push_back(static_cast<int>(inverse[static_cast<std::size_t>(nbr)]));
      }
      p.milieus[i] = m;
    }
    const Entities straight = base.step().current_states();
    const Entities shuffled =
        SystemModel::make_virtual(base.declared_structures(),
                                  base.declared_operations())
            .concretize(p)
            .step()
            .current_states();
    for (std::size_t i = 0; i < perm.size(); ++i) {
      require(shuffled[i] == straight[perm[i]],
              "step must commute with entity relabelling");
    }
  }

  // Wolfram round-trip over all 256 rules
  for (int rule = 0; rule < 256; ++rule) {
    require(elementary_rule_table(rule).wolfram_number() ==
                static_cast<std::uint64_t>(rule),
            "Wolfram round-trip failed for rule " + std::to_string(rule));
  }

  // report reflexivity and symmetry
  const SystemModel ca = elementary_model(232, {0, 0, 0, 0});
  const SystemModel net = threshold_ring_model(4, {1, 1, 1}, 2.0);
  require(check_equivalence(ca, ca).conclusion == Conclusion::Equivalent,
          "a model must be equivalent to itself");
  const EquivalenceReport ab = check_equivalence(ca, net);
  const EquivalenceReport ba = check_equivalence(net, ca);
  require(ab.conclusion == ba.conclusion, "conclusions must be symmetric");
  require(ba.conditions ==
              std::vector<std::string>{"adaptation-fn missing-in-right"},
          "swapped reports must mirror the missing side");

  // byte-deterministic CLI reruns
  require(!cli.empty(), "no CLI path supplied to the acceptance binary");
  const fs::path dir =
      fs::temp_directory_path() / ("mm_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path out = dir / "out.txt";
  const fs::path err = dir / "err.txt";
  for (const std::string tag : {"a", "b"}) {
    require(run_cli(cli,
                    "create-ca --rule 30 --width 16 --init random --seed 7 "
                    "--out " +
                        (dir / ("ca_" + tag + ".json")).string(),
                    out, err) == 0,
            "create-ca failed");
    require(run_cli(cli,
                    "run --model " + (dir / ("ca_" + tag + ".json")).string() +
                        " --steps 25 --out " +
                        (dir / ("run_" + tag + ".txt")).string(),
                    out, err) == 0,
            "run failed");
  }
  require(slurp(dir / "ca_a.json") == slurp(dir / "ca_b.json"),
          "create-ca reruns must be byte-identical");
  require(slurp(dir / "run_a.txt") == slurp(dir / "run_b.txt"),
          "run reruns must be byte-identical");
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  Harness harness;
  harness.criterion("CA oracle equivalence (6 rules x 20 states x "
                    "100 steps, width 64)",
                    criterion_ca_oracle);
  harness.criterion("life correctness (blinker period 2, glider displaced "
                    "by (1,1))",
                    criterion_life);
  harness.criterion("network oracle equivalence (10 nets x 100 inputs, "
                    "<= 1e-12)",
                    criterion_ann_oracle);
  harness.criterion("gradient check (backprop vs central differences, "
                    "rel err < 1e-4)",
                    criterion_gradient_check);
  harness.criterion("learning (perceptron AND/OR exact; XOR MSE <= 0.05)",
                    criterion_learning);
  harness.criterion("adaptation (exhaustive optima; hill climb 3+/5 seeds)",
                    criterion_adaptation);
  harness.criterion("conditional equivalence (majority CA vs threshold net, "
                    "counterexample)",
                    criterion_conditional_equivalence);
  harness.criterion("invariant suites (regimes, synchrony, round-trips, "
                    "report symmetry, CLI determinism)",
                    [&] { criterion_invariants(cli); });

  if (harness.failures() > 0) {
    std::cout << harness.failures() << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
