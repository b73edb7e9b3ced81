#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metamodel/adaptation.hpp"
#include "metamodel/ann.hpp"
#include "metamodel/ca.hpp"
#include "metamodel/equivalence.hpp"
#include "metamodel/errors.hpp"
#include "metamodel/serialization.hpp"

namespace fs = std::filesystem;
using namespace metamodel;

namespace {

// sysexits-style codes for scripting
constexpr int kUsage = 64;    // bad flags or flag values
constexpr int kData = 65;     // malformed or inconsistent input data
constexpr int kNoInput = 66;  // missing input file
constexpr int kOk = 0;

void emit(const std::string& content, const std::string& out) {
  if (out == "-") {
    std::cout << content;
  } else {
    write_text_file(out, content);
  }
}

bool missing(const std::string& path) {
  return !fs::exists(fs::path(path));
}

std::vector<std::size_t> parse_layer_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const long v = std::stol(part);
    if (v < 1) throw PreconditionError("layer sizes must be >= 1");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  if (sizes.size() < 2) {
    throw PreconditionError("--layers needs at least two comma-separated "
                            "sizes");
  }
  return sizes;
}

struct CreateCaArgs {
  std::uint64_t rule = 0;
  std::size_t width = 0;
  std::size_t radius = 1;
  std::string boundary = "ring";
  std::string init = "center";
  std::uint64_t seed = 0;
  std::string out = "-";
};

int run_create_ca(const CreateCaArgs& a) {
  RuleTable table = a.radius == 1
                        ? elementary_rule_table(static_cast<int>(a.rule))
                        : RuleTable::from_wolfram(
                              a.rule, static_cast<int>(2 * a.radius + 1));
  std::vector<int> cells(a.width, 0);
  if (a.init == "center") {
    cells[a.width / 2] = 1;
  } else if (a.init == "random") {
    std::mt19937_64 rng(a.seed);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int& c : cells) c = bit(rng);
  }
  const Boundary boundary =
      a.boundary == "fixed" ? Boundary::Fixed : Boundary::Periodic;
  CellularAutomaton ca{cells, StateSet::finite({0, 1}),
                       ring_milieu(a.width, a.radius, boundary), table};
  const SystemModel model = ca_to_system_model(ca);
  emit(model_to_json(model).dump(2) + "\n", a.out);
  return kOk;
}

struct CreateAnnArgs {
  std::string layers;
  std::string activation = "logistic";
  std::uint64_t seed = 0;
  std::string out = "-";
};

int run_create_ann(const CreateAnnArgs& a) {
  const NeuralNetwork net =
      make_layered(parse_layer_sizes(a.layers),
                   a.activation == "threshold" ? Activation::Threshold
                                               : Activation::Logistic,
                   a.seed);
  emit(network_to_json(net).dump(2) + "\n", a.out);
  return kOk;
}

struct RunArgs {
  std::string model;
  long steps = 1;
  std::string out = "-";
  std::string pbm;
  std::string grid;
};

int run_run(const RunArgs& a) {
  if (missing(a.model)) {
    std::cerr << "error: no such file: " << a.model << "\n";
    return kNoInput;
  }
  const SystemModel model = load_model_file(a.model);
  const SystemModel run = model.actualize(a.steps);
  std::ostringstream trajectory;
  write_trajectory(trajectory, run);
  emit(trajectory.str(), a.out);

  if (!a.pbm.empty()) {
    const auto& rows = run.trajectory().rows;
    const std::size_t e = run.params().entity_count();
    if (a.grid.empty()) {
      // whole trajectory as one image, one row per time step
      std::ostringstream img;
      std::vector<double> bits;
      for (const Entities& row : rows) {
        bits.insert(bits.end(), row.begin(), row.end());
      }
      write_pbm(img, bits, e, rows.size());
      write_text_file(a.pbm, img.str());
    } else {
      const std::size_t x = a.grid.find('x');
      if (x == std::string::npos) {
        throw PreconditionError("--grid expects WIDTHxHEIGHT");
      }
      const std::size_t w = std::stoul(a.grid.substr(0, x));
      const std::size_t h = std::stoul(a.grid.substr(x + 1));
      for (std::size_t step = 0; step < rows.size(); ++step) {
        std::ostringstream img;
        write_pbm(img, rows[step], w, h);
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "_%04zu.pbm", step);
        write_text_file(a.pbm + suffix, img.str());
      }
    }
  }
  return kOk;
}

struct AdaptArgs {
  std::string model;
  std::string target;
  std::string strategy = "hill";
  long g = 1000;
  double l = 0.0;
  std::uint64_t seed = 0;
  int mutation_bits = 1;
  long steps = 0;  // 0: take t from the model file
  std::string out = "-";
  std::string log;
};

int run_adapt(const AdaptArgs& a) {
  for (const std::string& path : {a.model, a.target}) {
    if (missing(path)) {
      std::cerr << "error: no such file: " << path << "\n";
      return kNoInput;
    }
  }
  const SystemModel model = load_model_file(a.model);
  std::stringstream targets(read_text_file(a.target));
  AdaptationEnd end{read_targets(targets), AdaptationEnd::Scope::FinalState};
  AdaptationConfig cfg;
  cfg.max_iterations = a.g;
  cfg.loss_tolerance = a.l;
  cfg.seed = a.seed;
  cfg.mutation_bits = a.mutation_bits;
  cfg.strategy = a.strategy == "exhaustive"
                     ? AdaptationConfig::Strategy::Exhaustive
                     : AdaptationConfig::Strategy::HillClimbFirstImprovement;
  const long t = a.steps > 0 ? a.steps : model.params().time_steps;
  const AdaptationResult result = evolve_rules(model, end, cfg, t);
  emit(model_to_json(result.model).dump(2) + "\n", a.out);
  if (!a.log.empty()) {
    std::ostringstream log;
    write_adaptation_log(log, result.log);
    write_text_file(a.log, log.str());
  }
  return kOk;
}

struct TrainArgs {
  std::string model;
  std::string data;
  long g = 100;
  double l = 0.0;
  double rate = 0.5;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string log;
};

int run_train(const TrainArgs& a) {
  for (const std::string& path : {a.model, a.data}) {
    if (missing(path)) {
      std::cerr << "error: no such file: " << path << "\n";
      return kNoInput;
    }
  }
  const NeuralNetwork net = load_network_file(a.model);
  const Dataset dataset = load_dataset_file(a.data);
  const LearnResult result = learn(net, dataset, a.g, a.l, a.rate, a.seed);
  emit(network_to_json(result.net).dump(2) + "\n", a.out);
  if (!a.log.empty()) {
    std::ostringstream log;
    write_adaptation_log(log, result.log);
    write_text_file(a.log, log.str());
  }
  return kOk;
}

struct CheckEqArgs {
  std::string left;
  std::string right;
  double tolerance = 1e-9;
  std::size_t samples = 1024;
  std::uint64_t seed = 0;
  std::string report;
};

int run_check_eq(const CheckEqArgs& a) {
  for (const std::string& path : {a.left, a.right}) {
    if (missing(path)) {
      std::cerr << "error: no such file: " << path << "\n";
      return kNoInput;
    }
  }
  try {
    const SystemModel left = load_model_file(a.left);
    const SystemModel right = load_model_file(a.right);
    EquivalenceConfig cfg;
    cfg.tolerance = a.tolerance;
    cfg.sample_budget = a.samples;
    cfg.seed = a.seed;
    const EquivalenceReport report = check_equivalence(left, right, cfg);
    write_report_table(std::cout, report);
    if (!a.report.empty()) {
      write_text_file(a.report, report_to_json(report).dump(2) + "\n");
    }
    return exit_code(report.conclusion);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complex-systems metamodelling engine"};
  app.require_subcommand(1);

  CreateCaArgs ca_args;
  CLI::App* create_ca =
      app.add_subcommand("create-ca", "write an elementary CA model file");
  create_ca->add_option("--rule", ca_args.rule, "Wolfram rule number")
      ->required();
  create_ca->add_option("--width", ca_args.width, "number of cells")
      ->required()
      ->check(CLI::PositiveNumber);
  create_ca->add_option("--radius", ca_args.radius, "neighbourhood radius")
      ->check(CLI::Range(std::size_t{1}, std::size_t{2}));
  create_ca->add_option("--boundary", ca_args.boundary, "ring or fixed")
      ->check(CLI::IsMember({"ring", "fixed"}));
  create_ca->add_option("--init", ca_args.init,
                        "initial state: center, zeros or random")
      ->check(CLI::IsMember({"center", "zeros", "random"}));
  create_ca->add_option("--seed", ca_args.seed, "seed for --init random");
  create_ca->add_option("--out", ca_args.out, "output file ('-' = stdout)");

  CreateAnnArgs ann_args;
  CLI::App* create_ann =
      app.add_subcommand("create-ann", "write a layered network file");
  create_ann->add_option("--layers", ann_args.layers, "sizes, e.g. 2,2,1")
      ->required();
  create_ann->add_option("--activation", ann_args.activation,
                         "threshold or logistic")
      ->check(CLI::IsMember({"threshold", "logistic"}));
  create_ann->add_option("--seed", ann_args.seed, "weight init seed");
  create_ann->add_option("--out", ann_args.out, "output file ('-' = stdout)");

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "actualize a model and write "
                                            "its trajectory");
  run->add_option("--model", run_args.model, "model or network file")
      ->required();
  run->add_option("--steps", run_args.steps, "time steps t")
      ->required()
      ->check(CLI::PositiveNumber);
  run->add_option("--out", run_args.out, "trajectory file ('-' = stdout)");
  run->add_option("--pbm", run_args.pbm, "also write a P1 bitmap");
  run->add_option("--grid", run_args.grid,
                  "treat entities as a WIDTHxHEIGHT grid for --pbm");

  AdaptArgs adapt_args;
  CLI::App* adapt =
      app.add_subcommand("adapt", "evolve a model's update rules towards a "
                                  "target final state");
  adapt->add_option("--model", adapt_args.model, "model file")->required();
  adapt->add_option("--target", adapt_args.target, "target state file")
      ->required();
  adapt->add_option("--strategy", adapt_args.strategy, "hill or exhaustive")
      ->check(CLI::IsMember({"hill", "exhaustive"}));
  adapt->add_option("--g", adapt_args.g, "max iterations")
      ->check(CLI::PositiveNumber);
  adapt->add_option("--l", adapt_args.l, "loss tolerance")
      ->check(CLI::NonNegativeNumber);
  adapt->add_option("--seed", adapt_args.seed, "mutation seed");
  adapt->add_option("--mutation-bits", adapt_args.mutation_bits,
                    "table entries flipped per candidate")
      ->check(CLI::PositiveNumber);
  adapt->add_option("--steps", adapt_args.steps,
                    "evaluation steps (default: t from the model file)");
  adapt->add_option("--out", adapt_args.out, "adapted model file");
  adapt->add_option("--log", adapt_args.log, "adaptation log file");

  TrainArgs train_args;
  CLI::App* train =
      app.add_subcommand("train", "learn network weights from a dataset");
  train->add_option("--model", train_args.model, "network file")->required();
  train->add_option("--data", train_args.data, "dataset file")->required();
  train->add_option("--g", train_args.g, "max epochs")
      ->check(CLI::PositiveNumber);
  train->add_option("--l", train_args.l, "loss tolerance")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--rate", train_args.rate, "learning rate")
      ->check(CLI::PositiveNumber);
  train->add_option("--seed", train_args.seed, "init and shuffle seed");
  train->add_option("--out", train_args.out, "trained network file");
  train->add_option("--log", train_args.log, "epoch loss log file");

  CheckEqArgs eq_args;
  CLI::App* check_eq =
      app.add_subcommand("check-eq", "compare two models for equivalence");
  check_eq->add_option("--left", eq_args.left, "left model file")->required();
  check_eq->add_option("--right", eq_args.right, "right model file")
      ->required();
  check_eq->add_option("--tolerance", eq_args.tolerance,
                       "comparison tolerance")
      ->check(CLI::NonNegativeNumber);
  check_eq->add_option("--samples", eq_args.samples,
                       "sample budget for continuous domains");
  check_eq->add_option("--seed", eq_args.seed, "sampling seed");
  check_eq->add_option("--report", eq_args.report, "also write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::cerr << e.what() << "\n";
    return kUsage;
  }

  try {
    if (create_ca->parsed()) return run_create_ca(ca_args);
    if (create_ann->parsed()) return run_create_ann(ann_args);
    if (run->parsed()) return run_run(run_args);
    if (adapt->parsed()) return run_adapt(adapt_args);
    if (train->parsed()) return run_train(train_args);
    if (check_eq->parsed()) return run_check_eq(eq_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
