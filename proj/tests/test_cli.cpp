#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "metamodel/serialization.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliRunner {
 public:
  CliRunner() {
    dir_ = fs::temp_directory_path() /
           ("mm_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~CliRunner() { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  CliResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(METAMODEL_CLI_PATH) + " " + args +
                            " >" + out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    CliResult result;
    result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("create-ca then run yields t+1 trajectory lines") {
  CliRunner cli;
  const auto model = cli.path("ca.json");
  CHECK(cli.run("create-ca --rule 110 --width 16 --out " + model.string())
            .status == 0);
  const auto trajectory = cli.path("run.txt");
  CHECK(cli.run("run --model " + model.string() + " --steps 10 --out " +
                trajectory.string())
            .status == 0);
  std::istringstream in(slurp(trajectory));
  std::string line;
  int state_lines = 0;
  std::getline(in, line);
  CHECK(line == "# e=16 k=2 t=10");
  while (std::getline(in, line)) {
    if (!line.empty()) ++state_lines;
  }
  CHECK(state_lines == 11);
}

TEST_CASE("usage errors exit with 64") {
  CliRunner cli;
  CHECK(cli.run("run --model x.json --steps 0").status == 64);
  CHECK(cli.run("run --nonsense").status == 64);
  CHECK(cli.run("frobnicate").status == 64);
}

TEST_CASE("missing inputs exit with 66, malformed ones with 65") {
  CliRunner cli;
  CHECK(cli.run("run --model " + cli.path("nope.json").string() +
                " --steps 3")
            .status == 66);
  metamodel::write_text_file(cli.path("garbage.json"), "{not json");
  CHECK(cli.run("run --model " + cli.path("garbage.json").string() +
                " --steps 3")
            .status == 65);
  metamodel::write_text_file(cli.path("wrong.json"), "{\"a\": 1}");
  CHECK(cli.run("run --model " + cli.path("wrong.json").string() +
                " --steps 3")
            .status == 65);
}

TEST_CASE("check-eq encodes the conclusion in its exit status") {
  CliRunner cli;
  const auto ca232 = cli.path("ca232.json");
  const auto ca110 = cli.path("ca110.json");
  CHECK(cli.run("create-ca --rule 232 --width 4 --init zeros --out " +
                ca232.string())
            .status == 0);
  CHECK(cli.run("create-ca --rule 110 --width 4 --init zeros --out " +
                ca110.string())
            .status == 0);
  // the matching threshold-unit network, written as a model document
  const auto net = cli.path("net.json");
  metamodel::save_model(testutil::threshold_ring_model(4, {1, 1, 1}, 2.0),
                        net);

  const CliResult conditional =
      cli.run("check-eq --left " + ca232.string() + " --right " +
              net.string());
  CHECK(conditional.status == 1);
  CHECK(conditional.out.find("conditionally-equivalent") != std::string::npos);

  CHECK(cli.run("check-eq --left " + ca232.string() + " --right " +
                ca232.string())
            .status == 0);
  CHECK(cli.run("check-eq --left " + ca110.string() + " --right " +
                net.string())
            .status == 2);
}

TEST_CASE("identical invocations produce byte-identical files") {
  CliRunner cli;
  for (const std::string tag : {"a", "b"}) {
    CHECK(cli.run("create-ca --rule 30 --width 12 --init random --seed 9 "
                  "--out " +
                  cli.path("ca_" + tag + ".json").string())
              .status == 0);
    CHECK(cli.run("run --model " + cli.path("ca_" + tag + ".json").string() +
                  " --steps 20 --out " +
                  cli.path("run_" + tag + ".txt").string())
              .status == 0);
    CHECK(cli.run("create-ann --layers 2,2,1 --seed 3 --out " +
                  cli.path("net_" + tag + ".json").string())
              .status == 0);
  }
  CHECK(slurp(cli.path("ca_a.json")) == slurp(cli.path("ca_b.json")));
  CHECK(slurp(cli.path("run_a.txt")) == slurp(cli.path("run_b.txt")));
  CHECK(slurp(cli.path("net_a.json")) == slurp(cli.path("net_b.json")));
}

TEST_CASE("created files load back as identical models") {
  CliRunner cli;
  const auto model = cli.path("ca.json");
  CHECK(cli.run("create-ca --rule 90 --width 8 --out " + model.string())
            .status == 0);
  const metamodel::SystemModel loaded = metamodel::load_model_file(model);
  CHECK(loaded.params().rules.update_table->wolfram_number() == 90);
  CHECK(loaded.params().entity_count() == 8);
  // re-saving changes nothing
  const auto again = cli.path("ca2.json");
  metamodel::save_model(loaded, again);
  CHECK(slurp(model) == slurp(again));
}

TEST_CASE("run exports P1 bitmaps on request") {
  CliRunner cli;
  const auto model = cli.path("ca.json");
  CHECK(cli.run("create-ca --rule 90 --width 8 --out " + model.string())
            .status == 0);
  const auto pbm = cli.path("space_time.pbm");
  CHECK(cli.run("run --model " + model.string() + " --steps 4 --out " +
                cli.path("t.txt").string() + " --pbm " + pbm.string())
            .status == 0);
  std::istringstream in(slurp(pbm));
  std::string line;
  std::getline(in, line);
  CHECK(line == "P1");
  std::getline(in, line);
  CHECK(line == "8 5");  // width x (t+1) rows

  // per-step grids for a 2-D model
  std::vector<int> grid(25, 0);
  grid[11] = grid[12] = grid[13] = 1;
  metamodel::CellularAutomaton life{
      grid, metamodel::StateSet::finite({0, 1}), metamodel::moore_milieu(5, 5),
      metamodel::life_rule_table()};
  metamodel::save_model(metamodel::ca_to_system_model(life),
                        cli.path("life.json"));
  CHECK(cli.run("run --model " + cli.path("life.json").string() +
                " --steps 2 --out " + cli.path("life.txt").string() +
                " --pbm " + cli.path("life").string() + " --grid 5x5")
            .status == 0);
  CHECK(fs::exists(cli.path("life_0000.pbm")));
  CHECK(fs::exists(cli.path("life_0002.pbm")));
  std::istringstream step0(slurp(cli.path("life_0000.pbm")));
  std::getline(step0, line);
  CHECK(line == "P1");
  std::getline(step0, line);
  CHECK(line == "5 5");
}

TEST_CASE("adapt drives a model towards a target") {
  CliRunner cli;
  const auto model = cli.path("ca.json");
  CHECK(cli.run("create-ca --rule 90 --width 8 --init random --seed 4 "
                "--out " +
                model.string())
            .status == 0);
  metamodel::write_text_file(cli.path("target.txt"), "0 0 0 0 0 0 0 0\n");
  const auto adapted = cli.path("adapted.json");
  const auto log = cli.path("adapt.log");
  CHECK(cli.run("adapt --model " + model.string() + " --target " +
                cli.path("target.txt").string() +
                " --strategy exhaustive --steps 5 --out " + adapted.string() +
                " --log " + log.string())
            .status == 0);
  const metamodel::SystemModel best = metamodel::load_model_file(adapted);
  CHECK(best.params().rules.update_table->wolfram_number() == 0);
  std::istringstream log_in(slurp(log));
  std::string line;
  int lines = 0;
  while (std::getline(log_in, line)) {
    if (!line.empty()) ++lines;
  }
  CHECK(lines == 256);
}

TEST_CASE("train reaches zero error on AND") {
  CliRunner cli;
  const auto net = cli.path("net.json");
  CHECK(cli.run("create-ann --layers 2,1 --activation threshold --out " +
                net.string())
            .status == 0);
  metamodel::write_text_file(cli.path("and.txt"),
                             "0 0 | 0\n0 1 | 0\n1 0 | 0\n1 1 | 1\n");
  const auto trained = cli.path("trained.json");
  CHECK(cli.run("train --model " + net.string() + " --data " +
                cli.path("and.txt").string() + " --g 100 --l 0 --rate 0.5 "
                "--seed 0 --out " +
                trained.string())
            .status == 0);
  const metamodel::NeuralNetwork result =
      metamodel::load_network_file(trained);
  CHECK(metamodel::forward(result, std::vector<double>{1, 1}) ==
        std::vector<double>{1});
  CHECK(metamodel::forward(result, std::vector<double>{1, 0}) ==
        std::vector<double>{0});
}
