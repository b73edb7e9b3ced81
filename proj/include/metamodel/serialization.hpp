#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "metamodel/ann.hpp"
#include "metamodel/equivalence.hpp"
#include "metamodel/parameters.hpp"
#include "metamodel/rule_table.hpp"
#include "metamodel/system_model.hpp"

namespace metamodel {

/// Model documents: top-level fields regime, structures, operations,
/// params (plus trajectory for actual models). Indices are 1-based on
/// disk; 0 marks the fixed-boundary phantom neighbour.
nlohmann::json model_to_json(const SystemModel& model);
SystemModel model_from_json(const nlohmann::json& doc);

/// Network documents: {"kind": "ann", layers, incoming, weights, ...}.
nlohmann::json network_to_json(const NeuralNetwork& net);
NeuralNetwork network_from_json(const nlohmann::json& doc);

void save_model(const SystemModel& model, const std::filesystem::path& path);
void save_network(const NeuralNetwork& net, const std::filesystem::path& path);

/// Loads a model document, or a network document converted through its
/// system-model embedding. Throws Error("cannot open ...") for missing
/// files and ValidationError for malformed content.
SystemModel load_model_file(const std::filesystem::path& path);
NeuralNetwork load_network_file(const std::filesystem::path& path);

/// Trajectory text: header "# e=<e> k=<k> t=<t>", then one line per
/// time step with states separated by single spaces; line 0 is the
/// initial tuple. k is 0 for interval state sets.
void write_trajectory(std::ostream& out, const SystemModel& model);

/// Target tuple: the last nonempty, non-comment line of the stream, so
/// both a one-line target file and a trajectory file (final row) work.
Entities read_targets(std::istream& in);

/// Rule table text: either "wolfram:<number>" shorthand or explicit
/// "<neighborhood> -> <state>" lines in canonical descending order.
void write_rule_table_text(std::ostream& out, const RuleTable& table);
RuleTable read_rule_table_text(std::istream& in);

/// Adaptation log lines: "<iteration> <loss> <accepted:0|1> <candidate>".
void write_adaptation_log(std::ostream& out,
                          const std::vector<AdaptationRecord>& log);

/// Dataset text: one sample per line, "inputs | targets", decimal
/// numbers, '#' comments ignored.
Dataset read_dataset(std::istream& in);
Dataset load_dataset_file(const std::filesystem::path& path);

nlohmann::json report_to_json(const EquivalenceReport& report);
void write_report_table(std::ostream& out, const EquivalenceReport& report);

/// Portable bitmap (P1) over binary states, one character per cell.
void write_pbm(std::ostream& out, std::span<const double> bits,
               std::size_t width, std::size_t height);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace metamodel
