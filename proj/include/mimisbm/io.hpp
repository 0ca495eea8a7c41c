#pragma once

// Text formats.
//
// MLG (multilayer graph):
//   line 1      "N V"
//   then        "i j v" per edge, 0-based; canonical files list i < j sorted by (i, j, v)
//   '#' at the start of a line marks a comment; blank lines are ignored.
//   A file may also list both orientations of every dyad. A lower-triangle
//   entry without its mirror is rejected unless symmetrize is set.
//
// Partition:
//   line 1      "k K"
//   then        one label in [0, K) per line
//
// Reports (fit, selection, simulation truth) are JSON objects with a fixed
// key order and shortest round-trip decimal floats; see README.md for keys.

#include <iosfwd>
#include <string>

#include "mimisbm/core.hpp"
#include "mimisbm/generator.hpp"
#include "mimisbm/inference.hpp"
#include "mimisbm/selection.hpp"

namespace mimisbm::io {

MultilayerGraph parse_mlg(std::istream& in, bool symmetrize = false);
void format_mlg(std::ostream& out, const MultilayerGraph& g);
MultilayerGraph read_mlg(const std::string& path, bool symmetrize = false);
void write_mlg(const std::string& path, const MultilayerGraph& g);

HardPartition parse_partition(std::istream& in);
void format_partition(std::ostream& out, const HardPartition& p);
HardPartition read_partition(const std::string& path);
void write_partition(const std::string& path, const HardPartition& p);

std::string fit_report_json(const FitReport& report);
std::string selection_json(const SelectionResult& result);
std::string truth_json(const SimulationConfig& cfg, const GroundTruth& truth);

/// One row per grid cell: k,q,ok,ilvb,icl_exact,icl_variational,icl_approx.
std::string selection_csv(const SelectionResult& result);

FitReport parse_fit_report(const std::string& text);
SelectionResult parse_selection(const std::string& text);

void write_report(const std::string& path, const FitReport& report);
void write_report(const std::string& path, const SelectionResult& result);
FitReport read_fit_report(const std::string& path);
SelectionResult read_selection(const std::string& path);

/// Writes `content` to `path`, throwing IoError on failure.
void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace mimisbm::io
