#pragma once

// Data behind each figure panel plus checks against the numbers printed in
// the captions.

#include <string>
#include <utility>
#include <vector>

#include "surfstate/report.hpp"

namespace surfstate {

struct Check {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tol = 0.0;  // absolute unless `relative`
  bool relative = false;
  bool passed = false;
  /// Reported but not counted as a failure (convention-dependent comparisons).
  bool flag_only = false;
  std::string note;

  static Check make(std::string name, double value, double target, double tol,
                    bool relative = false);
};

struct FigureData {
  std::string id;
  std::string title;
  Json inputs;
  Json results = Json::object();
  std::vector<std::pair<std::string, Table>> tables;  // file stem -> table
  std::vector<Check> checks;

  bool all_passed() const;
};

const std::vector<std::string>& figure_ids();

/// Throws std::invalid_argument for an unknown id.
FigureData reproduce_figure(const std::string& id);

Json to_json(const Check& c);

}  // namespace surfstate
