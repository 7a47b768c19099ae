#pragma once

// Serialization of results to deterministic JSON and CSV.
//
// Floats are rounded to 12 significant digits before they reach the JSON
// writer, and objects keep insertion order, so repeated runs produce
// byte-identical files.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfstate/bands.hpp"
#include "surfstate/bpm.hpp"
#include "surfstate/ingap.hpp"
#include "surfstate/interface.hpp"

namespace surfstate {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSignificantDigits = 12;

/// Module name -> version, recorded in every manifest.
Json module_versions();

/// x rounded to 12 significant digits; non-finite values become strings.
Json number(double x);
Json numbers(const std::vector<double>& xs);
std::string format_number(double x);

Json to_json(const LatticeParams& p);
Json to_json(const PhysicalParams& p);
Json to_json(const std::vector<PropagationConstant>& roots);
Json to_json(const InGapState& s);
Json to_json(const GapVerdict& v);
Json to_json(const Ratio& r);
Json to_json(const SurfaceSolution& s);
Json to_json(const ProfileReport& r);
Json to_json(const StationarityReport& r);

/// Column-oriented table written as CSV with a header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
  std::string to_csv() const;
  Json to_json() const;
};

Table profile_table(const ProfileReport& r);
Table band_table_csv(const BandTable& t);
Table evolution_table(const EvolutionRecord& r);
Table snapshot_table(const EvolutionRecord& r);

std::string dump(const Json& j);

/// Collects output files and writes them with a manifest.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  /// Writes the file and records it; returns its path.
  std::filesystem::path write_text(const std::string& name, const std::string& content,
                                   const std::string& kind);
  std::filesystem::path write_json(const std::string& name, const Json& j);
  std::filesystem::path write_table(const std::string& name, const Table& t);
  const Json& files() const noexcept { return files_; }

  /// manifest.json with the command, inputs, tolerances, results and file list.
  std::filesystem::path write_manifest(const std::string& command, const Json& inputs,
                                       const Json& tolerances, const Json& results);

 private:
  std::filesystem::path dir_;
  Json files_ = Json::array();
};

}  // namespace surfstate
