#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfp/verify.h"

namespace bfp {

using Json = nlohmann::ordered_json;

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"biindependence", "commutation",  "witness",      "vh_compression",
                                              "tensor_injectivity", "thm32_iso", "kernel_probe", "corollary"};
  return names;
}

struct FaceConfig {
  std::vector<CMatrix> left_generators;
  std::vector<CMatrix> right_generators;
  CMatrix density;
  std::optional<std::pair<std::size_t, std::size_t>> product_split;
};

struct ExperimentConfig {
  std::vector<FaceConfig> faces;
  std::optional<CMatrix> ambient_density;  // all faces act on one matrix algebra
  std::size_t truncation = 4;
  std::size_t word_len_max = 4;
  Tolerance tol;
  std::uint64_t seed = 0;
  std::vector<std::string> checks;

  WitnessSpec witness;
  bool witness_given = false;
  std::size_t vh_face_i = 0;
  std::size_t vh_face_j = 1;
  std::vector<cplx> vh_h;
  std::vector<std::vector<std::size_t>> biindependence_words;
  std::size_t biindependence_max_words = 20000;
  std::size_t probe_word_len = 3;
  std::optional<std::size_t> kernel_probe_word_len;

  Json expected = Json::object();  // per check: field → expected value or {min,max,value,tol,contains}
  std::vector<std::string> warnings;
  std::string digest;  // FNV-1a of the config text
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return config.has_value(); }
};

/// Validates the whole document and reports every problem found.
ParseResult parse_config(const std::string& text);

/// Matrix literal: rows of entries, each entry [re, im] or a real number.
CMatrix parse_matrix(const Json& j, const std::string& where, std::vector<std::string>& errors);

/// Builds the face family described by the config.
FaceFamily build_family(const ExperimentConfig& config);

struct CheckResult {
  std::string name;
  Json result = Json::object();
  std::optional<std::string> error;
  double seconds = 0.0;
};

struct RunReport {
  Json provenance = Json::object();
  std::vector<std::string> warnings;
  std::vector<CheckResult> checks;
  bool expectations_declared = false;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Runs the requested checks in order; a failing check records its error and the rest still run.
RunReport run(const ExperimentConfig& config);

/// JSON text of the report; doubles use 17 significant digits. Timing is a separate
/// top-level block and is omitted when include_timing is false.
std::string report_to_json(const RunReport& report, bool include_timing = true);

/// Serializer used for reports: like Json::dump but with %.17g for floating point.
std::string dump_json(const Json& j, int indent = 2);

}  // namespace bfp
