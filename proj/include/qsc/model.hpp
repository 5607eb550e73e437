#pragma once

// Model files: JSON with schema_version, alphabet, q_x, states and optional
// alt_states / labels. Matrices are row-major nested arrays of [re, im] pairs.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsc/hypothesis.hpp"

namespace qsc {

inline constexpr int kModelSchemaVersion = 1;

struct Model {
  CQSource source;
  std::optional<std::vector<DensityMatrix>> alt_states;
  std::vector<std::string> labels;
};

// Parse errors, unsupported versions and invariant violations all raise
// ValidationError naming the offending field.
Model parse_model(const std::string& text);
Model load_model(const std::string& path);

std::string model_to_json(const CQSource& src, const std::optional<std::vector<DensityMatrix>>& alt = std::nullopt);

}  // namespace qsc
