#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qdarwin/pip_curve.hpp"
#include "qdarwin/rng.hpp"

namespace qdarwin::cli {

/// 12 significant digits, shortest form, "inf"/"-inf"/"nan" for non-finite
/// values. Locale independent.
std::string format_number(double v);

/// `m,I_bits,stderr_bits` rows; with `rescaled`, a fourth column I(m)/I(N).
std::string pip_csv(const PipCurve& curve, bool rescaled = false);

/// Write to a temporary file next to `path`, then rename over it.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

struct RunManifest {
  std::string command_line;
  RngSeed seed = 0;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;

  std::string to_json() const;
};

}  // namespace qdarwin::cli
