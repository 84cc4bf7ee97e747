#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

#include "json.hpp"

#include "qdarwin/cli.hpp"

namespace qdarwin::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string pip_csv(const PipCurve& curve, bool rescaled) {
  std::string out = rescaled ? "m,I_bits,stderr_bits,I_rescaled\n" : "m,I_bits,stderr_bits\n";
  const double total = curve.points.empty() ? 0.0 : curve.points.back().mean_bits;
  for (const auto& p : curve.points) {
    out += std::to_string(p.m);
    out += ',';
    out += format_number(p.mean_bits);
    out += ',';
    if (p.stderr_bits) out += format_number(*p.stderr_bits);
    if (rescaled) {
      out += ',';
      out += format_number(total > 0.0 ? p.mean_bits / total : 0.0);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << contents;
    f.close();
    if (!f) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::runtime_error("cannot write " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot write " + path.string() + ": " + ec.message());
  }
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command_line"] = command_line;
  j["seed"] = seed;
  j["parameters"] = parameters;
  j["outputs"] = outputs;
  j["version"] = std::string(kVersion);
  j["wall_time_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

}  // namespace qdarwin::cli
