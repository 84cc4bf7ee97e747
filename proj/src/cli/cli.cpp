#include "qdarwin/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "output.hpp"
#include "qdarwin/ensembles.hpp"
#include "qdarwin/haar.hpp"
#include "qdarwin/redundancy.hpp"

namespace qdarwin::cli {
namespace {

namespace fs = std::filesystem;
using Params = std::map<std::string, std::string>;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return std::string(s);
}

// Reals accept the literal token `inf`.
double parse_real(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || std::isnan(v))
    throw UsageError("invalid value '" + s + "' for " + std::string(what));
  return v;
}

int parse_count(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0)
    throw UsageError("invalid count '" + s + "' for " + std::string(what));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<double> parse_reals(std::string_view s, std::string_view what) {
  std::vector<double> out;
  for (auto item : split(s, ',')) out.push_back(parse_real(item, what));
  return out;
}

std::vector<int> parse_counts(std::string_view s, std::string_view what) {
  std::vector<int> out;
  for (auto item : split(s, ',')) out.push_back(parse_count(item, what));
  return out;
}

/// Merge key=value overrides into the defaults; unknown keys are usage errors.
Params apply_overrides(Params defaults, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    if (!defaults.contains(key)) {
      std::string valid;
      for (const auto& [k, v] : defaults) valid += (valid.empty() ? "" : ", ") + k;
      throw UsageError("unknown parameter '" + key + "' (valid: " + valid + ")");
    }
    defaults[key] = kv.substr(eq + 1);
  }
  return defaults;
}

struct Options {
  RngSeed seed = 1;
  std::optional<int> samples;
  unsigned threads = 0;
  double p0 = 0.5;
  std::string out;
  std::vector<std::string> params;
};

struct OutputFile {
  std::string name;
  std::string contents;
};

// Seeds per figure curve, so curves with different N do not share streams.
RngSeed curve_seed(RngSeed seed, int n) { return seed * 0x9E3779B97F4A7C15ULL + static_cast<RngSeed>(n); }

std::string number_tag(double v) { return format_number(v); }

PipCurve erlang_curve(int n_env, double p0) {
  if (p0 == 0.5) return poisson_average_pip(n_env);
  std::vector<Entropy> hbar;
  for (int k = 0; k <= n_env; ++k) hbar.push_back(erlang_mean_entropy(k, p0));
  PipCurve curve{n_env, Provenance::quadrature, {}};
  for (int m = 0; m <= n_env; ++m) {
    const Entropy mi = hbar[static_cast<std::size_t>(n_env)] + hbar[static_cast<std::size_t>(m)] -
                       hbar[static_cast<std::size_t>(n_env - m)];
    curve.points.push_back({m, mi.in_bits(), {}});
  }
  return curve;
}

std::vector<OutputFile> figure_outputs(const std::string& id, const Options& opt, Params& params) {
  std::vector<OutputFile> files;
  if (id == "fig2") {
    params = apply_overrides({{"n_min", "2"}, {"n_max", "9"}, {"samples", "500"}, {"subset_budget", "10000"}},
                             opt.params);
    if (opt.samples) params["samples"] = std::to_string(*opt.samples);
    const int lo = parse_count(params["n_min"], "n_min");
    const int hi = parse_count(params["n_max"], "n_max");
    const int samples = parse_count(params["samples"], "samples");
    const int budget = parse_count(params["subset_budget"], "subset_budget");
    if (lo < 1 || hi < lo) throw UsageError("need 1 <= n_min <= n_max");
    if (hi + 1 > max_register_qubits()) throw UsageError("n_max must be at most " + std::to_string(max_register_qubits() - 1));
    if (samples < 1 || budget < 1) throw UsageError("samples and subset_budget must be >= 1");
    for (int n = lo; n <= hi; ++n) {
      files.push_back({"fig2_N" + std::to_string(n) + "_analytic.csv", pip_csv(haar_average_pip(n))});
      const HaarSampling s{samples, curve_seed(opt.seed, n), static_cast<std::uint64_t>(budget), opt.threads};
      files.push_back({"fig2_N" + std::to_string(n) + "_sampled.csv", pip_csv(sampled_average_pip(n, s))});
    }
  } else if (id == "fig3") {
    params = apply_overrides({{"n", "32"}, {"d_s", "2,8,32,128"}}, opt.params);
    const int n = parse_count(params["n"], "n");
    for (double d_s : parse_reals(params["d_s"], "d_s"))
      files.push_back({"fig3_dS" + number_tag(d_s) + ".csv", pip_csv(unimodal_pip(n, d_s / n, opt.p0))});
  } else if (id == "fig4") {
    params = apply_overrides({{"n", "32"}}, opt.params);
    const int n = parse_count(params["n"], "n");
    files.push_back({"fig4_bimodal_nu16_d1.5.csv", pip_csv(bimodal_average_pip(n, 16, 1.5, opt.p0))});
    files.push_back({"fig4_bimodal_nu6_d3.csv", pip_csv(bimodal_average_pip(n, 6, 3.0, opt.p0))});
    files.push_back({"fig4_uniform_d0.75.csv", pip_csv(unimodal_pip(n, 0.75, opt.p0))});
    files.push_back({"fig4_uniform_d0.5625.csv", pip_csv(unimodal_pip(n, 0.5625, opt.p0))});
  } else if (id == "fig5") {
    params = apply_overrides({{"n", "4,8,16,32"}, {"d", "1"}}, opt.params);
    const double d = parse_real(params["d"], "d");
    for (int n : parse_counts(params["n"], "n")) {
      files.push_back({"fig5_poisson_N" + std::to_string(n) + ".csv", pip_csv(erlang_curve(n, opt.p0), true)});
      files.push_back({"fig5_unimodal_N" + std::to_string(n) + ".csv", pip_csv(unimodal_pip(n, d, opt.p0), true)});
    }
  } else if (id == "fig6") {
    params = apply_overrides({{"n", "8,9,12,16,64"}, {"n_useful", "8"}, {"d0", "inf"}}, opt.params);
    const int n_useful = parse_count(params["n_useful"], "n_useful");
    const double d0 = parse_real(params["d0"], "d0");
    for (int n : parse_counts(params["n"], "n"))
      files.push_back({"fig6_N" + std::to_string(n) + ".csv", pip_csv(bimodal_average_pip(n, n_useful, d0, opt.p0))});
  } else {
    throw UsageError("unknown figure '" + id + "' (valid: fig2, fig3, fig4, fig5, fig6)");
  }
  return files;
}

PipCurve pip_curve(const std::string& kind, const std::string& mode, const Options& opt, Params& params,
                   std::optional<int> n, std::optional<double> d0, std::optional<int> n_useful,
                   const std::string& d_list, std::uint64_t budget) {
  const bool exact = mode == "exact";
  const auto need_n = [&] {
    if (!n) throw UsageError("--n is required for kind=" + kind);
    params["n"] = std::to_string(*n);
    return *n;
  };
  const auto need_d0 = [&] {
    if (!d0) throw UsageError("--d0 is required for kind=" + kind);
    params["d0"] = format_number(*d0);
    return *d0;
  };
  if (kind != "empirical" && !d_list.empty()) throw UsageError("--d-list only applies to kind=empirical");

  if (kind == "haar") {
    if (opt.p0 != 0.5) throw UsageError("kind=haar has no --p0");
    const int n_env = need_n();
    if (n_env < 1 || n_env + 1 > max_register_qubits())
      throw UsageError("kind=haar needs 1 <= n <= " + std::to_string(max_register_qubits() - 1));
    if (exact) return haar_average_pip(n_env);
    const int samples = opt.samples.value_or(500);
    params["samples"] = std::to_string(samples);
    return sampled_average_pip(n_env, {samples, opt.seed, budget, opt.threads});
  }
  if (!exact && kind != "empirical") throw UsageError("--mode montecarlo applies to kind=haar and kind=empirical");
  if (kind == "unimodal") {
    const int n_env = need_n();
    return unimodal_pip(n_env, need_d0(), opt.p0);
  }
  if (kind == "bimodal") {
    const int n_env = need_n();
    if (!n_useful) throw UsageError("--n-useful is required for kind=bimodal");
    params["n_useful"] = std::to_string(*n_useful);
    return bimodal_average_pip(n_env, *n_useful, need_d0(), opt.p0);
  }
  if (kind == "poisson") {
    const int n_env = need_n();
    if (n_env < 1) throw UsageError("kind=poisson needs n >= 1");
    return erlang_curve(n_env, opt.p0);
  }
  if (kind == "empirical") {
    if (d_list.empty()) throw UsageError("--d-list is required for kind=empirical");
    params["d_list"] = d_list;
    const DecoherenceProfile profile(opt.p0, parse_reals(d_list, "--d-list"));
    if (exact) return empirical_average_pip(profile, ExactAveraging{opt.threads});
    const int samples = opt.samples.value_or(10'000);
    params["samples"] = std::to_string(samples);
    return empirical_average_pip(profile, MonteCarloAveraging{samples, opt.seed, budget, opt.threads});
  }
  throw UsageError("unknown kind '" + kind + "'");
}

DecoherenceProfile profile_from_dist(const std::string& spec, double p0) {
  const auto fields = split(spec, ':');
  if (fields.size() == 3 && fields[0] == "unimodal") {
    const int n = parse_count(fields[1], "--dist");
    return DecoherenceProfile(p0, std::vector<double>(static_cast<std::size_t>(n), parse_real(fields[2], "--dist")));
  }
  if (fields.size() == 4 && fields[0] == "bimodal") {
    const int n = parse_count(fields[1], "--dist");
    const int n_useful = parse_count(fields[2], "--dist");
    if (n_useful > n) throw UsageError("--dist: n_useful exceeds N");
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n_useful; ++i) d[static_cast<std::size_t>(i)] = parse_real(fields[3], "--dist");
    return DecoherenceProfile(p0, d);
  }
  throw UsageError("--dist expects unimodal:N:d0 or bimodal:N:n_useful:d0");
}

nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return std::stod(format_number(v));
}

std::string redundancy_json(const RedundancyReport& r, double p0, int n_env) {
  nlohmann::ordered_json j;
  j["n_env"] = n_env;
  j["p0"] = json_number(p0);
  j["delta"] = json_number(r.delta);
  j["d_r"] = json_number(r.d_r);
  j["r_infdiv"] = json_number(r.r_infdiv);
  j["r_partition"] = r.r_partition;
  j["redundancy"] = r.redundancy();
  auto parts = nlohmann::ordered_json::array();
  for (EnvMask mask : r.parts) {
    auto part = nlohmann::ordered_json::array();
    for (int i = 0; i < n_env; ++i)
      if ((mask >> i) & 1U) part.push_back(i + 1);
    parts.push_back(part);
  }
  j["parts"] = parts;
  return j.dump(2) + "\n";
}

std::string joined_command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

fs::path env_out_dir() {
  const char* dir = std::getenv(kOutDirEnv);
  return dir && *dir ? fs::path(dir) : fs::path();
}

fs::path resolve_file(const std::string& out) {
  fs::path p(out);
  const fs::path dir = env_out_dir();
  if (!dir.empty() && p.is_relative()) p = dir / p;
  return p;
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
}

// Write a single result to --out (plus manifest) or stdout.
void emit(const std::string& out, const std::string& contents, RunManifest& manifest,
          std::chrono::steady_clock::time_point start) {
  if (out.empty() || out == "-") {
    std::cout << contents;
    return;
  }
  const fs::path path = resolve_file(out);
  ensure_dir(path.parent_path());
  write_atomic(path, contents);
  manifest.outputs.push_back(path.filename().string());
  manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_atomic(path.string() + ".manifest.json", manifest.to_json());
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--seed", opt.seed, "RNG seed");
  cmd->add_option("--samples", opt.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", opt.threads, "worker threads (0: all cores)");
  cmd->add_option("--p0", opt.p0, "base purity of the system, in [1/2, 1]")->check(CLI::Range(0.5, 1.0));
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Quantum Darwinism partial-information plots and redundancy"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options opt;
  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "reproduce the data behind one figure");
  figure->add_option("id", figure_id, "fig2 | fig3 | fig4 | fig5 | fig6")->required();
  figure->add_option("--out", opt.out, "output directory");
  figure->add_option("--param", opt.params, "override a default, key=value (repeatable)");
  add_common(figure, opt);

  std::string kind, mode = "exact", pip_dlist;
  std::optional<int> n, n_useful;
  std::string d0_text;
  std::uint64_t budget = 10'000;
  auto* pip = app.add_subcommand("pip", "compute one averaged partial-information plot");
  pip->add_option("--kind", kind, "haar | unimodal | bimodal | poisson | empirical")
      ->required()
      ->check(CLI::IsMember({"haar", "unimodal", "bimodal", "poisson", "empirical"}));
  pip->add_option("--mode", mode, "exact | montecarlo")->check(CLI::IsMember({"exact", "montecarlo"}));
  pip->add_option("--n", n, "number of environments")->check(CLI::NonNegativeNumber);
  pip->add_option("--n-useful", n_useful, "useful environments (bimodal)")->check(CLI::NonNegativeNumber);
  pip->add_option("--d0", d0_text, "decoherence factor per environment (inf allowed)");
  pip->add_option("--d-list", pip_dlist, "comma-separated factors (empirical)");
  pip->add_option("--subset-budget", budget, "enumerate subsets up to this count");
  pip->add_option("--out", opt.out, "CSV path (default: stdout)");
  add_common(pip, opt);

  std::string red_dlist, dist;
  double delta = 0.1;
  auto* red = app.add_subcommand("redundancy", "redundancy of a decoherence profile");
  auto* dl = red->add_option("--d-list", red_dlist, "comma-separated factors (inf allowed)");
  auto* ds = red->add_option("--dist", dist, "unimodal:N:d0 or bimodal:N:n_useful:d0");
  dl->excludes(ds);
  red->add_option("--delta", delta, "information deficit, in (0, 1)");
  red->add_option("--out", opt.out, "JSON path (default: stdout)");
  add_common(red, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.command_line = joined_command_line(argc, argv);
  manifest.seed = opt.seed;
  try {
    Params params;
    if (*figure) {
      params = {};
      std::vector<OutputFile> files = figure_outputs(figure_id, opt, params);
      fs::path dir = opt.out.empty() ? env_out_dir() : fs::path(opt.out);
      if (dir.empty()) dir = ".";
      ensure_dir(dir);
      for (const auto& f : files) {
        write_atomic(dir / f.name, f.contents);
        manifest.outputs.push_back(f.name);
      }
      params["figure"] = figure_id;
      params["p0"] = format_number(opt.p0);
      manifest.parameters = params;
      manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_atomic(dir / (figure_id + ".manifest.json"), manifest.to_json());
    } else if (*pip) {
      std::optional<double> d0;
      if (!d0_text.empty()) d0 = parse_real(d0_text, "--d0");
      const PipCurve curve = pip_curve(kind, mode, opt, params, n, d0, n_useful, pip_dlist, budget);
      params["kind"] = kind;
      params["mode"] = mode;
      params["p0"] = format_number(opt.p0);
      params["provenance"] = std::string(to_string(curve.provenance));
      manifest.parameters = params;
      emit(opt.out, pip_csv(curve), manifest, start);
    } else {
      if (red_dlist.empty() == dist.empty()) throw UsageError("give exactly one of --d-list and --dist");
      if (!(delta > 0.0 && delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
      const DecoherenceProfile profile = red_dlist.empty() ? profile_from_dist(dist, opt.p0)
                                                           : DecoherenceProfile(opt.p0, parse_reals(red_dlist, "--d-list"));
      if (profile.n_env() < 1) throw UsageError("need at least one environment");
      const RedundancyReport report = redundancy_partition(profile, delta);
      params = {{"delta", format_number(delta)}, {"p0", format_number(opt.p0)}};
      params[red_dlist.empty() ? "dist" : "d_list"] = red_dlist.empty() ? dist : red_dlist;
      manifest.parameters = params;
      emit(opt.out, redundancy_json(report, opt.p0, profile.n_env()), manifest, start);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qdarwin::cli
