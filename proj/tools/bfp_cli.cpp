#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bfp/config.h"

int main(int argc, char** argv) {
  CLI::App app{"Truncated reduced bi-free product simulator and verification harness"};
  std::string config_path, out_path;
  std::optional<std::size_t> truncation, word_len;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> checks;
  bool no_timing = false;

  app.add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--truncation", truncation, "Override the truncation length L");
  app.add_option("--word-len", word_len, "Override word_len_max");
  app.add_option("--tol", tol, "Override eq_tol");
  app.add_option("--check", checks, "Run only this check (repeatable)");
  app.add_option("--out", out_path, "Write the report to this file instead of stdout");
  app.add_option("--seed", seed, "Override the seed for sampled checks");
  app.add_flag("--no-timing", no_timing, "Omit the timing block from the report");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto parsed = bfp::parse_config(buf.str());
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
    return 2;
  }
  bfp::ExperimentConfig cfg = std::move(*parsed.config);
  if (truncation) cfg.truncation = *truncation;
  if (word_len) cfg.word_len_max = *word_len;
  if (tol) {
    if (*tol <= 0.0) {
      std::cerr << "config error: --tol must be positive\n";
      return 2;
    }
    cfg.tol.eq_tol = *tol;
  }
  if (seed) cfg.seed = *seed;
  if (!checks.empty()) {
    for (const auto& c : checks) {
      const auto& known = bfp::known_checks();
      if (std::find(known.begin(), known.end(), c) == known.end()) {
        std::cerr << "config error: unknown check '" << c << "'\n";
        return 2;
      }
    }
    cfg.checks = checks;
    for (auto it = cfg.expected.begin(); it != cfg.expected.end();) {
      if (std::find(checks.begin(), checks.end(), it.key()) == checks.end()) {
        it = cfg.expected.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";

  const auto report = bfp::run(cfg);
  const std::string text = bfp::report_to_json(report, !no_timing);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << text;
  }
  for (const auto& m : report.mismatches) std::cerr << "expectation mismatch: " << m << "\n";
  return report.ok() ? 0 : 1;
}
