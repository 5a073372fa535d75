/*
 * Copyright 2026 The torlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line runner for the verification suites. Uses the C API only.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "torlab/torlab.h"

namespace {

struct SubcommandSpec {
  const char* name;
  torlab_suite suite;
  const char* help;
};

constexpr SubcommandSpec kSubcommands[] = {
    {"rotation", TORLAB_SUITE_ROTATION, "Rotation vector estimates against the 2/n bound"},
    {"chain", TORLAB_SUITE_CHAIN, "Chain transitivity on the box graph and weak transitivity pairs"},
    {"two-jump", TORLAB_SUITE_TWO_JUMP, "Pseudo-orbits with at most two jumps"},
    {"essential", TORLAB_SUITE_ESSENTIAL, "Essentiality, intersections and capture diameters of box domains"},
    {"perturb", TORLAB_SUITE_PERTURB, "Return perturbations of the skew example"},
    {"nonwandering", TORLAB_SUITE_NONWANDERING, "Finite-horizon nonwandering approximation"},
    {"all", TORLAB_SUITE_ALL, "Every suite in one run"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torlab: numerical experiments on torus homeomorphisms"};
  app.set_version_flag("--version", torlab_version());
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  int threads = 0;
  bool quiet = false;
  std::vector<std::pair<CLI::App*, torlab_suite>> subs;
  for (const SubcommandSpec& spec : kSubcommands) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--out", out_dir, "Output directory (overrides TORLAB_OUT and the configuration)");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));
    sub->add_flag("--quiet", quiet, "Print only the final status line");
    subs.emplace_back(sub, spec.suite);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  torlab_run_options options{};
  for (const auto& [sub, suite] : subs) {
    if (sub->parsed()) {
      options.suite = suite;
      options.has_seed = sub->count("--seed") > 0 ? 1 : 0;
    }
  }
  options.config_path = config_path.empty() ? nullptr : config_path.c_str();
  options.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
  options.seed = seed;
  options.threads = threads;

  int exit_code = 0;
  std::string summary(1 << 16, '\0');
  std::string dir(4096, '\0');
  const torlab_status st =
      torlab_run_experiment(&options, &exit_code, summary.data(), summary.size(), dir.data(), dir.size());
  if (st != TORLAB_OK) {
    std::fprintf(stderr, "torlab: %s: %s\n", torlab_status_name(st), torlab_last_error());
    return 4;
  }
  summary.resize(summary.find('\0'));
  dir.resize(dir.find('\0'));
  if (exit_code == 3) {
    std::fprintf(stderr, "torlab: invalid configuration: %s\n", summary.c_str());
    return 3;
  }
  if (!quiet) std::fputs(summary.c_str(), stdout);
  static const char* const kStatus[] = {"pass", "fail", "inconclusive"};
  std::printf("status: %s (report in %s/report.json)\n", kStatus[exit_code], dir.c_str());
  return exit_code;
}
