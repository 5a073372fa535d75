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

// Experiment configuration, map construction from configuration, and the
// verification suites behind the command-line runner.

#ifndef TORLAB_EXPERIMENT_HPP
#define TORLAB_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torlab/chain.hpp"
#include "torlab/circle.hpp"
#include "torlab/torus.hpp"

namespace torlab {

inline constexpr const char* kToolVersion = "1.0.0";
// Overrides the configured output directory; --out overrides this in turn.
inline constexpr const char* kOutputEnvVar = "TORLAB_OUT";

enum class MapKind { kRigid, kDenjoyProduct, kSkewExample, kSkewPerturbed };

const char* map_kind_name(MapKind kind);

// A rotation number given either exactly as a quadratic irrational or as a
// plain float (rigid maps only).
struct RotationValue {
  std::optional<QuadraticIrrational> exact;
  double value = 0.0;
};

struct MapConfig {
  MapKind kind = MapKind::kSkewExample;
  RotationValue rotation_1{QuadraticIrrational::golden(), 0.0};
  RotationValue rotation_2{QuadraticIrrational::silver(), 0.0};
  double total_gap = 0.5;
  double exponent = 4.0;
  int truncation = 2000;
  double amplitude = 0.1;
  double decay = 0.5;
  // skew-perturbed: x = (H1(perturb_u), perturb_t)
  double perturb_u = 0.3;
  double perturb_t = 0.5;
  double perturb_epsilon = 0.05;
  double perturb_delta = 0.1;
};

struct RotationSuiteConfig {
  std::vector<std::int64_t> iterations{100, 10'000, 1'000'000};
  int starts = 4;
  std::optional<double> tolerance;  // added to the 2/n bound
};

struct ChainSuiteConfig {
  int grid = 128;
  std::optional<double> epsilon;  // default 2 / grid
  int trials = 20;
  int weak_pairs = 2;
  double weak_radius = 0.05;
  int weak_grid = 128;
  std::int64_t weak_horizon = 100'000;
  bool export_edges = false;
};

struct TwoJumpSuiteConfig {
  int pairs = 10;
  double epsilon = 0.05;
  TwoJumpBudgets budgets;
};

struct EssentialSuiteConfig {
  int grid = 64;
  int random_pairs = 1000;
  int tree_seeds = 10;
  double cross_width = 0.25;
  int path_trials = 100;
};

struct PerturbSuiteConfig {
  int points = 3;
  double epsilon = 0.05;
  double delta = 0.1;
  int samples = 1000;
  int match_samples = 100;
  int sup_samples = 10'000;
};

struct NonwanderingSuiteConfig {
  int grid = 64;
  int horizon = 10'000;
};

struct ExperimentConfig {
  MapConfig map;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output_dir = "torlab-out";
  RotationSuiteConfig rotation;
  ChainSuiteConfig chain;
  TwoJumpSuiteConfig two_jump;
  EssentialSuiteConfig essential;
  PerturbSuiteConfig perturb;
  NonwanderingSuiteConfig nonwandering;
  std::string echo;  // canonical JSON of the effective configuration
};

// Strict JSON parsing: unknown keys, wrong types and out-of-range values
// raise ErrorCode::kConfig.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
ExperimentConfig default_config();
// Re-renders `echo` after programmatic changes.
void refresh_echo(ExperimentConfig& config);

struct BuiltMap {
  SkewProduct f = SkewProduct::rigid_translation(0.0, 0.0);
  MapKind kind = MapKind::kRigid;
  double rho_1 = 0.0;
  double rho_2 = 0.0;
  bool non_resonant = false;
  std::string resonance_note;
  std::optional<DenjoyMap> g1;
  std::optional<DenjoyMap> g2;
  std::optional<ReturnPerturbation> perturbation;
  TorusPoint perturb_point;
};

BuiltMap build_map(const MapConfig& config);

enum class Suite { kRotation, kChain, kTwoJump, kEssential, kPerturb, kNonwandering, kAll };

const char* suite_name(Suite s);
std::optional<Suite> parse_suite(const std::string& name);

struct RunOptions {
  Suite suite = Suite::kAll;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 1 fail, 2 inconclusive, 3 invalid config
  std::string status;
  std::string output_dir;
  std::string summary;  // one line per check
};

// Output directory precedence: explicit option, then the environment
// variable, then the configuration.
std::string resolve_output_dir(const std::optional<std::string>& option, const ExperimentConfig& config);

// Runs the suite under an already validated configuration and writes
// report.json, timings.json and the CSV/text artifacts.
RunOutcome run_suite(Suite suite, const ExperimentConfig& config, const std::string& out_dir);

// Loads the configuration, applies overrides and runs. Configuration errors
// produce exit code 3 rather than an exception.
RunOutcome run_experiment(const RunOptions& options);

}  // namespace torlab

#endif  // TORLAB_EXPERIMENT_HPP
