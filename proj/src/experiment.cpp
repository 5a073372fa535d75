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

#include "torlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "torlab/covering.hpp"
#include "torlab/error.hpp"

namespace torlab {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* map_kind_name(MapKind kind) {
  switch (kind) {
    case MapKind::kRigid: return "rigid";
    case MapKind::kDenjoyProduct: return "denjoy-product";
    case MapKind::kSkewExample: return "skew-example";
    case MapKind::kSkewPerturbed: return "skew-perturbed";
  }
  return "unknown";
}

const char* suite_name(Suite s) {
  switch (s) {
    case Suite::kRotation: return "rotation";
    case Suite::kChain: return "chain";
    case Suite::kTwoJump: return "two-jump";
    case Suite::kEssential: return "essential";
    case Suite::kPerturb: return "perturb";
    case Suite::kNonwandering: return "nonwandering";
    case Suite::kAll: return "all";
  }
  return "unknown";
}

std::optional<Suite> parse_suite(const std::string& name) {
  for (Suite s : {Suite::kRotation, Suite::kChain, Suite::kTwoJump, Suite::kEssential, Suite::kPerturb,
                  Suite::kNonwandering, Suite::kAll}) {
    if (name == suite_name(s)) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::kConfig, "config: " + where + ": " + what);
}

// One JSON object with a fixed key set.
class Section {
 public:
  Section(const json& j, std::string where, std::initializer_list<const char*> keys)
      : j_(j), where_(std::move(where)) {
    if (!j.is_object()) config_error(where_, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : j.items()) {
      if (!allowed.count(item.key())) config_error(where_, "unknown key '" + item.key() + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const { return j_.at(key); }
  std::string path(const char* key) const { return where_ + "." + key; }

  void read(const char* key, int& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) config_error(path(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < -2147483647LL || x > 2147483647LL) config_error(path(key), "integer out of range");
    out = static_cast<int>(x);
  }
  void read(const char* key, std::int64_t& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) config_error(path(key), "expected an integer");
    out = v.get<std::int64_t>();
  }
  void read(const char* key, std::uint64_t& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      config_error(path(key), "expected a non-negative integer");
    }
    out = v.get<std::uint64_t>();
  }
  void read(const char* key, double& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) config_error(path(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) config_error(path(key), "expected a finite number");
  }
  void read(const char* key, std::optional<double>& out) const {
    if (!has(key)) return;
    if (j_.at(key).is_null()) {
      out.reset();
      return;
    }
    double v = 0.0;
    read(key, v);
    out = v;
  }
  void read(const char* key, bool& out) const {
    if (!has(key)) return;
    if (!j_.at(key).is_boolean()) config_error(path(key), "expected a boolean");
    out = j_.at(key).get<bool>();
  }
  void read(const char* key, std::string& out) const {
    if (!has(key)) return;
    if (!j_.at(key).is_string()) config_error(path(key), "expected a string");
    out = j_.at(key).get<std::string>();
  }
  void read(const char* key, std::vector<std::int64_t>& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array() || v.empty()) config_error(path(key), "expected a non-empty integer array");
    out.clear();
    for (const json& e : v) {
      if (!e.is_number_integer()) config_error(path(key), "expected a non-empty integer array");
      out.push_back(e.get<std::int64_t>());
    }
  }

 private:
  const json& j_;
  std::string where_;
};

void check(bool ok, const std::string& where, const std::string& what) {
  if (!ok) config_error(where, what);
}

RotationValue parse_rotation(const json& v, const std::string& where) {
  RotationValue r;
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    if (name == "golden") {
      r.exact = QuadraticIrrational::golden();
    } else if (name == "silver") {
      r.exact = QuadraticIrrational::silver();
    } else {
      config_error(where, "unknown rotation name '" + name + "' (golden, silver)");
    }
  } else if (v.is_object()) {
    Section s(v, where, {"a", "b", "c", "d"});
    QuadraticIrrational q;
    std::int64_t a = 0, b = 1, c = 2, d = 1;
    s.read("a", a);
    s.read("b", b);
    s.read("c", c);
    s.read("d", d);
    check(c >= 0 && d != 0, where, "need c >= 0 and d != 0");
    q = {a, b, c, d};
    r.exact = q;
  } else if (v.is_number()) {
    r.value = v.get<double>();
    check(std::isfinite(r.value), where, "expected a finite number");
  } else {
    config_error(where, "expected a name, a quadratic irrational object or a number");
  }
  if (r.exact) {
    const long double x = r.exact->value();
    r.value = static_cast<double>(x - std::floor(x));
  } else {
    r.value -= std::floor(r.value);
  }
  return r;
}

json rotation_to_json(const RotationValue& r) {
  if (r.exact) return json{{"a", r.exact->a}, {"b", r.exact->b}, {"c", r.exact->c}, {"d", r.exact->d}};
  return r.value;
}

void parse_map(const json& j, MapConfig& m) {
  Section s(j, "map",
            {"kind", "rotation_1", "rotation_2", "total_gap", "exponent", "truncation", "amplitude", "decay",
             "perturb_u", "perturb_t", "perturb_epsilon", "perturb_delta"});
  std::string kind = map_kind_name(m.kind);
  s.read("kind", kind);
  bool known = false;
  for (MapKind k : {MapKind::kRigid, MapKind::kDenjoyProduct, MapKind::kSkewExample, MapKind::kSkewPerturbed}) {
    if (kind == map_kind_name(k)) {
      m.kind = k;
      known = true;
    }
  }
  check(known, "map.kind", "unknown map kind '" + kind + "'");
  if (s.has("rotation_1")) m.rotation_1 = parse_rotation(s.at("rotation_1"), "map.rotation_1");
  if (s.has("rotation_2")) m.rotation_2 = parse_rotation(s.at("rotation_2"), "map.rotation_2");
  s.read("total_gap", m.total_gap);
  s.read("exponent", m.exponent);
  s.read("truncation", m.truncation);
  s.read("amplitude", m.amplitude);
  s.read("decay", m.decay);
  s.read("perturb_u", m.perturb_u);
  s.read("perturb_t", m.perturb_t);
  s.read("perturb_epsilon", m.perturb_epsilon);
  s.read("perturb_delta", m.perturb_delta);
  const bool denjoy = m.kind != MapKind::kRigid;
  if (denjoy) {
    check(m.rotation_1.exact && m.rotation_2.exact, "map", "Denjoy maps need exact quadratic irrational rotations");
    check(m.total_gap > 0.0 && m.total_gap < 1.0, "map.total_gap", "must lie in (0,1)");
    check(m.exponent > 1.0, "map.exponent", "must exceed 1");
    check(m.truncation >= 1 && m.truncation <= 1'000'000, "map.truncation", "must lie in [1, 1e6]");
  }
  check(m.amplitude >= 0.0 && m.amplitude < 1.0, "map.amplitude", "must lie in [0,1)");
  check(m.decay >= 0.0 && m.decay < 1.0, "map.decay", "must lie in [0,1)");
  check(m.perturb_u >= 0.0 && m.perturb_u < 1.0, "map.perturb_u", "must lie in [0,1)");
  check(m.perturb_epsilon > 0.0 && m.perturb_epsilon < 0.5, "map.perturb_epsilon", "must lie in (0,0.5)");
  check(m.perturb_delta > 0.0, "map.perturb_delta", "must be positive");
}

json to_json(const ExperimentConfig& c) {
  json map{{"kind", map_kind_name(c.map.kind)},
           {"rotation_1", rotation_to_json(c.map.rotation_1)},
           {"rotation_2", rotation_to_json(c.map.rotation_2)},
           {"total_gap", c.map.total_gap},
           {"exponent", c.map.exponent},
           {"truncation", c.map.truncation},
           {"amplitude", c.map.amplitude},
           {"decay", c.map.decay},
           {"perturb_u", c.map.perturb_u},
           {"perturb_t", c.map.perturb_t},
           {"perturb_epsilon", c.map.perturb_epsilon},
           {"perturb_delta", c.map.perturb_delta}};
  json rotation{{"iterations", c.rotation.iterations}, {"starts", c.rotation.starts}};
  rotation["tolerance"] = c.rotation.tolerance ? json(*c.rotation.tolerance) : json(nullptr);
  json chain{{"grid", c.chain.grid},
             {"trials", c.chain.trials},
             {"weak_pairs", c.chain.weak_pairs},
             {"weak_radius", c.chain.weak_radius},
             {"weak_grid", c.chain.weak_grid},
             {"weak_horizon", c.chain.weak_horizon},
             {"export_edges", c.chain.export_edges}};
  chain["epsilon"] = c.chain.epsilon ? json(*c.chain.epsilon) : json(nullptr);
  const TwoJumpBudgets& b = c.two_jump.budgets;
  json two_jump{{"pairs", c.two_jump.pairs},
                {"epsilon", c.two_jump.epsilon},
                {"omega_grid", b.omega_grid},
                {"omega_horizon", b.omega_horizon},
                {"n0_cap", b.n0_cap},
                {"n0_attempts", b.n0_attempts},
                {"orbit_cap", b.orbit_cap},
                {"min_level", b.min_level},
                {"max_level", b.max_level},
                {"evals_per_level", b.evals_per_level}};
  json essential{{"grid", c.essential.grid},
                 {"random_pairs", c.essential.random_pairs},
                 {"tree_seeds", c.essential.tree_seeds},
                 {"cross_width", c.essential.cross_width},
                 {"path_trials", c.essential.path_trials}};
  json perturb{{"points", c.perturb.points},
               {"epsilon", c.perturb.epsilon},
               {"delta", c.perturb.delta},
               {"samples", c.perturb.samples},
               {"match_samples", c.perturb.match_samples},
               {"sup_samples", c.perturb.sup_samples}};
  json nonwandering{{"grid", c.nonwandering.grid}, {"horizon", c.nonwandering.horizon}};
  return json{{"map", map},
              {"seed", c.seed},
              {"threads", c.threads},
              {"output_dir", c.output_dir},
              {"rotation", rotation},
              {"chain", chain},
              {"two_jump", two_jump},
              {"essential", essential},
              {"perturb", perturb},
              {"nonwandering", nonwandering}};
}

void validate(const ExperimentConfig& c) {
  check(c.threads >= 1 && c.threads <= 256, "threads", "must lie in [1, 256]");
  for (std::int64_t n : c.rotation.iterations) {
    check(n >= 1 && n <= 100'000'000, "rotation.iterations", "entries must lie in [1, 1e8]");
  }
  check(c.rotation.starts >= 1 && c.rotation.starts <= 1000, "rotation.starts", "must lie in [1, 1000]");
  check(!c.rotation.tolerance || *c.rotation.tolerance >= 0.0, "rotation.tolerance", "must be >= 0");
  check(c.chain.grid >= 2 && c.chain.grid <= 2048, "chain.grid", "must lie in [2, 2048]");
  const double eps = c.chain.epsilon.value_or(2.0 / c.chain.grid);
  check(eps * (1.0 + 1e-12) >= std::sqrt(2.0) / c.chain.grid && eps < 0.5, "chain.epsilon",
        "must lie in [sqrt(2)/grid, 0.5)");
  check(c.chain.trials >= 0, "chain.trials", "must be >= 0");
  check(c.chain.weak_pairs >= 0, "chain.weak_pairs", "must be >= 0");
  check(c.chain.weak_radius > 0.0 && c.chain.weak_radius < 0.5, "chain.weak_radius", "must lie in (0, 0.5)");
  check(c.chain.weak_grid >= 2 && c.chain.weak_grid <= 2048, "chain.weak_grid", "must lie in [2, 2048]");
  check(c.chain.weak_horizon >= 1, "chain.weak_horizon", "must be >= 1");
  const TwoJumpBudgets& b = c.two_jump.budgets;
  check(c.two_jump.pairs >= 0, "two_jump.pairs", "must be >= 0");
  check(c.two_jump.epsilon > 0.0 && c.two_jump.epsilon < 0.5, "two_jump.epsilon", "must lie in (0, 0.5)");
  check(b.omega_grid >= 2 && b.omega_grid <= 1024, "two_jump.omega_grid", "must lie in [2, 1024]");
  check(b.omega_horizon >= 1, "two_jump.omega_horizon", "must be >= 1");
  check(b.n0_cap >= 1 && b.n0_attempts >= 1, "two_jump", "n0_cap and n0_attempts must be >= 1");
  check(b.orbit_cap >= 1 && b.orbit_cap <= 1'000'000, "two_jump.orbit_cap", "must lie in [1, 1e6]");
  check(b.min_level >= 1 && b.max_level >= b.min_level && b.max_level <= 6, "two_jump",
        "levels must satisfy 1 <= min_level <= max_level <= 6");
  check(b.evals_per_level >= 1, "two_jump.evals_per_level", "must be >= 1");
  check(c.essential.grid >= 4 && c.essential.grid <= 1024 && c.essential.grid % 2 == 0, "essential.grid",
        "must be even and lie in [4, 1024]");
  check(c.essential.random_pairs >= 0 && c.essential.tree_seeds >= 1 && c.essential.path_trials >= 0,
        "essential", "counts must be non-negative (tree_seeds >= 1)");
  check(c.essential.cross_width > 0.0 && c.essential.cross_width < 1.0, "essential.cross_width",
        "must lie in (0,1)");
  check(c.perturb.points >= 0 && c.perturb.samples >= 2 && c.perturb.match_samples >= 0 &&
            c.perturb.sup_samples >= 1,
        "perturb", "invalid sample counts");
  check(c.perturb.epsilon > 0.0 && c.perturb.epsilon < 0.5, "perturb.epsilon", "must lie in (0, 0.5)");
  check(c.perturb.delta > 0.0, "perturb.delta", "must be positive");
  check(c.nonwandering.grid >= 2 && c.nonwandering.grid <= 1024, "nonwandering.grid", "must lie in [2, 1024]");
  check(c.nonwandering.horizon >= 1, "nonwandering.horizon", "must be >= 1");
}

}  // namespace

void refresh_echo(ExperimentConfig& config) {
  validate(config);
  config.echo = to_json(config).dump(2);
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  refresh_echo(c);
  return c;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("config: malformed JSON: ") + e.what());
  }
  ExperimentConfig c;
  Section top(j, "config",
              {"map", "seed", "threads", "output_dir", "rotation", "chain", "two_jump", "essential", "perturb",
               "nonwandering"});
  if (top.has("map")) parse_map(top.at("map"), c.map);
  top.read("seed", c.seed);
  top.read("threads", c.threads);
  top.read("output_dir", c.output_dir);
  if (top.has("rotation")) {
    Section s(top.at("rotation"), "rotation", {"iterations", "starts", "tolerance"});
    s.read("iterations", c.rotation.iterations);
    s.read("starts", c.rotation.starts);
    s.read("tolerance", c.rotation.tolerance);
  }
  if (top.has("chain")) {
    Section s(top.at("chain"), "chain",
              {"grid", "epsilon", "trials", "weak_pairs", "weak_radius", "weak_grid", "weak_horizon", "export_edges"});
    s.read("grid", c.chain.grid);
    s.read("epsilon", c.chain.epsilon);
    s.read("trials", c.chain.trials);
    s.read("weak_pairs", c.chain.weak_pairs);
    s.read("weak_radius", c.chain.weak_radius);
    s.read("weak_grid", c.chain.weak_grid);
    s.read("weak_horizon", c.chain.weak_horizon);
    s.read("export_edges", c.chain.export_edges);
  }
  if (top.has("two_jump")) {
    Section s(top.at("two_jump"), "two_jump",
              {"pairs", "epsilon", "omega_grid", "omega_horizon", "n0_cap", "n0_attempts", "orbit_cap", "min_level",
               "max_level", "evals_per_level"});
    TwoJumpBudgets& b = c.two_jump.budgets;
    s.read("pairs", c.two_jump.pairs);
    s.read("epsilon", c.two_jump.epsilon);
    s.read("omega_grid", b.omega_grid);
    s.read("omega_horizon", b.omega_horizon);
    s.read("n0_cap", b.n0_cap);
    s.read("n0_attempts", b.n0_attempts);
    s.read("orbit_cap", b.orbit_cap);
    s.read("min_level", b.min_level);
    s.read("max_level", b.max_level);
    s.read("evals_per_level", b.evals_per_level);
  }
  if (top.has("essential")) {
    Section s(top.at("essential"), "essential", {"grid", "random_pairs", "tree_seeds", "cross_width", "path_trials"});
    s.read("grid", c.essential.grid);
    s.read("random_pairs", c.essential.random_pairs);
    s.read("tree_seeds", c.essential.tree_seeds);
    s.read("cross_width", c.essential.cross_width);
    s.read("path_trials", c.essential.path_trials);
  }
  if (top.has("perturb")) {
    Section s(top.at("perturb"), "perturb",
              {"points", "epsilon", "delta", "samples", "match_samples", "sup_samples"});
    s.read("points", c.perturb.points);
    s.read("epsilon", c.perturb.epsilon);
    s.read("delta", c.perturb.delta);
    s.read("samples", c.perturb.samples);
    s.read("match_samples", c.perturb.match_samples);
    s.read("sup_samples", c.perturb.sup_samples);
  }
  if (top.has("nonwandering")) {
    Section s(top.at("nonwandering"), "nonwandering", {"grid", "horizon"});
    s.read("grid", c.nonwandering.grid);
    s.read("horizon", c.nonwandering.horizon);
  }
  refresh_echo(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kConfig, "config: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Maps

namespace {

std::int64_t squarefree_part(std::int64_t c) {
  std::int64_t out = 1;
  for (std::int64_t p = 2; p * p <= c; ++p) {
    int e = 0;
    while (c % p == 0) {
      c /= p;
      ++e;
    }
    if (e % 2 == 1) out *= p;
  }
  return out * c;
}

bool is_irrational(const QuadraticIrrational& q) { return q.b != 0 && squarefree_part(q.c) != 1; }

// Fractional part; exact values take precedence over the stored float.
double rotation_value(const RotationValue& r) {
  if (!r.exact) return r.value - std::floor(r.value);
  const long double x = r.exact->value();
  return static_cast<double>(x - std::floor(x));
}

}  // namespace

BuiltMap build_map(const MapConfig& config) {
  try {
    BuiltMap out;
    out.kind = config.kind;
    out.rho_1 = rotation_value(config.rotation_1);
    out.rho_2 = rotation_value(config.rotation_2);
    if (config.rotation_1.exact && config.rotation_2.exact) {
      const auto& q1 = *config.rotation_1.exact;
      const auto& q2 = *config.rotation_2.exact;
      // (1, x, y) with x in Q(sqrt c1), y in Q(sqrt c2) are independent over Q
      // exactly when both are irrational and the square classes differ.
      out.non_resonant = is_irrational(q1) && is_irrational(q2) && squarefree_part(q1.c) != squarefree_part(q2.c);
      out.resonance_note = out.non_resonant ? "exact: distinct quadratic fields" : "exact: rationally dependent";
    } else {
      const double v[2] = {out.rho_1, out.rho_2};
      const IndependenceReport r = rational_independence_heuristic(v, 100, 1e-10);
      out.non_resonant = !r.suspicious;
      out.resonance_note = out.non_resonant ? "heuristic: no integer relation with coefficients <= 100"
                                            : "heuristic: integer relation found";
    }
    if (config.kind == MapKind::kRigid) {
      out.f = SkewProduct::rigid_translation(out.rho_1, out.rho_2);
      return out;
    }
    const DenjoySpec s1 =
        DenjoySpec::with_total_gap(*config.rotation_1.exact, config.total_gap, config.exponent, config.truncation);
    const DenjoySpec s2 =
        DenjoySpec::with_total_gap(*config.rotation_2.exact, config.total_gap, config.exponent, config.truncation);
    out.g1.emplace(s1);
    out.g2.emplace(s2);
    if (config.kind == MapKind::kDenjoyProduct) {
      out.f = SkewProduct::product(out.g1->lift(), out.g2->lift(), "denjoy-product");
      return out;
    }
    FiberFamily beta = build_example_fiber_family(*out.g1, out.g2->lift(), config.amplitude, config.decay);
    if (config.kind == MapKind::kSkewExample) {
      out.f = SkewProduct(beta, "skew-example");
      return out;
    }
    out.perturb_point = wrap({out.g1->cantor_point(config.perturb_u), config.perturb_t});
    out.perturbation =
        build_return_perturbation(beta, out.perturb_point, config.perturb_epsilon, config.perturb_delta);
    out.f = SkewProduct(out.perturbation->beta, "skew-perturbed");
    return out;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument || e.code() == ErrorCode::kConfig) {
      fail(ErrorCode::kConfig, std::string("config: map: ") + e.what());
    }
    throw;
  }
}

std::string resolve_output_dir(const std::optional<std::string>& option, const ExperimentConfig& config) {
  if (option && !option->empty()) return *option;
  if (const char* env = std::getenv(kOutputEnvVar); env != nullptr && *env != '\0') return env;
  return config.output_dir;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

enum class Status { kPass, kFail, kInconclusive, kSkipped };

const char* status_name(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kInconclusive: return "inconclusive";
    case Status::kSkipped: return "skipped";
  }
  return "unknown";
}

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ojson point_json(TorusPoint p) { return ojson::array({p.s, p.t}); }

struct CheckRecord {
  std::string name;
  Status status = Status::kPass;
  ojson detail;
};

class Context {
 public:
  Context(const ExperimentConfig& config, BuiltMap map, std::string out_dir)
      : config(config), map(std::move(map)), out_dir(std::move(out_dir)) {}

  const ExperimentConfig& config;
  BuiltMap map;
  std::string out_dir;
  std::vector<CheckRecord> checks;
  ojson timings = ojson::object();
  std::vector<std::string> artifacts;
  std::vector<std::string> caveats;

  // Seeds differ per suite so a suite gives the same result alone or in "all".
  std::uint64_t seed_for(std::uint64_t salt) const { return config.seed * 0x9E3779B97F4A7C15ULL + salt; }

  void add(std::string name, Status status, ojson detail) {
    checks.push_back({std::move(name), status, std::move(detail)});
  }

  void write(const std::string& name, const std::string& content) {
    const std::filesystem::path p = std::filesystem::path(out_dir) / name;
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(ErrorCode::kIo, "cannot write " + p.string());
    out << content;
    if (!out) fail(ErrorCode::kIo, "write failed for " + p.string());
    artifacts.push_back(name);
  }

  // Times fn and records failures thrown from it as a check.
  void timed(const std::string& name, const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIo) throw;
      const Status st = e.code() == ErrorCode::kBudgetExhausted ? Status::kInconclusive : Status::kFail;
      add(name + "-error", st, ojson{{"error", error_code_name(e.code())}, {"witness", e.what()}});
    }
    timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

bool is_skew(MapKind k) { return k == MapKind::kSkewExample || k == MapKind::kSkewPerturbed; }

void suite_rotation(Context& ctx) {
  const auto& rc = ctx.config.rotation;
  std::mt19937_64 rng(ctx.seed_for(11));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TorusPoint> starts;
  for (int k = 0; k < rc.starts; ++k) starts.push_back({unit(rng), unit(rng)});
  const double tol = rc.tolerance.value_or(is_skew(ctx.map.kind) ? 2e-3 : 0.0);
  std::string csv = "n,estimate_1,estimate_2,bound\n";
  std::string all_csv = "n,start,estimate_1,estimate_2,bound\n";
  auto iterations = rc.iterations;
  std::sort(iterations.begin(), iterations.end());
  for (std::int64_t n : iterations) {
    std::vector<RotationVectorEstimate> est(starts.size());
    for (std::size_t k = 0; k < starts.size(); ++k) est[k] = rotation_vector(ctx.map.f, starts[k], n);
    double err1 = 0.0, err2 = 0.0, spread = 0.0;
    ojson values = ojson::array();
    for (std::size_t k = 0; k < est.size(); ++k) {
      err1 = std::max(err1, std::fabs(est[k].rho_s - ctx.map.rho_1));
      err2 = std::max(err2, std::fabs(est[k].rho_t - ctx.map.rho_2));
      for (std::size_t q = 0; q < k; ++q) {
        spread = std::max({spread, std::fabs(est[k].rho_s - est[q].rho_s), std::fabs(est[k].rho_t - est[q].rho_t)});
      }
      values.push_back(ojson::array({est[k].rho_s, est[k].rho_t}));
      all_csv += std::to_string(n) + ',' + std::to_string(k) + ',' + real(est[k].rho_s) + ',' + real(est[k].rho_t) +
                 ',' + real(est[k].error_bound) + '\n';
    }
    const double bound = est.front().error_bound;
    csv += std::to_string(n) + ',' + real(est.front().rho_s) + ',' + real(est.front().rho_t) + ',' + real(bound) + '\n';
    const bool ok = err1 <= bound + tol && err2 <= bound + tol && spread <= 2.0 * bound + tol;
    ctx.add("rotation-n" + std::to_string(n), ok ? Status::kPass : Status::kFail,
            ojson{{"n", n},
                  {"bound", bound},
                  {"tolerance", tol},
                  {"expected", ojson::array({ctx.map.rho_1, ctx.map.rho_2})},
                  {"max_error_1", err1},
                  {"max_error_2", err2},
                  {"spread", spread},
                  {"witness", ojson{{"starts", static_cast<int>(starts.size())}, {"estimates", values}}}});
  }
  ctx.write("rotation.csv", csv);
  ctx.write("rotation_starts.csv", all_csv);
}

std::pair<TorusPoint, TorusPoint> minimal_pair(const Context& ctx, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&] {
    const double u = unit(rng);
    const double v = unit(rng);
    if (ctx.map.g1 && ctx.map.g2) return TorusPoint{ctx.map.g1->cantor_point(u), ctx.map.g2->cantor_point(v)};
    return TorusPoint{u, v};
  };
  const TorusPoint p = pick();
  return {p, pick()};
}

void suite_nonwandering_core(Context& ctx, bool with_contract);

void suite_chain(Context& ctx) {
  const auto& cc = ctx.config.chain;
  const double eps = cc.epsilon.value_or(2.0 / cc.grid);
  const TransitionGraph g =
      build_transition_graph(ctx.map.f, cc.grid, eps, EnclosureMode::kOuterBound, 4, ctx.config.threads);
  const ChainReport r = chain_transitivity_report(g, cc.trials, ctx.seed_for(21));
  std::string csv = "from_i,from_j,to_i,to_j,connected,path_length\n";
  const auto m = static_cast<std::uint32_t>(cc.grid);
  ojson failures = ojson::array();
  for (const ChainPairResult& p : r.pairs) {
    csv += std::to_string(p.from / m) + ',' + std::to_string(p.from % m) + ',' + std::to_string(p.to / m) + ',' +
           std::to_string(p.to % m) + ',' + (p.connected ? "1" : "0") + ',' + std::to_string(p.path_length) + '\n';
    if (!p.connected) failures.push_back(ojson::array({p.from, p.to}));
  }
  ctx.write("chain_connectivity.csv", csv);
  if (cc.export_edges) ctx.write("chain_edges.txt", export_edge_list(g));
  Status st = r.connected == r.trials ? Status::kPass : Status::kFail;
  if (!ctx.map.non_resonant) st = Status::kSkipped;
  ctx.add("chain-transitivity", st,
          ojson{{"grid", cc.grid},
                {"epsilon", eps},
                {"edges", r.edge_count},
                {"fiber_margin", r.fiber_margin},
                {"trials", r.trials},
                {"connected", r.connected},
                {"fraction_connected", r.fraction_connected()},
                {"max_path_length", r.max_path_length},
                {"chain_recurrent_boxes", r.chain_recurrent_boxes},
                {"recurrent_components", r.recurrent_components},
                {"single_recurrent_component", r.single_recurrent_component},
                {"non_resonant", ctx.map.non_resonant},
                {"witness", ojson{{"unconnected_pairs", failures}}}});

  suite_nonwandering_core(ctx, false);

  std::mt19937_64 rng(ctx.seed_for(23));
  WeakTransitivityBudgets wb;
  wb.n_max = cc.weak_horizon;
  wb.threads = ctx.config.threads;
  for (int k = 0; k < cc.weak_pairs; ++k) {
    const auto [p, q] = minimal_pair(ctx, rng);
    const BoxDomain u = BoxDomain::ball(cc.weak_grid, p, cc.weak_radius);
    const BoxDomain v = BoxDomain::ball(cc.weak_grid, q, cc.weak_radius);
    const std::string name = "weak-transitivity-" + std::to_string(k);
    try {
      const WeakTransitivityResult w = weak_transitivity_check(ctx.map.f, u, v, wb);
      ojson d{{"center_u", point_json(p)},
              {"center_v", point_json(q)},
              {"radius", cc.weak_radius},
              {"grid", cc.weak_grid},
              {"enclosure_lower_bound", w.enclosure_lower_bound},
              {"least", w.least},
              {"refuted", w.refuted},
              {"unresolved", w.unresolved}};
      if (w.n) {
        d["n"] = *w.n;
        d["witness"] = ojson{{"point", point_json(w.witness)}, {"landing", point_json(w.landing)}};
        ctx.add(name, Status::kPass, d);
      } else {
        d["budget"] = ojson{{"horizon", wb.n_max}};
        ctx.add(name, Status::kInconclusive, d);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPrecondition) throw;
      ctx.add(name, Status::kFail, ojson{{"center_u", point_json(p)}, {"center_v", point_json(q)}, {"witness", e.what()}});
    }
  }
}

void suite_two_jump(Context& ctx) {
  const auto& tc = ctx.config.two_jump;
  TwoJumpBudgets b = tc.budgets;
  b.threads = ctx.config.threads;
  const NonwanderingApprox omega = nonwandering_approx(ctx.map.f, b.omega_grid, b.omega_horizon, b.threads);
  std::mt19937_64 rng(ctx.seed_for(31));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < tc.pairs; ++k) {
    const TorusPoint x{unit(rng), unit(rng)};
    const TorusPoint y{unit(rng), unit(rng)};
    const std::string name = "two-jump-" + std::to_string(k);
    const TwoJumpResult r = two_jump_pseudo_orbit(ctx.map.f, x, y, tc.epsilon, b, &omega);
    ojson d{{"x", point_json(x)},
            {"y", point_json(y)},
            {"epsilon", tc.epsilon},
            {"search", search_status_name(r.status)},
            {"n0", r.n0},
            {"connector_steps", r.connector_steps},
            {"samples", r.samples},
            {"evaluations", r.evaluations},
            {"near_miss", r.near_miss},
            {"level", r.level}};
    if (r.status != SearchStatus::kSuccess) {
      d["budget"] = ojson{{"n0_cap", b.n0_cap},
                          {"orbit_cap", b.orbit_cap},
                          {"max_points", 1 << (2 * b.max_level)},
                          {"evals_per_level", b.evals_per_level}};
      ctx.add(name, ctx.map.non_resonant ? Status::kInconclusive : Status::kSkipped, d);
      continue;
    }
    const std::string file = "po_" + std::to_string(k) + ".txt";
    ctx.write(file, serialize_pseudo_orbit(r.orbit));
    std::ifstream in(std::filesystem::path(ctx.out_dir) / file, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    const PseudoOrbit reloaded = parse_pseudo_orbit(text.str());
    const PseudoOrbitCheck c1 = validate_pseudo_orbit(ctx.map.f, r.orbit);
    const PseudoOrbitCheck c2 = validate_pseudo_orbit(ctx.map.f, reloaded);
    d["length"] = r.orbit.points.size() - 1;
    d["jump_count"] = c1.jump_count;
    d["jumps"] = c1.jumps;
    d["max_step_error"] = c1.max_step_error;
    d["reloaded_valid"] = c2.valid;
    d["witness"] = file;
    const bool ok = c1.valid && c2.valid && c1.jump_count <= 2 && c2.jump_count == c1.jump_count;
    ctx.add(name, ok ? Status::kPass : Status::kFail, d);
  }
}

ojson basis_json(const std::vector<DeckVector>& basis) {
  ojson out = ojson::array();
  for (const DeckVector& v : basis) out.push_back(ojson::array({v.p, v.q}));
  return out;
}

void suite_essential(Context& ctx) {
  const auto& ec = ctx.config.essential;
  const int m = ec.grid;
  ctx.caveats.push_back(
      "box-domain essentiality is that of the open union of grid cells; it can over- or under-resolve a true "
      "domain at scale 1/m");

  struct Canonical {
    std::string name;
    BoxDomain domain;
    Essentiality expected;
    std::vector<DeckVector> basis;
  };
  BoxDomain annulus(m);
  for (int i = 0; i < m / 2; ++i) {
    for (int j = 0; j < m; ++j) annulus.insert(i, j);
  }
  BoxDomain single(m);
  single.insert(m / 3, m / 5);
  const std::vector<Canonical> canon{
      {"full", BoxDomain::full(m), Essentiality::kDoublyEssential, {{1, 0}, {0, 1}}},
      {"annulus", annulus, Essentiality::kSimplyEssential, {{0, 1}}},
      {"single", single, Essentiality::kInessential, {}},
  };
  for (const Canonical& c : canon) {
    const EssentialityResult r = classify_essentiality(c.domain);
    bool stable = classify_essentiality(c.domain.refined()).basis == r.basis &&
                  classify_essentiality(c.domain.translated(3, 5)).basis == r.basis;
    for (int s = 1; s <= ec.tree_seeds; ++s) stable = stable && classify_essentiality(c.domain, s).basis == r.basis;
    const std::string file = "domains/" + c.name + ".txt";
    const std::string text = serialize_domain(c.domain);
    ctx.write(file, text);
    const bool round_trip = parse_domain(text) == c.domain && serialize_domain(parse_domain(text)) == text;
    const bool ok = r.cls == c.expected && r.basis == c.basis && stable && round_trip;
    ctx.add("essential-" + c.name, ok ? Status::kPass : Status::kFail,
            ojson{{"class", essentiality_name(r.cls)},
                  {"expected", essentiality_name(c.expected)},
                  {"basis", basis_json(r.basis)},
                  {"stable_under_refinement_translation_and_tree_seeds", stable},
                  {"round_trip", round_trip},
                  {"witness", file}});
  }

  // Two disjoint annuli: the intersection check must refuse.
  {
    BoxDomain a(m), b(m);
    for (int j = 0; j < m; ++j) {
      a.insert(0, j);
      b.insert(m / 2, j);
    }
    bool refused = false;
    try {
      essential_intersection_check(a, b);
    } catch (const Error& e) {
      refused = e.code() == ErrorCode::kPrecondition;
    }
    ctx.add("essential-refuses-simply-essential", refused ? Status::kPass : Status::kFail,
            ojson{{"refused", refused}, {"witness", "annuli at i=0 and i=m/2"}});
  }

  int intersecting = 0;
  int doubly = 0;
  ojson counterexample = nullptr;
  for (int k = 0; k < ec.random_pairs; ++k) {
    const BoxDomain u = random_doubly_essential(m, ctx.seed_for(41) + 2 * static_cast<std::uint64_t>(k));
    const BoxDomain v = random_doubly_essential(m, ctx.seed_for(41) + 2 * static_cast<std::uint64_t>(k) + 1);
    if (classify_essentiality(u).cls != Essentiality::kDoublyEssential ||
        classify_essentiality(v).cls != Essentiality::kDoublyEssential) {
      if (counterexample.is_null()) counterexample = ojson{{"pair", k}, {"reason", "generator not doubly essential"}};
      continue;
    }
    ++doubly;
    if (essential_intersection_check(u, v)) {
      ++intersecting;
    } else if (counterexample.is_null()) {
      counterexample = ojson{{"pair", k}, {"u", serialize_domain(u)}, {"v", serialize_domain(v)}};
    }
  }
  ctx.add("essential-random-pairs-intersect",
          intersecting == ec.random_pairs ? Status::kPass : Status::kFail,
          ojson{{"pairs", ec.random_pairs}, {"doubly_essential", doubly}, {"intersecting", intersecting},
                {"witness", counterexample}});

  const BoxDomain cross = cross_domain(m, ec.cross_width);
  ctx.write("domains/cross.txt", serialize_domain(cross));
  const double k_cross = compute_capture_diameter(cross);
  const double expected = std::sqrt(2.0) * (1.0 - ec.cross_width);
  const double k_full = compute_capture_diameter(BoxDomain::full(m));
  const BoxDomain bigger = cross.united(random_doubly_essential(m, ctx.seed_for(43)));
  const double k_bigger = compute_capture_diameter(bigger);
  const bool k_ok = std::fabs(k_cross - expected) <= 1.5 / m && k_full == 0.0 && k_bigger <= k_cross;
  ctx.add("capture-diameter-cross", k_ok ? Status::kPass : Status::kFail,
          ojson{{"K", k_cross},
                {"expected", expected},
                {"tolerance", 1.5 / m},
                {"K_full_torus", k_full},
                {"K_enlarged", k_bigger},
                {"witness", "domains/cross.txt"}});

  const BoxDomain random_domain = random_doubly_essential(m, ctx.seed_for(45));
  ctx.write("domains/random.txt", serialize_domain(random_domain));
  const double k_random = compute_capture_diameter(random_domain);
  for (const auto& [label, dom, kval] :
       {std::tuple<std::string, const BoxDomain*, double>{"cross", &cross, k_cross},
        std::tuple<std::string, const BoxDomain*, double>{"random", &random_domain, k_random}}) {
    int met = 0;
    ojson miss = nullptr;
    for (int k = 0; k < ec.path_trials; ++k) {
      const auto path = random_polyline(kval + 0.1, ctx.seed_for(47) + static_cast<std::uint64_t>(k));
      if (lifted_path_meets(*dom, path)) {
        ++met;
      } else if (miss.is_null()) {
        ojson pts = ojson::array();
        for (const TorusPoint& p : path) pts.push_back(point_json(p));
        miss = pts;
      }
    }
    ctx.add("capture-paths-" + label, met == ec.path_trials ? Status::kPass : Status::kFail,
            ojson{{"K", kval}, {"path_diameter", kval + 0.1}, {"paths", ec.path_trials}, {"intersecting", met},
                  {"witness", miss}});
  }
}

void suite_perturb(Context& ctx) {
  const auto& pc = ctx.config.perturb;
  if (!is_skew(ctx.map.kind)) {
    ctx.add("perturb", Status::kSkipped,
            ojson{{"reason", "the perturbation needs a skew map over a Denjoy base"}, {"map", map_kind_name(ctx.map.kind)}});
    return;
  }
  const DenjoyMap& g1 = *ctx.map.g1;
  const FiberFamily beta =
      build_example_fiber_family(g1, ctx.map.g2->lift(), ctx.config.map.amplitude, ctx.config.map.decay);
  std::mt19937_64 rng(ctx.seed_for(51));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TorusPoint> points;
  if (ctx.map.kind == MapKind::kSkewPerturbed) points.push_back(ctx.map.perturb_point);
  while (static_cast<int>(points.size()) < pc.points) points.push_back(wrap({g1.cantor_point(unit(rng)), unit(rng)}));

  for (std::size_t k = 0; k < points.size(); ++k) {
    const TorusPoint x = points[k];
    const std::string name = "perturb-" + std::to_string(k);
    const ReturnPerturbation rp = build_return_perturbation(beta, x, pc.epsilon, pc.delta);
    const SkewProduct fp(rp.beta, "perturbed");
    ReturnCheck rc = verify_return_along(fp, x, pc.epsilon, rp.k, {rp.a, x.t}, {rp.b, x.t}, pc.samples,
                                         ctx.config.threads);
    if (!rc.hit) rc = verify_return(fp, x, pc.epsilon, rp.k, pc.samples, ctx.config.threads);

    double match = 0.0;
    for (int q = 0; q < pc.match_samples; ++q) {
      const double s = g1.cantor_point(unit(rng));
      for (double t : {0.0, 0.25, 0.5, 0.75}) match = std::max(match, std::fabs(beta.eval(s, t) - rp.beta.eval(s, t)));
    }
    std::vector<double> s_samples;
    for (int q = 0; q < pc.sup_samples; ++q) s_samples.push_back((q + 0.5) / pc.sup_samples);
    for (const FiberOverride& o : rp.beta.overrides()) s_samples.push_back(o.center);
    const double sup = fiber_sup_distance(beta, rp.beta, s_samples, 16);
    const double landing_distance = rc.hit ? torus_distance(rc.landing, x) : -1.0;
    const bool ok = rc.hit && match == 0.0 && sup < pc.delta && landing_distance < pc.epsilon;
    ojson d{{"x", point_json(x)},
            {"epsilon", pc.epsilon},
            {"delta", pc.delta},
            {"k", rp.k},
            {"n0", rp.n0},
            {"gap_index", rp.gap_index},
            {"theta", rp.theta},
            {"a", rp.a},
            {"b", rp.b},
            {"overrides", rp.beta.overrides().size()},
            {"minimal_set_mismatch", match},
            {"sup_distance", sup},
            {"samples", rc.samples}};
    if (rc.hit) {
      d["witness"] = ojson{{"point", point_json(rc.witness)}, {"landing", point_json(rc.landing)},
                           {"distance", landing_distance}};
    } else {
      d["witness"] = nullptr;
      d["budget"] = ojson{{"samples", pc.samples}};
    }
    ctx.add(name, ok ? Status::kPass : Status::kFail, d);
  }
}

void suite_nonwandering_core(Context& ctx, bool with_contract) {
  const auto& nc = ctx.config.nonwandering;
  const NonwanderingApprox nw = nonwandering_approx(ctx.map.f, nc.grid, nc.horizon, ctx.config.threads);
  const std::size_t nonreturning = nw.nonreturning_count();
  if (!with_contract) {
    ctx.add("wandering-boxes", Status::kPass,
            ojson{{"grid", nc.grid}, {"horizon", nc.horizon}, {"certified_nonreturning", nonreturning},
                  {"returning", nw.returning_count()}});
    return;
  }
  std::string csv = "i,j,returning,return_time\n";
  const auto m = static_cast<std::uint32_t>(nc.grid);
  for (std::uint32_t b = 0; b < nw.returning.size(); ++b) {
    csv += std::to_string(b / m) + ',' + std::to_string(b % m) + ',' + std::to_string(nw.returning[b]) + ',' +
           std::to_string(nw.return_time[b]) + '\n';
  }
  ctx.write("nonwandering_boxes.csv", csv);
  ctx.write("domains/returning.txt", serialize_domain(nw.returning_domain()));

  const int half_horizon = std::max(1, nc.horizon / 2);
  const NonwanderingApprox half = nonwandering_approx(ctx.map.f, nc.grid, half_horizon, ctx.config.threads);
  const bool monotone = nw.nonreturning_domain().subset_of(half.nonreturning_domain());
  ctx.add("nonwandering-horizon-monotone", monotone ? Status::kPass : Status::kFail,
          ojson{{"horizon", nc.horizon}, {"half_horizon", half_horizon},
                {"certified_nonreturning", nonreturning}, {"certified_at_half", half.nonreturning_count()},
                {"witness", "domains/returning.txt"}});

  ojson d{{"grid", nc.grid}, {"horizon", nc.horizon}, {"certified_nonreturning", nonreturning},
          {"returning", nw.returning_count()}, {"witness", "nonwandering_boxes.csv"}};
  Status st = Status::kPass;
  switch (ctx.map.kind) {
    case MapKind::kRigid:
      if (!ctx.map.non_resonant) {
        st = Status::kSkipped;
      } else if (nonreturning != 0) {
        st = Status::kInconclusive;
        d["budget"] = ojson{{"horizon", nc.horizon}};
      }
      d["expectation"] = "no certified box";
      break;
    case MapKind::kDenjoyProduct:
      st = nonreturning >= 1 ? Status::kPass : Status::kFail;
      d["expectation"] = "certified wandering boxes exist";
      break;
    case MapKind::kSkewExample:
      d["expectation"] = "report only";
      break;
    case MapKind::kSkewPerturbed: {
      const std::uint32_t box = box_of(nc.grid, ctx.map.perturb_point);
      const std::int64_t k = ctx.map.perturbation->k;
      d["box"] = ojson::array({box / m, box % m});
      d["k"] = k;
      d["expectation"] = "box of the perturbation point is not certified";
      if (nw.returning[box]) {
        st = Status::kPass;
      } else {
        st = k <= nc.horizon ? Status::kFail : Status::kInconclusive;
        d["budget"] = ojson{{"horizon", nc.horizon}};
      }
      break;
    }
  }
  ctx.add("nonwandering-approx", st, d);
}

void suite_nonwandering(Context& ctx) { suite_nonwandering_core(ctx, true); }

}  // namespace

RunOutcome run_suite(Suite suite, const ExperimentConfig& config, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  Context ctx(config, build_map(config.map), out_dir);
  ctx.timings["build_map"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::vector<std::pair<Suite, void (*)(Context&)>> table{
      {Suite::kRotation, suite_rotation}, {Suite::kChain, suite_chain},
      {Suite::kTwoJump, suite_two_jump},  {Suite::kEssential, suite_essential},
      {Suite::kPerturb, suite_perturb},   {Suite::kNonwandering, suite_nonwandering},
  };
  for (const auto& [s, fn] : table) {
    if (suite == Suite::kAll || suite == s) ctx.timed(suite_name(s), [&, fn = fn] { fn(ctx); });
  }

  int counts[4] = {0, 0, 0, 0};
  ojson checks = ojson::array();
  RunOutcome out;
  out.output_dir = out_dir;
  for (const CheckRecord& c : ctx.checks) {
    ++counts[static_cast<int>(c.status)];
    checks.push_back(ojson{{"name", c.name}, {"status", status_name(c.status)}, {"detail", c.detail}});
    out.summary += std::string(status_name(c.status)) + "  " + c.name + '\n';
  }
  Status overall = Status::kPass;
  if (counts[static_cast<int>(Status::kFail)] > 0) {
    overall = Status::kFail;
    out.exit_code = 1;
  } else if (counts[static_cast<int>(Status::kInconclusive)] > 0) {
    overall = Status::kInconclusive;
    out.exit_code = 2;
  }
  out.status = status_name(overall);

  ojson report;
  report["tool"] = "torlab";
  report["version"] = kToolVersion;
  report["suite"] = suite_name(suite);
  report["config"] = ojson::parse(config.echo);
  report["map"] = ojson{{"kind", map_kind_name(ctx.map.kind)},
                        {"label", ctx.map.f.label()},
                        {"rotation_vector", ojson::array({ctx.map.rho_1, ctx.map.rho_2})},
                        {"non_resonant", ctx.map.non_resonant},
                        {"resonance_note", ctx.map.resonance_note}};
  if (ctx.map.g1) {
    report["map"]["tail_mass"] = ojson::array({ctx.map.g1->tail_mass(), ctx.map.g2->tail_mass()});
  }
  report["checks"] = checks;
  report["counts"] = ojson{{"pass", counts[0]}, {"fail", counts[1]}, {"inconclusive", counts[2]}, {"skipped", counts[3]}};
  report["status"] = out.status;
  report["exit_code"] = out.exit_code;
  report["caveats"] = ctx.caveats;
  std::vector<std::string> artifacts = ctx.artifacts;
  artifacts.push_back("report.json");
  artifacts.push_back("timings.json");
  report["artifacts"] = artifacts;
  ctx.write("report.json", report.dump(2) + "\n");
  ctx.timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ctx.write("timings.json", ctx.timings.dump(2) + "\n");
  return out;
}

RunOutcome run_experiment(const RunOptions& options) {
  RunOutcome out;
  ExperimentConfig config;
  try {
    config = options.config_path ? load_config(*options.config_path) : default_config();
    if (options.seed) config.seed = *options.seed;
    if (options.threads) config.threads = *options.threads;
    refresh_echo(config);
    return run_suite(options.suite, config, resolve_output_dir(options.out_dir, config));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kConfig) throw;
    out.exit_code = 3;
    out.status = "invalid-config";
    out.summary = e.what();
    return out;
  }
}

}  // namespace torlab
