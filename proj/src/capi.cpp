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

#include "torlab/torlab.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "torlab/chain.hpp"
#include "torlab/covering.hpp"
#include "torlab/error.hpp"
#include "torlab/experiment.hpp"

struct torlab_map {
  torlab::SkewProduct f;
};

struct torlab_domain {
  torlab::BoxDomain domain;
};

struct torlab_pseudo_orbit {
  torlab::PseudoOrbit orbit;
};

namespace {

thread_local std::string last_error;

torlab_status status_of(torlab::ErrorCode code) { return static_cast<torlab_status>(static_cast<int>(code)); }

// Runs body, translating exceptions into a status and the thread's message.
template <typename Body>
torlab_status guarded(Body&& body) {
  try {
    last_error.clear();
    body();
    return TORLAB_OK;
  } catch (const torlab::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TORLAB_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TORLAB_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return TORLAB_INTERNAL;
  }
}

void require_arg(bool ok, const char* what) { torlab::require(ok, torlab::ErrorCode::kInvalidArgument, what); }

torlab::DenjoyMap denjoy(const torlab::QuadraticIrrational& q, double total_gap, double exponent, int truncation) {
  return torlab::DenjoyMap(torlab::DenjoySpec::with_total_gap(q, total_gap, exponent, truncation));
}

void copy_text(const std::string& text, char* buf, size_t size, size_t* needed) {
  if (needed != nullptr) *needed = text.size() + 1;
  if (buf == nullptr || size == 0) return;
  const size_t n = std::min(size - 1, text.size());
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
}

// Strict copy: fails when the buffer is too small.
void copy_exact(const std::string& text, char* buf, size_t size, size_t* needed) {
  if (needed != nullptr) *needed = text.size() + 1;
  if (buf == nullptr && size == 0) return;
  require_arg(buf != nullptr && size > text.size(), "buffer too small");
  std::memcpy(buf, text.c_str(), text.size() + 1);
}

}  // namespace

extern "C" {

const char* torlab_version(void) { return torlab::kToolVersion; }

const char* torlab_status_name(torlab_status status) {
  switch (status) {
    case TORLAB_OK: return "ok";
    case TORLAB_INTERNAL: return "internal";
    default: break;
  }
  const int v = static_cast<int>(status);
  if (v >= 1 && v <= 6) return torlab::error_code_name(static_cast<torlab::ErrorCode>(v));
  return "unknown";
}

const char* torlab_last_error(void) { return last_error.c_str(); }

torlab_status torlab_map_create_rigid(double a, double b, torlab_map** out) {
  return guarded([&] {
    require_arg(out != nullptr, "out is null");
    *out = new torlab_map{torlab::SkewProduct::rigid_translation(a, b)};
  });
}

torlab_status torlab_map_create_denjoy_product(double total_gap, double exponent, int truncation,
                                               torlab_map** out) {
  return guarded([&] {
    require_arg(out != nullptr, "out is null");
    const auto g1 = denjoy(torlab::QuadraticIrrational::golden(), total_gap, exponent, truncation);
    const auto g2 = denjoy(torlab::QuadraticIrrational::silver(), total_gap, exponent, truncation);
    *out = new torlab_map{torlab::SkewProduct::product(g1.lift(), g2.lift(), "denjoy-product")};
  });
}

torlab_status torlab_map_create_skew_example(double total_gap, double exponent, int truncation, double amplitude,
                                             double decay, torlab_map** out) {
  return guarded([&] {
    require_arg(out != nullptr, "out is null");
    const auto g1 = denjoy(torlab::QuadraticIrrational::golden(), total_gap, exponent, truncation);
    const auto g2 = denjoy(torlab::QuadraticIrrational::silver(), total_gap, exponent, truncation);
    *out = new torlab_map{
        torlab::SkewProduct(torlab::build_example_fiber_family(g1, g2.lift(), amplitude, decay), "skew-example")};
  });
}

torlab_status torlab_map_create_from_json(const char* config_json, torlab_map** out) {
  return guarded([&] {
    require_arg(config_json != nullptr && out != nullptr, "null argument");
    const torlab::ExperimentConfig config = torlab::parse_config(config_json);
    *out = new torlab_map{torlab::build_map(config.map).f};
  });
}

void torlab_map_destroy(torlab_map* map) { delete map; }

torlab_status torlab_map_eval(const torlab_map* map, double s, double t, double* out_s, double* out_t) {
  return guarded([&] {
    require_arg(map != nullptr && out_s != nullptr && out_t != nullptr, "null argument");
    const torlab::TorusPoint z = map->f({s, t});
    *out_s = z.s;
    *out_t = z.t;
  });
}

torlab_status torlab_map_inverse(const torlab_map* map, double s, double t, double* out_s, double* out_t) {
  return guarded([&] {
    require_arg(map != nullptr && out_s != nullptr && out_t != nullptr, "null argument");
    const torlab::TorusPoint z = torlab::wrap(map->f.inverse({s, t}));
    *out_s = z.s;
    *out_t = z.t;
  });
}

torlab_status torlab_map_rotation_vector(const torlab_map* map, double s, double t, int64_t n, double* rho_s,
                                         double* rho_t, double* bound) {
  return guarded([&] {
    require_arg(map != nullptr && rho_s != nullptr && rho_t != nullptr, "null argument");
    const auto r = torlab::rotation_vector(map->f, {s, t}, n);
    *rho_s = r.rho_s;
    *rho_t = r.rho_t;
    if (bound != nullptr) *bound = r.error_bound;
  });
}

torlab_status torlab_domain_parse(const char* text, torlab_domain** out) {
  return guarded([&] {
    require_arg(text != nullptr && out != nullptr, "null argument");
    *out = new torlab_domain{torlab::parse_domain(text)};
  });
}

torlab_status torlab_domain_serialize(const torlab_domain* domain, char* buf, size_t size, size_t* needed) {
  return guarded([&] {
    require_arg(domain != nullptr, "domain is null");
    copy_exact(torlab::serialize_domain(domain->domain), buf, size, needed);
  });
}

torlab_status torlab_domain_classify(const torlab_domain* domain, torlab_essentiality* out_class, int64_t basis[4],
                                     int* rank) {
  return guarded([&] {
    require_arg(domain != nullptr && out_class != nullptr, "null argument");
    const auto r = torlab::classify_essentiality(domain->domain);
    *out_class = static_cast<torlab_essentiality>(static_cast<int>(r.cls));
    if (rank != nullptr) *rank = r.rank();
    if (basis != nullptr) {
      for (int k = 0; k < 4; ++k) basis[k] = 0;
      for (size_t k = 0; k < r.basis.size() && k < 2; ++k) {
        basis[2 * k] = r.basis[k].p;
        basis[2 * k + 1] = r.basis[k].q;
      }
    }
  });
}

torlab_status torlab_domain_capture_diameter(const torlab_domain* domain, double* out) {
  return guarded([&] {
    require_arg(domain != nullptr && out != nullptr, "null argument");
    *out = torlab::compute_capture_diameter(domain->domain);
  });
}

void torlab_domain_destroy(torlab_domain* domain) { delete domain; }

torlab_status torlab_two_jump(const torlab_map* map, double xs, double xt, double ys, double yt, double epsilon,
                              int threads, torlab_pseudo_orbit** out) {
  return guarded([&] {
    require_arg(map != nullptr && out != nullptr, "null argument");
    torlab::TwoJumpBudgets budgets;
    budgets.threads = threads < 1 ? 1 : threads;
    const auto r = torlab::two_jump_pseudo_orbit(map->f, {xs, xt}, {ys, yt}, epsilon, budgets);
    if (r.status != torlab::SearchStatus::kSuccess) {
      torlab::fail(torlab::ErrorCode::kBudgetExhausted,
                   std::string("two-jump search: ") + torlab::search_status_name(r.status) + ", near miss " +
                       std::to_string(r.near_miss));
    }
    *out = new torlab_pseudo_orbit{r.orbit};
  });
}

torlab_status torlab_pseudo_orbit_validate(const torlab_map* map, const torlab_pseudo_orbit* po, int* valid,
                                           size_t* jump_count, double* max_step_error) {
  return guarded([&] {
    require_arg(map != nullptr && po != nullptr && valid != nullptr, "null argument");
    const auto c = torlab::validate_pseudo_orbit(map->f, po->orbit);
    *valid = c.valid ? 1 : 0;
    if (jump_count != nullptr) *jump_count = c.jump_count;
    if (max_step_error != nullptr) *max_step_error = c.max_step_error;
  });
}

size_t torlab_pseudo_orbit_length(const torlab_pseudo_orbit* po) {
  return po == nullptr ? 0 : po->orbit.points.size();
}

torlab_status torlab_pseudo_orbit_point(const torlab_pseudo_orbit* po, size_t index, double* s, double* t) {
  return guarded([&] {
    require_arg(po != nullptr && s != nullptr && t != nullptr, "null argument");
    require_arg(index < po->orbit.points.size(), "index out of range");
    *s = po->orbit.points[index].s;
    *t = po->orbit.points[index].t;
  });
}

torlab_status torlab_pseudo_orbit_serialize(const torlab_pseudo_orbit* po, char* buf, size_t size,
                                            size_t* needed) {
  return guarded([&] {
    require_arg(po != nullptr, "pseudo-orbit is null");
    copy_exact(torlab::serialize_pseudo_orbit(po->orbit), buf, size, needed);
  });
}

torlab_status torlab_pseudo_orbit_parse(const char* text, torlab_pseudo_orbit** out) {
  return guarded([&] {
    require_arg(text != nullptr && out != nullptr, "null argument");
    *out = new torlab_pseudo_orbit{torlab::parse_pseudo_orbit(text)};
  });
}

void torlab_pseudo_orbit_destroy(torlab_pseudo_orbit* po) { delete po; }

torlab_status torlab_run_experiment(const torlab_run_options* options, int* exit_code, char* summary,
                                    size_t summary_size, char* out_dir, size_t out_dir_size) {
  return guarded([&] {
    require_arg(options != nullptr && exit_code != nullptr, "null argument");
    require_arg(options->suite >= TORLAB_SUITE_ROTATION && options->suite <= TORLAB_SUITE_ALL, "unknown suite");
    torlab::RunOptions run;
    run.suite = static_cast<torlab::Suite>(static_cast<int>(options->suite));
    if (options->config_path != nullptr) run.config_path = options->config_path;
    if (options->out_dir != nullptr) run.out_dir = options->out_dir;
    if (options->has_seed) run.seed = options->seed;
    if (options->threads > 0) run.threads = options->threads;
    const torlab::RunOutcome r = torlab::run_experiment(run);
    *exit_code = r.exit_code;
    copy_text(r.summary, summary, summary_size, nullptr);
    copy_text(r.output_dir, out_dir, out_dir_size, nullptr);
  });
}

}  // extern "C"
