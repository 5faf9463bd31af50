#include "kinturb.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>

#include "kinturb/config.hpp"
#include "kinturb/errors.hpp"
#include "kinturb/euler.hpp"
#include "kinturb/runner.hpp"
#include "kinturb/solver.hpp"

namespace {

thread_local std::string g_last_error;

kt_status set_error(kt_status status, const char* what) {
  g_last_error = what ? what : "";
  return status;
}

// Maps the current exception to a status code and records its message.
kt_status from_exception() {
  try {
    throw;
  } catch (const kinturb::StabilityError& e) {
    return set_error(KT_ERR_STABILITY, e.what());
  } catch (const kinturb::ConvergenceError& e) {
    return set_error(KT_ERR_NO_CONVERGENCE, e.what());
  } catch (const kinturb::ConfigError& e) {
    return set_error(KT_ERR_INVALID_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(KT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return set_error(KT_ERR_IO, e.what());
  } catch (const std::bad_alloc& e) {
    return set_error(KT_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return set_error(KT_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(KT_ERR_INTERNAL, "unknown error");
  }
}

kt_status require(bool ok, const char* what) {
  return ok ? KT_OK : set_error(KT_ERR_INVALID_ARGUMENT, what);
}

}  // namespace

struct kt_config {
  kinturb::Config cfg;
};

struct kt_sim {
  kinturb::Config cfg;
  kinturb::Problem problem;
  kinturb::Stepper stepper;
  kinturb::DensityField u;
  kinturb::DensityField next;
  int step = 0;

  explicit kt_sim(const kinturb::Config& c)
      : cfg(c),
        problem(kinturb::build_problem(c)),
        stepper(problem),
        u(kinturb::initial_field(c, problem.sg, problem.vg)),
        next(u.shape()) {}
};

extern "C" {

const char* kt_version(void) { return "0.1.0"; }

const char* kt_status_name(kt_status status) {
  switch (status) {
    case KT_OK: return "ok";
    case KT_ERR_INVALID_CONFIG: return "invalid-config";
    case KT_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case KT_ERR_STABILITY: return "stability-condition";
    case KT_ERR_NO_CONVERGENCE: return "no-convergence";
    case KT_ERR_IO: return "io";
    case KT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* kt_last_error(void) { return g_last_error.c_str(); }

kt_status kt_config_parse_text(const char* text, kt_config** out) {
  if (kt_status s = require(text && out, "kt_config_parse_text: null argument"))
    return s;
  try {
    auto* handle = new kt_config{kinturb::parse_config(text)};
    *out = handle;
    return KT_OK;
  } catch (...) {
    return from_exception();
  }
}

kt_status kt_config_parse_file(const char* path, kt_config** out) {
  if (kt_status s = require(path && out, "kt_config_parse_file: null argument"))
    return s;
  try {
    auto* handle = new kt_config{kinturb::parse_config_file(path)};
    *out = handle;
    return KT_OK;
  } catch (...) {
    return from_exception();
  }
}

kt_status kt_config_set(kt_config* cfg, const char* key, const char* value) {
  if (kt_status s = require(cfg && key && value, "kt_config_set: null argument"))
    return s;
  try {
    kinturb::config_set(cfg->cfg, key, value);
    return KT_OK;
  } catch (...) {
    return from_exception();
  }
}

kt_status kt_config_describe(const kt_config* cfg, char** out) {
  if (kt_status s = require(cfg && out, "kt_config_describe: null argument")) return s;
  try {
    const std::string text = kinturb::describe(cfg->cfg);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
    return KT_OK;
  } catch (...) {
    return from_exception();
  }
}

void kt_string_free(char* s) { delete[] s; }

void kt_config_free(kt_config* cfg) { delete cfg; }

kt_status kt_check_stability(const kt_config* cfg, kt_stability_info* out) {
  if (kt_status s = require(cfg && out, "kt_check_stability: null argument")) return s;
  try {
    const kinturb::StabilityReport rep = kinturb::check_stability(cfg->cfg);
    out->nor = rep.nor;
    out->s_opt = rep.s_opt;
    out->d = rep.d;
    out->worst_l1 = rep.worst_l1;
    out->worst_l2 = rep.worst_l2;
    out->worst_a1 = rep.worst.a1;
    out->worst_b1 = rep.worst.b1;
    out->worst_a2 = rep.worst.a2;
    out->worst_b2 = rep.worst.b2;
    return KT_OK;
  } catch (...) {
    return from_exception();
  }
}

kt_status kt_run(const kt_config* cfg, kt_progress_fn progress, void* user) {
  if (kt_status s = require(cfg != nullptr, "kt_run: null config")) return s;
  try {
    kinturb::ProgressFn cb;
    if (progress) {
      cb = [progress, user](const kinturb::ProgressInfo& info) {
        kt_step_info out;
        out.step = info.step;
        out.total_steps = info.total;
        out.t = info.t;
        out.picard_iters = info.picard_iters;
        out.linear_iters_total = info.linear_iters_total;
        out.picard_delta = info.picard_delta;
        out.linear_residual = info.linear_residual;
        out.mass = info.mass;
        out.nor = info.nor;
        progress(&out, user);
      };
    }
    kinturb::run_batch(cfg->cfg, cb);
    return KT_OK;
  } catch (...) {
    return from_exception();
  }
}

kt_status kt_sim_create(const kt_config* cfg, kt_sim** out) {
  if (kt_status s = require(cfg && out, "kt_sim_create: null argument")) return s;
  try {
    *out = new kt_sim(cfg->cfg);
    return KT_OK;
  } catch (...) {
    return from_exception();
  }
}

void kt_sim_free(kt_sim* sim) { delete sim; }

kt_status kt_sim_advance(kt_sim* sim, int steps, kt_step_info* last) {
  if (kt_status s = require(sim != nullptr, "kt_sim_advance: null simulation"))
    return s;
  if (kt_status s = require(steps >= 0, "kt_sim_advance: negative step count"))
    return s;
  if (kt_status s = require(sim->step + steps <= sim->cfg.N,
                            "kt_sim_advance: beyond the configured step count"))
    return s;
  try {
    for (int i = 0; i < steps; ++i) {
      const kinturb::StepReport rep = sim->stepper.step(sim->u, sim->step, sim->next);
      std::swap(sim->u, sim->next);
      ++sim->step;
      if (last) {
        last->step = sim->step;
        last->total_steps = sim->cfg.N;
        last->t = sim->problem.tau * sim->step;
        last->picard_iters = rep.picard_iters;
        last->linear_iters_total = rep.linear_iters_total;
        last->picard_delta = rep.final_picard_delta;
        last->linear_residual = rep.final_linear_residual;
        last->nor = rep.nor;
        const auto rho = kinturb::euler_density(sim->u, sim->problem.weights,
                                                sim->cfg.kappa);
        const auto ext = kinturb::extend_density(rho, sim->problem.boundary, sim->step,
                                                 sim->problem.vg, sim->problem.weights,
                                                 sim->cfg.kappa);
        last->mass = kinturb::total_mass(ext, sim->problem.sg);
      }
    }
    return KT_OK;
  } catch (...) {
    return from_exception();
  }
}

int kt_sim_step_index(const kt_sim* sim) { return sim ? sim->step : -1; }

double kt_sim_time(const kt_sim* sim) {
  return sim ? sim->problem.tau * sim->step : 0.0;
}

kt_status kt_sim_shape(const kt_sim* sim, kt_field_shape* out) {
  if (kt_status s = require(sim && out, "kt_sim_shape: null argument")) return s;
  const kinturb::FieldShape& shape = sim->u.shape();
  out->m1 = shape.m1;
  out->m2 = shape.m2;
  out->mr1 = shape.mr1;
  out->pr1 = shape.pr1;
  out->mr2 = shape.mr2;
  out->pr2 = shape.pr2;
  return KT_OK;
}

kt_status kt_sim_copy_density(const kt_sim* sim, double* buf, size_t len) {
  if (kt_status s = require(sim && buf, "kt_sim_copy_density: null argument"))
    return s;
  const auto data = sim->u.data();
  if (kt_status s = require(len == data.size(),
                            "kt_sim_copy_density: buffer length mismatch"))
    return s;
  std::memcpy(buf, data.data(), data.size() * sizeof(double));
  return KT_OK;
}

kt_status kt_sim_copy_euler(const kt_sim* sim, double* rho, double* p1, double* p2,
                            size_t len) {
  if (kt_status s = require(sim != nullptr, "kt_sim_copy_euler: null simulation"))
    return s;
  const size_t nodes = static_cast<size_t>(sim->u.shape().block_size());
  if (kt_status s =
          require(len == nodes, "kt_sim_copy_euler: buffer length mismatch"))
    return s;
  try {
    if (rho) {
      const auto field =
          kinturb::euler_density(sim->u, sim->problem.weights, sim->cfg.kappa);
      std::memcpy(rho, field.v.data(), nodes * sizeof(double));
    }
    if (p1 || p2) {
      const auto field = kinturb::euler_impulse(sim->u, sim->problem.vg,
                                                sim->problem.weights, sim->cfg.kappa);
      if (p1) std::memcpy(p1, field.c1.data(), nodes * sizeof(double));
      if (p2) std::memcpy(p2, field.c2.data(), nodes * sizeof(double));
    }
    return KT_OK;
  } catch (...) {
    return from_exception();
  }
}

}  // extern "C"
