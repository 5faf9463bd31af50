// ktsim: batch front end for the kinturb solver library.
//
// Verbs: describe (echo the resolved configuration), check-stability (print
// the iteration bound and exit 0 only when it admits a run), run (execute
// the simulation and write CSV artifacts).
//
// Exit codes: 0 success, 1 configuration or stability rejection,
// 2 runtime non-convergence.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "kinturb.h"

namespace {

constexpr const char* kConfigReference = R"(Configuration file: one `key = value` per line, `#` starts a comment.

Space grid        L1, L2 (side lengths, > 0; default 1)
                  M1, M2 (interior nodes per dimension, >= 1; default 33)
Velocity grid     ah1, ah2 (steps, > 0; default 0.5)
                  MR1, PR1, MR2, PR2 (node counts below/above zero, >= 0; default 2)
Time grid         T (final time, > 0; default 5), N (steps, >= 1; default 300)
Model             nu (diffusion, >= 0; default 0.005)
                  kappa (mixer strength, >= 0; default 1)
                  eps_div (velocity definedness guard, > 0; default 1e-12)
Solver            s (relaxation, positive or 'auto'; default auto = 1/d)
                  tol_linear (default 1e-10), max_linear_iters (default 500)
                  tol_picard (default 1e-8, scaled by 1 + |u|), max_picard_iters (default 50)
Scenario          scenario = collision | zero | uniform (default collision)
                  uniform_value (default 1)
                  collision_base_height (default 0), collision_ramp_rate (default 0.05)
                  collision_sides (subset of LRBT; default LRBT)
                  collision_band_left/right/bottom/top (l1:l2 pairs, comma separated;
                  default: single fastest inward node per side)
Outputs           snapshots (comma-separated step list)
                  snapshot_every (stride, 0 = off; also snapshots the final step)
                  output_dir (default out), threads (0 = all available; default 0)
)";

int fail_with(kt_status status, const char* verb) {
  std::fprintf(stderr, "ktsim %s: %s: %s\n", verb, kt_status_name(status),
               kt_last_error());
  return status == KT_ERR_NO_CONVERGENCE ? 2 : 1;
}

kt_status load_config(const std::string& path, const std::string& output_override,
                      int threads_override, bool has_threads, kt_config** out) {
  kt_status status = kt_config_parse_file(path.c_str(), out);
  if (status != KT_OK) return status;
  if (!output_override.empty()) {
    status = kt_config_set(*out, "output_dir", output_override.c_str());
    if (status != KT_OK) return status;
  }
  if (has_threads) {
    status = kt_config_set(*out, "threads",
                           std::to_string(threads_override).c_str());
    if (status != KT_OK) return status;
  }
  return KT_OK;
}

void print_progress(const kt_step_info* info, void*) {
  std::printf("step %d/%d picard %d linear %d mass %.12g\n", info->step,
              info->total_steps, info->picard_iters, info->linear_iters_total,
              info->mass);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ktsim: 2D kinetic flow simulator (advection, diffusion, and a "
               "velocity-mixing self-interaction on a space x velocity grid)"};
  app.footer(kConfigReference);
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int threads = 0;
  bool quiet = false;

  auto add_common = [&](CLI::App* cmd, bool with_run_flags) {
    cmd->add_option("--config", config_path, "Path to the configuration file")
        ->required();
    if (with_run_flags) {
      cmd->add_option("--output", output_dir, "Output directory (overrides output_dir)");
      cmd->add_option("--threads", threads, "Worker threads, 0 = all available");
      cmd->add_flag("--quiet", quiet, "Suppress per-step progress lines");
    }
  };

  CLI::App* describe = app.add_subcommand(
      "describe", "Print the resolved configuration and derived quantities");
  add_common(describe, false);

  CLI::App* check = app.add_subcommand(
      "check-stability",
      "Print NOR, s_opt, d and the worst velocity node; exit 0 only if NOR < 1");
  add_common(check, false);

  CLI::App* run = app.add_subcommand("run", "Run the simulation and write artifacts");
  add_common(run, true);

  CLI11_PARSE(app, argc, argv);

  const bool has_threads = run->count("--threads") > 0;
  kt_config* cfg = nullptr;
  kt_status status = load_config(config_path, output_dir, threads, has_threads, &cfg);
  if (status != KT_OK) {
    if (cfg) kt_config_free(cfg);
    return fail_with(status, app.get_subcommands().front()->get_name().c_str());
  }

  int exit_code = 0;
  if (describe->parsed()) {
    char* text = nullptr;
    status = kt_config_describe(cfg, &text);
    if (status == KT_OK) {
      std::fputs(text, stdout);
      kt_string_free(text);
    } else {
      exit_code = fail_with(status, "describe");
    }
  } else if (check->parsed()) {
    kt_stability_info info;
    status = kt_check_stability(cfg, &info);
    if (status == KT_OK) {
      std::printf("NOR = %.17g\n", info.nor);
      std::printf("s_opt = %.17g\n", info.s_opt);
      std::printf("d = %.17g\n", info.d);
      std::printf("worst velocity node: l = (%d, %d), a1 = %.17g, b1 = %.17g, "
                  "a2 = %.17g, b2 = %.17g\n",
                  info.worst_l1, info.worst_l2, info.worst_a1, info.worst_b1,
                  info.worst_a2, info.worst_b2);
      if (info.nor < 1.0) {
        std::printf("stable: yes (NOR < 1)\n");
      } else {
        std::printf("stable: no (NOR >= 1); reduce tau or refine the space grid\n");
        exit_code = 1;
      }
    } else {
      exit_code = fail_with(status, "check-stability");
    }
  } else if (run->parsed()) {
    status = kt_run(cfg, quiet ? nullptr : print_progress, nullptr);
    if (status == KT_OK) {
      std::printf("run complete\n");
    } else {
      exit_code = fail_with(status, "run");
    }
  }

  kt_config_free(cfg);
  return exit_code;
}
