#pragma once

#include <string>

#include "config.hpp"

namespace kgsq::cmd {

// Command entry points behind the CLI subcommands.  Each validates its
// config, runs the corresponding operation, writes its report files under
// the output directory, and returns a process exit code:
//   0  success
//   1  configuration error
//   2  blow-up guard tripped (partial outputs are still written)
//   3  quadrature budget exhausted (the message names the offending radius)
// out_dir overrides cfg.output.dir when non-empty; threads < 1 means 1.
// Message of the last failure (empty after a success) on this thread; the
// commands never print, so callers own all diagnostics output.
const std::string& last_message();

int simulate(const RunConfig& cfg, const std::string& out_dir, int threads);
int analyze_covariance(const RunConfig& cfg, const std::string& out_dir,
                       int threads);
int convergence_study(const RunConfig& cfg, const std::string& out_dir,
                      int threads);
int stability(const RunConfig& cfg, const std::string& out_dir, int threads);
int trilinear(const RunConfig& cfg, const std::string& out_dir, int threads);
int sample_noise(const RunConfig& cfg, const std::string& out_dir, int threads);

}  // namespace kgsq::cmd
