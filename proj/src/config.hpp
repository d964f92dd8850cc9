#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "params.hpp"

namespace kgsq {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemeConfig {
    double cfl_max = 0.5;
    long diag_interval = 10;        // steps between diagnostic rows
    long checkpoint_interval = 0;   // steps between checkpoints, 0 = off
    std::string nonlinearity = "standard";  // or "momentum"
};

struct DatumConfig {
    std::string preset = "random_bandlimited";  // zero | random_bandlimited |
                                                // vortex_patch | dipole
    double kmin = 1.0;
    double kmax = 8.0;
    double slope = -1.0;
    double norm = 1.0;     // L² normalization of the random preset
    double cx = -1.0;      // patch center; negative = domain center
    double cy = -1.0;
    double radius = 0.75;
    double width = 0.1;
    double separation = 1.6;
    double amplitude = 1.0;
    double approx_epsilon = 0.0;  // > 0 runs the two-scale preparation
};

struct NoiseConfig {
    bool enabled = true;
    double kmax = 0.0;  // spectral cutoff; 0 = full dealiased band
};

struct ExperimentConfig {
    int ensemble = 64;
    int samples = 1000;     // trilinear draws
    int draws = 10000;      // noise-sampling draws
    std::vector<double> nu_ladder = {1.0 / 8, 1.0 / 16, 1.0 / 32,
                                     1.0 / 64, 1.0 / 128, 1.0 / 256};
    double perturbation_amplitude = 1e-3;
};

struct CovarianceConfig {
    std::vector<double> alphas = {0.5};
    double radius_min = 1.0;
    double radius_max = 1000.0;
    int radii_per_decade = 8;
    double tol = 1e-6;
    std::vector<double> deltas = {1e-1, 1e-2, 1e-3};
    std::vector<double> lambdas = {1.0, 0.1, 0.01};
    double z_min = 0.02;
    double z_max = 2.0;
    int z_per_decade = 10;
    long max_evals = 80'000'000;  // per-point quadrature budget
};

struct OutputConfig {
    std::string dir = "out";
    bool write_svg = true;
    bool write_checkpoints = false;
};

struct RunConfig {
    ModelParams model;  // alpha, beta, p, nu, L, N
    std::uint64_t seed = 1;
    double t_end = 0.5;
    double dt = 1e-3;
    SchemeConfig scheme;
    DatumConfig datum;
    NoiseConfig noise;
    ExperimentConfig experiment;
    CovarianceConfig covariance;
    OutputConfig output;
};

// INI-style text: `key = value` lines, `[section]` tables, full-line comments
// starting with '#' or ';'.  Unknown sections or keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Sets one key on an existing config; key is "name" for top-level entries or
// "section.name" (e.g. "output.dir").
void set_config_key(RunConfig& cfg, const std::string& key,
                    const std::string& value);

// Canonical serialization; parse(serialize(c)) reproduces c exactly
// (doubles printed with 17 significant digits).
std::string serialize_config(const RunConfig& cfg);

}  // namespace kgsq
