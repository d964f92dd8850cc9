#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "covariance.hpp"
#include "experiments.hpp"
#include "field_ops.hpp"
#include "noise.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "solver.hpp"

namespace kgsq::cmd {

namespace {

thread_local std::string g_last_message;

template <typename Fn>
int guard(Fn&& body) {
    g_last_message.clear();
    try {
        return body();
    } catch (const quad::budget_error& e) {
        g_last_message = e.what();
        return 3;
    } catch (const std::exception& e) {
        g_last_message = e.what();
        return 1;
    }
}

std::string resolve_dir(const RunConfig& cfg, const std::string& out_dir) {
    std::string dir = out_dir.empty() ? cfg.output.dir : out_dir;
    if (dir.empty()) throw config_error("config: output directory is empty");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + dir +
                                 "': " + ec.message());
    return dir;
}

std::string num_tag(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", x);
    std::string s(buf);
    for (char& ch : s) {
        if (ch == '.') ch = 'p';
        else if (ch == '-') ch = 'm';
        else if (ch == '+') ch = ' ';
    }
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    return s;
}

StepScheme make_scheme(const RunConfig& cfg) {
    StepScheme s;
    s.dt = cfg.dt;
    s.cfl_max = cfg.scheme.cfl_max;
    s.noise_enabled = cfg.noise.enabled;
    s.form = cfg.scheme.nonlinearity == "momentum" ? NonlinearityForm::momentum
                                                   : NonlinearityForm::standard;
    return s;
}

NoiseModel make_noise_model(const Grid& g, const RunConfig& cfg) {
    double kmax = cfg.noise.kmax > 0.0
                      ? cfg.noise.kmax
                      : g.dk() * static_cast<double>(g.dealias_m());
    return NoiseModel(g, cfg.model.alpha, kmax);
}

SpectralField make_datum(const Grid& g, const RunConfig& cfg) {
    const DatumConfig& d = cfg.datum;
    const double cx = d.cx < 0.0 ? cfg.model.L / 2 : d.cx;
    const double cy = d.cy < 0.0 ? cfg.model.L / 2 : d.cy;
    SpectralField f(g);
    if (d.preset == "zero") {
        // keep f = 0
    } else if (d.preset == "random_bandlimited") {
        f = random_bandlimited(g, rng::chain(cfg.seed, rng::STREAM_DATUM),
                               d.kmin, d.kmax, d.slope, d.norm);
    } else if (d.preset == "vortex_patch") {
        f = vortex_patch(g, cx, cy, d.radius, d.width, d.amplitude);
    } else if (d.preset == "dipole") {
        f = dipole(g, cx, cy, d.radius, d.width, d.separation, d.amplitude);
    } else {
        throw config_error("config: unknown datum.preset '" + d.preset + "'");
    }
    f.set_mean(0.0);  // patch presets carry mass; the dynamics never do
    if (d.approx_epsilon > 0.0)
        f = approximate_datum(f, d.approx_epsilon, cfg.model.p);
    return f;
}

// min ... max inclusive, `per_decade` points per decade.
std::vector<double> geometric_grid(double lo, double hi, int per_decade,
                                   const char* what) {
    if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1)
        throw config_error(std::string("config: empty ") + what +
                           " range (need 0 < min <= max, points per decade "
                           ">= 1)");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        double v = lo * std::pow(10.0, static_cast<double>(i) / per_decade);
        if (v > hi * (1.0 + 1e-12)) break;
        out.push_back(v);
    }
    if (out.back() < hi * (1.0 - 1e-9)) out.push_back(hi);
    return out;
}

const char* status_name(StepStatus s) {
    switch (s) {
        case StepStatus::ok: return "ok";
        case StepStatus::cfl_violation: return "cfl_violation";
        case StepStatus::blowup: return "blowup";
    }
    return "unknown";
}

nlohmann::json stat_json(const Stat& s) {
    return {{"mean", s.mean}, {"se", s.se}};
}

}  // namespace

const std::string& last_message() { return g_last_message; }

int simulate(const RunConfig& cfg, const std::string& out_dir, int threads) {
    (void)threads;  // a single trajectory is inherently serial
    return guard([&]() -> int {
        cfg.model.check();
        const std::string dir = resolve_dir(cfg, out_dir);
        const Grid g(cfg.model.N, cfg.model.L);
        const StepScheme scheme = make_scheme(cfg);
        if (cfg.scheme.diag_interval < 1)
            throw config_error("config: scheme.diag_interval must be >= 1");
        const long ck = cfg.scheme.checkpoint_interval;
        if (ck < 0)
            throw config_error("config: scheme.checkpoint_interval must be "
                               ">= 0");
        const bool checkpoints = cfg.output.write_checkpoints && ck > 0;
        if (checkpoints && ck % cfg.scheme.diag_interval != 0)
            throw config_error(
                "config: scheme.checkpoint_interval must be a multiple of "
                "scheme.diag_interval");

        NoiseModel noise;
        const NoiseModel* noise_ptr = nullptr;
        if (cfg.noise.enabled) {
            noise = make_noise_model(g, cfg);
            noise_ptr = &noise;
        }

        Solver solver(cfg.model, noise_ptr, cfg.seed, scheme);
        solver.set_theta(make_datum(g, cfg));

        DiagnosticSeries series;
        auto on_record = [&](const Solver& s) {
            if (!checkpoints) return;
            if (s.step_index() == 0) return;
            if (s.step_index() % static_cast<std::uint64_t>(ck) != 0) return;
            char name[64];
            std::snprintf(name, sizeof name, "checkpoint_%08llu.bin",
                          static_cast<unsigned long long>(s.step_index()));
            write_checkpoint(dir + "/" + name, s.theta(), s.time());
        };
        const StepStatus status =
            solver.run(cfg.t_end, static_cast<int>(cfg.scheme.diag_interval),
                       &series, on_record);

        const std::vector<std::string> cols = {
            "t",   "l2",        "l4",  "linf", "h_m1",
            "h_malpha", "h_0", "max_u", "cfl",  "mean_abs"};
        std::vector<std::vector<double>> rows;
        rows.reserve(series.rows.size());
        for (const auto& r : series.rows)
            rows.push_back({r.t, r.l2, r.l4, r.linf, r.h_m1, r.h_malpha, r.h_0,
                            r.max_u, r.cfl, r.mean_abs});
        report::write_csv(dir + "/diagnostics.csv", cfg, "diagnostics", cols,
                          rows);

        if (cfg.output.write_checkpoints)
            write_checkpoint(dir + "/state_final.bin", solver.theta(),
                             solver.time());

        const DiagnosticRow last =
            series.rows.empty() ? DiagnosticRow{} : series.rows.back();
        const double horizon = solver.sup_max_u() * cfg.t_end;
        nlohmann::json payload = {
            {"status", status_name(status)},
            {"steps", solver.step_index()},
            {"t_final", solver.time()},
            {"corrector_c0", solver.corrector_c0()},
            {"sup_max_u", solver.sup_max_u()},
            {"advection_horizon", horizon},
            {"advection_horizon_limit", cfg.model.L / 4},
            {"advection_horizon_ok", horizon < cfg.model.L / 4},
            {"final",
             {{"t", last.t},
              {"l2", last.l2},
              {"l4", last.l4},
              {"linf", last.linf},
              {"h_m1", last.h_m1},
              {"h_malpha", last.h_malpha},
              {"max_u", last.max_u}}},
        };
        report::write_json(dir + "/report.json", cfg, "simulate-report",
                           payload);

        if (cfg.output.write_svg) {
            report::PlotSpec spec;
            spec.title = "norms along the trajectory";
            spec.xlabel = "t";
            spec.ylabel = "norm";
            report::Series sl2{"L2", {}, {}}, shm1{"H^-1", {}, {}},
                sinf{"Linf", {}, {}};
            for (const auto& r : series.rows) {
                sl2.x.push_back(r.t);   sl2.y.push_back(r.l2);
                shm1.x.push_back(r.t);  shm1.y.push_back(r.h_m1);
                sinf.x.push_back(r.t);  sinf.y.push_back(r.linf);
            }
            spec.series = {sl2, shm1, sinf};
            report::write_svg_plot(dir + "/norms.svg", cfg, spec);
        }
        return status == StepStatus::ok ? 0 : 2;
    });
}

int analyze_covariance(const RunConfig& cfg, const std::string& out_dir,
                       int threads) {
    (void)threads;  // quadrature cost is tiny; keep the walk deterministic
    return guard([&]() -> int {
        const std::string dir = resolve_dir(cfg, out_dir);
        const CovarianceConfig& cov = cfg.covariance;
        if (cov.alphas.empty())
            throw config_error("config: covariance.alphas is empty");
        for (double a : cov.alphas)
            if (!(a > 0.0) || !(a < 1.0))
                throw config_error(
                    "config: covariance.alphas entries must lie in (0,1)");
        if (!(cov.tol > 0.0))
            throw config_error("config: covariance.tol must be positive");
        if (cov.max_evals < 1)
            throw config_error("config: covariance.max_evals must be >= 1");
        const std::vector<double> radii = geometric_grid(
            cov.radius_min, cov.radius_max, cov.radii_per_decade, "radius");
        const std::vector<double> zs =
            geometric_grid(cov.z_min, cov.z_max, cov.z_per_decade, "z");

        nlohmann::json summary = nlohmann::json::array();
        for (double alpha : cov.alphas) {
            const std::string tag = num_tag(alpha);
            CoercivityProfile profile =
                build_profile(alpha, radii, cov.tol, cov.max_evals);
            KappaFit fit = fit_kappas(profile);

            std::vector<std::vector<double>> fdelta(
                cov.deltas.size(), std::vector<double>(radii.size()));
            for (std::size_t di = 0; di < cov.deltas.size(); ++di)
                for (std::size_t i = 0; i < radii.size(); ++i) {
                    try {
                        fdelta[di][i] = eval_F_delta(radii[i], 0.0, alpha,
                                                     cov.deltas[di], cov.tol,
                                                     cov.max_evals);
                    } catch (const quad::budget_error& e) {
                        char buf[64];
                        std::snprintf(buf, sizeof buf, "%.17g", radii[i]);
                        throw quad::budget_error(std::string(e.what()) +
                                                 " at radius |n| = " + buf);
                    }
                }

            std::vector<std::string> cols = {"rho", "F", "F_cross", "tol_abs",
                                             "kappa_bound"};
            for (double d : cov.deltas)
                cols.push_back("F_delta_" + num_tag(d));
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < radii.size(); ++i) {
                const auto& s = profile.samples[i];
                std::vector<double> row = {
                    s.rho, s.value, s.cross, s.tol_abs,
                    -fit.kappa1 * std::pow(s.rho, -2.0 * alpha) +
                        fit.kappa2 * std::pow(s.rho, -2.0)};
                for (std::size_t di = 0; di < cov.deltas.size(); ++di)
                    row.push_back(fdelta[di][i]);
                rows.push_back(std::move(row));
            }
            report::write_csv(dir + "/coercivity_alpha_" + tag + ".csv", cfg,
                              "coercivity", cols, rows);

            // Tail slope of −F over the outermost decade.
            std::vector<double> tx, ty;
            for (const auto& s : profile.samples)
                if (s.rho >= radii.back() / 10.0 && s.value < 0.0) {
                    tx.push_back(s.rho);
                    ty.push_back(-s.value);
                }
            double tail_slope = std::numeric_limits<double>::quiet_NaN();
            if (tx.size() >= 2) tail_slope = loglog_slope(tx, ty);

            // Rescaled structure function on the z-grid, one block per λ.
            std::vector<std::string> zcols = {"z"};
            for (double lam : cov.lambdas) {
                zcols.push_back("q_par_lambda_" + num_tag(lam));
                zcols.push_back("q_perp_lambda_" + num_tag(lam));
                zcols.push_back("trace_lambda_" + num_tag(lam));
            }
            std::vector<std::vector<double>> zrows(zs.size());
            std::vector<std::vector<double>> traces(cov.lambdas.size());
            std::vector<double> ratio_at_zmin(cov.lambdas.size());
            for (std::size_t zi = 0; zi < zs.size(); ++zi)
                zrows[zi].push_back(zs[zi]);
            for (std::size_t li = 0; li < cov.lambdas.size(); ++li) {
                for (std::size_t zi = 0; zi < zs.size(); ++zi) {
                    Mat2 q =
                        structure_scaling(alpha, cov.lambdas[li], zs[zi], 0.0);
                    const double qpar = q[0][0], qperp = q[1][1];
                    zrows[zi].push_back(qpar);
                    zrows[zi].push_back(qperp);
                    zrows[zi].push_back(qpar + qperp);
                    traces[li].push_back(qpar + qperp);
                    if (zi == 0) ratio_at_zmin[li] = qperp / qpar;
                }
            }
            report::write_csv(dir + "/scaling_alpha_" + tag + ".csv", cfg,
                              "structure-scaling", zcols, zrows);

            nlohmann::json scaling = nlohmann::json::array();
            const double z_half = std::sqrt(zs.front() * zs.back());
            for (std::size_t li = 0; li < cov.lambdas.size(); ++li) {
                std::vector<double> sx, sy;
                for (std::size_t zi = 0; zi < zs.size(); ++zi)
                    if (zs[zi] <= z_half) {
                        sx.push_back(zs[zi]);
                        sy.push_back(traces[li][zi]);
                    }
                double slope = std::numeric_limits<double>::quiet_NaN();
                if (sx.size() >= 2) slope = loglog_slope(sx, sy);
                scaling.push_back({{"lambda", cov.lambdas[li]},
                                   {"trace_slope_small_z", slope},
                                   {"ratio_perp_par_at_z_min",
                                    ratio_at_zmin[li]},
                                   {"expected_ratio", 1.0 + 2.0 * alpha}});
            }

            summary.push_back({{"alpha", alpha},
                               {"kappa1", fit.kappa1},
                               {"kappa2", fit.kappa2},
                               {"residual", fit.residual},
                               {"rho_min", fit.rho_min},
                               {"rho_max", fit.rho_max},
                               {"tail_slope_of_neg_F", tail_slope},
                               {"expected_tail_slope", -2.0 * alpha},
                               {"corrector_c0_continuum",
                                1.0 / (4.0 * alpha)},
                               {"scaling", scaling}});

            if (cfg.output.write_svg) {
                report::PlotSpec spec;
                spec.title = "-F and the kappa envelope, alpha = " +
                             std::string(num_tag(alpha));
                spec.xlabel = "|n|";
                spec.ylabel = "-F";
                spec.logx = spec.logy = true;
                report::Series sF{"-F", {}, {}}, sB{"kappa1 |n|^-2a", {}, {}};
                for (const auto& s : profile.samples) {
                    sF.x.push_back(s.rho);
                    sF.y.push_back(-s.value);
                    sB.x.push_back(s.rho);
                    sB.y.push_back(fit.kappa1 * std::pow(s.rho, -2.0 * alpha));
                }
                spec.series = {sF, sB};
                report::write_svg_plot(dir + "/coercivity_" + tag + ".svg", cfg,
                                       spec);
            }
        }
        report::write_json(dir + "/kappa_fit.json", cfg, "kappa-fit", summary);
        return 0;
    });
}

int convergence_study(const RunConfig& cfg, const std::string& out_dir,
                      int threads) {
    return guard([&]() -> int {
        cfg.model.check();
        const std::string dir = resolve_dir(cfg, out_dir);
        const Grid g(cfg.model.N, cfg.model.L);
        const StepScheme scheme = make_scheme(cfg);
        NoiseModel noise = make_noise_model(g, cfg);
        SpectralField datum = make_datum(g, cfg);

        RateStudy study = run_vanishing_viscosity(
            cfg.model, noise, datum, cfg.experiment.nu_ladder,
            cfg.experiment.ensemble, cfg.seed, cfg.t_end, scheme,
            threads < 1 ? 1 : threads);

        std::vector<std::vector<double>> rows;
        for (const auto& r : study.rungs)
            rows.push_back({r.nu_hi, r.nu_lo, r.sup_h_m1_sq.mean,
                            r.sup_h_m1_sq.se, std::sqrt(r.sup_h_m1_sq.mean),
                            r.int_h_malpha_sq.mean, r.int_h_malpha_sq.se});
        report::write_csv(dir + "/rungs.csv", cfg, "rate-rungs",
                          {"nu_hi", "nu_lo", "sup_h_m1_sq_mean",
                           "sup_h_m1_sq_se", "sup_h_m1", "int_h_malpha_sq_mean",
                           "int_h_malpha_sq_se"},
                          rows);

        nlohmann::json payload = {
            {"ladder", study.ladder},
            {"slope", study.slope},
            {"slope_defined", study.slope_defined},
            {"expected_slope", (2.0 - cfg.model.alpha) / 4.0},
            {"complete", study.complete},
            {"ensemble", study.ensemble},
            {"ensemble_done", study.ensemble_done},
            {"low_ensemble", study.low_ensemble},
            {"note", study.note},
        };
        report::write_json(dir + "/rate_study.json", cfg, "rate-study",
                           payload);

        if (cfg.output.write_svg && !study.rungs.empty()) {
            report::PlotSpec spec;
            spec.title = "adjacent-rung error vs viscosity";
            spec.xlabel = "nu";
            spec.ylabel = "sup_t ||xi||_{H^-1}";
            spec.logx = spec.logy = true;
            report::Series s{"error", {}, {}};
            for (const auto& r : study.rungs) {
                s.x.push_back(r.nu_hi);
                s.y.push_back(std::sqrt(r.sup_h_m1_sq.mean));
            }
            spec.series = {s};
            report::write_svg_plot(dir + "/rate.svg", cfg, spec);
        }
        return study.complete ? 0 : 2;
    });
}

int stability(const RunConfig& cfg, const std::string& out_dir, int threads) {
    return guard([&]() -> int {
        cfg.model.check();
        const std::string dir = resolve_dir(cfg, out_dir);
        const Grid g(cfg.model.N, cfg.model.L);
        const StepScheme scheme = make_scheme(cfg);
        NoiseModel noise = make_noise_model(g, cfg);
        SpectralField datum1 = make_datum(g, cfg);
        SpectralField datum2 = datum1;
        const double amp = cfg.experiment.perturbation_amplitude;
        if (amp != 0.0) {
            if (amp < 0.0)
                throw config_error(
                    "config: experiment.perturbation_amplitude must be >= 0");
            SpectralField pert = random_bandlimited(
                g, rng::chain(rng::chain(cfg.seed, rng::STREAM_DATUM), 0xA11),
                cfg.datum.kmin, cfg.datum.kmax, cfg.datum.slope, 1.0);
            const double hm1 = sobolev_norm(pert, -1.0);
            if (hm1 <= 0.0)
                throw std::runtime_error("perturbation has zero H^-1 norm");
            pert *= amp / hm1;  // amplitude measured where the theory does
            datum2 += pert;
        }

        StabilityReport rep = run_stability(
            cfg.model, noise, datum1, datum2, cfg.experiment.ensemble,
            cfg.seed, cfg.t_end, scheme, threads < 1 ? 1 : threads);

        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < rep.times.size(); ++i)
            rows.push_back({rep.times[i], rep.xi_h_m1_sq[i].mean,
                            rep.xi_h_m1_sq[i].se});
        report::write_csv(dir + "/xi_curve.csv", cfg, "stability-curve",
                          {"t", "xi_h_m1_sq_mean", "xi_h_m1_sq_se"}, rows);

        nlohmann::json payload = {
            {"xi0_h_m1_sq", rep.xi0_h_m1_sq},
            {"dissipation", stat_json(rep.dissipation)},
            {"envelope_c", rep.envelope_c},
            {"identical", rep.identical},
            {"complete", rep.complete},
            {"ensemble", rep.ensemble},
            {"ensemble_done", rep.ensemble_done},
            {"low_ensemble", rep.low_ensemble},
            {"perturbation_amplitude", amp},
        };
        if (!rep.xi_h_m1_sq.empty())
            payload["final"] = stat_json(rep.xi_h_m1_sq.back());
        report::write_json(dir + "/stability.json", cfg, "stability", payload);

        if (cfg.output.write_svg && !rep.times.empty()) {
            report::PlotSpec spec;
            spec.title = "mean squared H^-1 distance under common noise";
            spec.xlabel = "t";
            spec.ylabel = "E ||xi||^2";
            report::Series s{"E ||xi_t||^2", {}, {}};
            s.x = rep.times;
            for (const auto& st : rep.xi_h_m1_sq) s.y.push_back(st.mean);
            spec.series = {s};
            report::write_svg_plot(dir + "/stability.svg", cfg, spec);
        }
        return rep.complete ? 0 : 2;
    });
}

int trilinear(const RunConfig& cfg, const std::string& out_dir, int threads) {
    return guard([&]() -> int {
        cfg.model.check();
        const std::string dir = resolve_dir(cfg, out_dir);
        if (cfg.experiment.samples < 1)
            throw config_error("config: experiment.samples must be >= 1");

        TrilinearReport rep =
            trilinear_ratios(cfg.model, cfg.experiment.samples, cfg.seed,
                             threads < 1 ? 1 : threads);

        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < rep.ratios.size(); ++i)
            rows.push_back({static_cast<double>(i), rep.ratios[i][0],
                            rep.ratios[i][1], rep.ratios[i][2]});
        report::write_csv(dir + "/ratios.csv", cfg, "trilinear-ratios",
                          {"sample", "ratio_advection", "ratio_jacobian",
                           "ratio_self"},
                          rows);

        nlohmann::json payload = {
            {"alpha", rep.alpha},
            {"beta", rep.beta},
            {"p", rep.p},
            {"p_star", rep.p_star},
            {"r1", rep.r1},
            {"r2", rep.r2},
            {"samples", rep.samples},
            {"max_ratio", rep.max_ratio},
            {"median_ratio", rep.median_ratio},
        };
        report::write_json(dir + "/trilinear.json", cfg, "trilinear", payload);
        return 0;
    });
}

int sample_noise(const RunConfig& cfg, const std::string& out_dir,
                 int threads) {
    (void)threads;
    return guard([&]() -> int {
        cfg.model.check();
        const std::string dir = resolve_dir(cfg, out_dir);
        if (cfg.experiment.draws < 2)
            throw config_error("config: experiment.draws must be >= 2");
        if (!(cfg.dt > 0.0)) throw config_error("config: dt must be positive");
        const Grid g(cfg.model.N, cfg.model.L);
        NoiseModel model = make_noise_model(g, cfg);
        BrownianDriver driver(cfg.seed);
        const double dt = cfg.dt;
        const double sqrt_norm = std::sqrt(model.normalization());
        const int draws = cfg.experiment.draws;

        // dW(0) = Σ_k amp_k e_k dB_k √norm: at the origin only the cosine
        // channel survives, so the empirical covariance of that vector over
        // draws, divided by dt, estimates C(0).
        std::vector<double> c11(draws), c12(draws), c22(draws), w1(draws),
            w2(draws);
        const auto& modes = model.modes();
        for (int d = 0; d < draws; ++d) {
            double v1 = 0.0, v2 = 0.0;
            for (std::size_t i = 0; i < modes.size(); ++i) {
                const auto inc =
                    driver.draw(static_cast<std::uint64_t>(d), i, dt);
                const double a = modes[i].amp * sqrt_norm * inc.db;
                v1 += a * modes[i].e1;
                v2 += a * modes[i].e2;
            }
            w1[d] = v1;
            w2[d] = v2;
            c11[d] = v1 * v1 / dt;
            c12[d] = v1 * v2 / dt;
            c22[d] = v2 * v2 / dt;
        }
        const Stat s11 = summarize(c11), s12 = summarize(c12),
                   s22 = summarize(c22), m1 = summarize(w1),
                   m2 = summarize(w2);
        const Mat2 exact = model.covariance_C(0.0, 0.0);
        const double c0 = model.corrector_c0();

        auto within = [](const Stat& s, double target) {
            return std::abs(s.mean - target) <= 3.0 * s.se;
        };
        nlohmann::json payload = {
            {"draws", draws},
            {"dt", dt},
            {"modes", modes.size()},
            {"corrector_c0", c0},
            {"exact_c0_matrix",
             {{exact[0][0], exact[0][1]}, {exact[1][0], exact[1][1]}}},
            {"empirical",
             {{"c11", stat_json(s11)},
              {"c12", stat_json(s12)},
              {"c22", stat_json(s22)}}},
            {"increment_mean", {{"x", stat_json(m1)}, {"y", stat_json(m2)}}},
            {"within_3se",
             {{"c11", within(s11, exact[0][0])},
              {"c12", within(s12, exact[0][1])},
              {"c22", within(s22, exact[1][1])}}},
        };
        report::write_json(dir + "/noise_sample.json", cfg, "noise-sample",
                           payload);

        // Lattice structure function along the x-axis.
        const std::vector<double> zs =
            geometric_grid(cfg.covariance.z_min, cfg.covariance.z_max,
                           cfg.covariance.z_per_decade, "z");
        std::vector<std::vector<double>> rows;
        for (double z : zs) {
            Mat2 q = model.structure_Q(z, 0.0);
            rows.push_back({z, q[0][0], q[0][1], q[1][1], q[0][0] + q[1][1]});
        }
        report::write_csv(dir + "/structure.csv", cfg, "lattice-structure",
                          {"z", "q11", "q12", "q22", "trace"}, rows);
        return 0;
    });
}

}  // namespace kgsq::cmd
