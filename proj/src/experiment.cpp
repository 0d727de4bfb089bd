#include "qps/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "qps/bloch.hpp"
#include "qps/format.hpp"
#include "qps/oracle.hpp"
#include "qps/riccati.hpp"
#include "qps/tree.hpp"

namespace qps {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string timestamp_dir() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::strftime(buf, sizeof buf, "qps_run_%Y%m%d_%H%M%S", &tm);
    return buf;
}

void write_file(const fs::path& path, const std::string& content,
                RunReport& report) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    report.files.push_back(path.filename().string());
}

std::string gnuplot_script(const std::string& csv, int xcol, int ycol,
                           const std::string& title) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += "set title '" + title + "'\n";
    s += "plot '" + csv + "' using " + std::to_string(xcol) + ":" +
         std::to_string(ycol) + " with lines\n";
    return s;
}

std::vector<double> pick_energies(const ExperimentConfig& cfg) {
    if (!cfg.energies.empty()) return cfg.energies;
    return energy_grid(cfg.e_min, cfg.e_max, cfg.e_step);
}

// theta0 variants for error-bar mode: phase 0 is the configured point, the
// rest are drawn from the seeded stream.
std::vector<TorusPoint> phase_points(const ExperimentConfig& cfg) {
    std::vector<TorusPoint> pts{cfg.theta0};
    for (int p = 1; p < cfg.n_phases; ++p) {
        rng::Stream st(cfg.seed, rng::Ctx::generic, std::uint64_t(p));
        std::vector<double> coords(std::size_t(cfg.alpha.dim()));
        for (auto& x : coords) x = two_pi * st.next_unit();
        pts.emplace_back(std::move(coords));
    }
    return pts;
}

struct SweepData {
    std::vector<double> energies;
    std::vector<double> gamma, gamma_spread;
    std::vector<double> ids, ids_spread;
    SpectralGrid grid;  // phase-0 grid used for classification
};

SweepData run_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
    SweepData d;
    d.energies = pick_energies(cfg);
    const auto phases = phase_points(cfg);
    SweepOptions so;
    so.n_steps = cfg.n_steps;
    so.with_ids = true;
    so.exec = opts.exec;
    so.workers = opts.workers;
    std::vector<SpectralGrid> grids;
    grids.reserve(phases.size());
    for (const auto& th : phases)
        grids.push_back(sweep_cocycle(cfg.potential, cfg.alpha, th, d.energies, so));
    const std::size_t n = d.energies.size();
    d.gamma.resize(n);
    d.gamma_spread.resize(n);
    d.ids.resize(n);
    d.ids_spread.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double gs = 0.0, gmin = 1e300, gmax = -1e300;
        double is = 0.0, imin = 1e300, imax = -1e300;
        for (const auto& g : grids) {
            gs += g.gamma[i];
            gmin = std::min(gmin, g.gamma[i]);
            gmax = std::max(gmax, g.gamma[i]);
            is += g.ids_val[i];
            imin = std::min(imin, g.ids_val[i]);
            imax = std::max(imax, g.ids_val[i]);
        }
        d.gamma[i] = gs / double(grids.size());
        d.gamma_spread[i] = gmax - gmin;
        d.ids[i] = is / double(grids.size());
        d.ids_spread[i] = imax - imin;
    }
    d.grid.energies = d.energies;
    d.grid.gamma = d.gamma;
    d.grid.ids_val = d.ids;
    return d;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg_in, const RunOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg = cfg_in;
    if (opts.seed_override) cfg.seed = *opts.seed_override;

    RunReport report;
    report.out_dir = opts.out_dir.empty() ? timestamp_dir() : opts.out_dir;
    fs::create_directories(report.out_dir);
    const fs::path dir(report.out_dir);

    write_file(dir / "config.json", cfg.echo().dump(2) + "\n", report);

    auto add_error = [&](const std::string& where, const std::exception& e) {
        report.row_errors.push_back(where + ": " + e.what());
        report.ok = false;
    };

    switch (cfg.kind) {
        case ExperimentKind::lyapunov_sweep:
        case ExperimentKind::ids_sweep: {
            const auto d = run_sweep(cfg, opts);
            std::string csv = cfg.kind == ExperimentKind::lyapunov_sweep
                                  ? "energy,gamma,gamma_spread\n"
                                  : "energy,ids,ids_spread\n";
            for (std::size_t i = 0; i < d.energies.size(); ++i) {
                csv += fmt_g(d.energies[i]) + ",";
                if (cfg.kind == ExperimentKind::lyapunov_sweep)
                    csv += fmt_g(d.gamma[i]) + "," + fmt_g(d.gamma_spread[i]);
                else
                    csv += fmt_g(d.ids[i]) + "," + fmt_g(d.ids_spread[i]);
                csv += "\n";
            }
            write_file(dir / "rows.csv", csv, report);
            write_file(dir / "plot.gp",
                       gnuplot_script("rows.csv", 1, 2, to_string(cfg.kind)), report);
            report.n_rows = int(d.energies.size());
            break;
        }
        case ExperimentKind::ac_classify: {
            auto d = run_sweep(cfg, opts);
            const auto cls = classify_ac(d.grid, cfg.gamma_tol);
            std::string csv = "energy,gamma,ids,ac\n";
            for (std::size_t i = 0; i < d.energies.size(); ++i)
                csv += fmt_g(d.energies[i]) + "," + fmt_g(d.gamma[i]) + "," +
                       fmt_g(d.ids[i]) + "," + std::to_string(int(d.grid.ac[i])) +
                       "\n";
            write_file(dir / "rows.csv", csv, report);
            std::string icsv = "e_lo,e_hi,length\n";
            for (const auto& iv : cls.intervals)
                icsv += fmt_g(iv.lo) + "," + fmt_g(iv.hi) + "," +
                        fmt_g(iv.length()) + "\n";
            write_file(dir / "intervals.csv", icsv, report);
            write_file(dir / "plot.gp",
                       gnuplot_script("rows.csv", 1, 2, "ac_classify"), report);
            report.summary["total_measure"] = cls.total_measure;
            report.summary["n_intervals"] = cls.intervals.size();
            report.n_rows = int(d.energies.size());
            break;
        }
        case ExperimentKind::gap_labels: {
            auto d = run_sweep(cfg, opts);
            const auto gaps = gap_labels(d.grid, cfg.alpha, cfg.gamma_tol, cfg.m_max);
            std::string csv = "e_lo,e_hi,ids,m,frac_m_alpha,distance,labeled\n";
            double worst = 0.0;
            for (const auto& g : gaps) {
                const bool labeled = g.distance < 1e-2;
                worst = std::max(worst, g.distance);
                csv += fmt_g(g.gap.lo) + "," + fmt_g(g.gap.hi) + "," +
                       fmt_g(g.ids_value) + "," +
                       (g.m.empty() ? "0" : std::to_string(g.m[0])) + "," +
                       fmt_g(g.frac_m_alpha) + "," + fmt_g(g.distance) + "," +
                       std::to_string(int(labeled)) + "\n";
            }
            write_file(dir / "gaps.csv", csv, report);
            write_file(dir / "plot.gp",
                       gnuplot_script("gaps.csv", 3, 6, "gap_labels"), report);
            report.summary["n_gaps"] = gaps.size();
            report.summary["max_label_distance"] = worst;
            report.n_rows = int(gaps.size());
            break;
        }
        case ExperimentKind::green_probe: {
            const auto energies = pick_energies(cfg);
            const auto etas =
                cfg.eta_list.empty() ? std::vector<double>{cfg.eta} : cfg.eta_list;
            std::string csv = "energy,eta,re_gamma,im_gamma,depth\n";
            int rows = 0;
            for (double eta : etas) {
                GreenOptions gopts;
                gopts.depth = cfg.depth;
                const std::int64_t depth_used =
                    cfg.depth > 0 ? cfg.depth : default_green_depth(eta);
                std::vector<std::string> cells(energies.size());
                std::vector<std::string> errs(energies.size());
                par::for_index(
                    std::int64_t(energies.size()), opts.exec, opts.workers,
                    [&](std::int64_t i) {
                        const ComplexEnergy z{energies[std::size_t(i)], eta};
                        try {
                            const Complex g = halfline_green(z, cfg.potential,
                                                             cfg.alpha, cfg.theta0,
                                                             gopts);
                            cells[std::size_t(i)] =
                                fmt_g(z.e) + "," + fmt_g(eta) + "," +
                                fmt_g(g.real()) + "," + fmt_g(g.imag()) + "," +
                                std::to_string(depth_used) + "\n";
                        } catch (const std::exception& e) {
                            errs[std::size_t(i)] = e.what();
                        }
                    });
                for (std::size_t i = 0; i < energies.size(); ++i) {
                    if (!errs[i].empty()) {
                        report.row_errors.push_back(
                            "green_probe E=" + fmt_g(energies[i]) +
                            " eta=" + fmt_g(eta) + ": " + errs[i]);
                        report.ok = false;
                    } else {
                        csv += cells[i];
                        ++rows;
                    }
                }
            }
            write_file(dir / "rows.csv", csv, report);
            write_file(dir / "plot.gp",
                       gnuplot_script("rows.csv", 1, 4, "green_probe"), report);
            if (cfg.field_energy) {
                try {
                    GreenOptions gopts;
                    gopts.depth = cfg.depth;
                    ComplexEnergy z{*cfg.field_energy, cfg.eta};
                    auto field =
                        make_green_field(z, cfg.potential, cfg.alpha, cfg.grid_size,
                                         gopts, opts.exec, opts.workers);
                    covariant_state(field, cfg.alpha);
                    write_file(dir / "field.csv", covariant_field_csv(field), report);
                } catch (const std::exception& e) {
                    add_error("green_probe field export", e);
                }
            }
            report.n_rows = rows;
            break;
        }
        case ExperimentKind::bf_diagnostics: {
            const auto energies = pick_energies(cfg);
            BfOptions bo;
            bo.grid_size = cfg.grid_size;
            bo.eta = cfg.eta;
            bo.green.depth = cfg.depth;
            bo.m_max = cfg.m_max;
            bo.ids_tol = cfg.ids_tol;
            bo.ids_steps = cfg.n_steps;
            bo.exec = opts.exec;
            bo.workers = opts.workers;
            std::string csv =
                "energy,k,dispersion,wronskian,reducibility_residual,"
                "resonance_distance_at_M,ids,check_passed\n";
            ordered_json arr = ordered_json::array();
            int rows = 0;
            for (double e : energies) {
                try {
                    const auto r = bf_diagnostics(e, cfg.potential, cfg.alpha,
                                                  cfg.theta0, bo);
                    csv += fmt_g(r.energy) + "," + fmt_g(r.k) + "," +
                           fmt_g(r.dispersion) + "," + fmt_g(r.wronskian_im) + "," +
                           fmt_g(r.reducibility_residual) + "," +
                           fmt_g(r.resonance_distance_at_m) + "," +
                           fmt_g(r.ids_value) + "," +
                           std::to_string(int(r.check_passed)) + "\n";
                    ordered_json o;
                    o["E"] = r.energy;
                    o["k"] = r.k;
                    o["dispersion"] = r.dispersion;
                    o["wronskian"] = r.wronskian_im;
                    o["reducibility_residual"] = r.reducibility_residual;
                    o["resonance_distance_at_M"] = r.resonance_distance_at_m;
                    o["ids"] = r.ids_value;
                    o["check_passed"] = r.check_passed;
                    arr.push_back(o);
                    ++rows;
                } catch (const std::exception& ex) {
                    add_error("bf_diagnostics E=" + fmt_g(e), ex);
                }
            }
            write_file(dir / "rows.csv", csv, report);
            write_file(dir / "bf_report.json", arr.dump(2) + "\n", report);
            write_file(dir / "plot.gp",
                       gnuplot_script("rows.csv", 1, 5, "bf_diagnostics"), report);
            report.n_rows = rows;
            break;
        }
        case ExperimentKind::tree_width: {
            const double energy = cfg.energies.empty() ? 0.5 : cfg.energies[0];
            const auto etas =
                cfg.eta_list.empty() ? std::vector<double>{cfg.eta} : cfg.eta_list;
            const auto lambdas = cfg.lambda_list.empty()
                                     ? std::vector<double>{cfg.lambda}
                                     : cfg.lambda_list;
            TreeConfig tc;
            tc.branching = cfg.branching;
            tc.depth = cfg.depth;
            tc.disorder = cfg.disorder;
            tc.radial = cfg.radial;
            tc.theta = cfg.theta0;
            tc.alpha = cfg.alpha;
            tc.pot = cfg.potential;
            tc.pool_size = cfg.pool_size;
            tc.exec = opts.exec;
            tc.workers = opts.workers;
            std::string csv =
                "lambda,width,ci_lo,ci_hi,eta,median_im,median_ci_lo,median_ci_hi\n";
            int rows = 0;
            for (std::size_t ei = 0; ei < etas.size(); ++ei) {
                const double eta = etas[ei];
                try {
                    const auto curve = width_curve(ComplexEnergy{energy, eta}, tc,
                                                   lambdas, cfg.n_samples, cfg.seed);
                    for (const auto& p : curve) {
                        csv += fmt_g(p.lambda) + "," + fmt_g(p.width) + "," +
                               fmt_g(p.ci_lo) + "," + fmt_g(p.ci_hi) + "," +
                               fmt_g(eta) + "," + fmt_g(p.median_im) + "," +
                               fmt_g(p.median_ci_lo) + "," + fmt_g(p.median_ci_hi) +
                               "\n";
                        ++rows;
                    }
                    for (std::size_t li = 0; li < lambdas.size(); ++li) {
                        TreeConfig bc = tc;
                        bc.lambda = lambdas[li];
                        const auto batch = tree_green(ComplexEnergy{energy, eta}, bc,
                                                      cfg.n_samples, cfg.seed);
                        write_file(dir / ("batch_l" + std::to_string(li) + "_e" +
                                          std::to_string(ei) + ".csv"),
                                   batch_csv(batch), report);
                    }
                } catch (const std::exception& ex) {
                    add_error("tree_width eta=" + fmt_g(eta), ex);
                }
            }
            write_file(dir / "widths.csv", csv, report);
            write_file(dir / "plot.gp",
                       gnuplot_script("widths.csv", 1, 3, "tree_width"), report);
            report.summary["energy"] = energy;
            report.n_rows = rows;
            break;
        }
        case ExperimentKind::ac_mass: {
            const auto lambdas = cfg.lambda_list.empty()
                                     ? std::vector<double>{cfg.lambda}
                                     : cfg.lambda_list;
            const auto etas =
                cfg.eta_list.empty() ? std::vector<double>{cfg.eta} : cfg.eta_list;
            const auto thresholds = cfg.im_threshold_list.empty()
                                        ? std::vector<double>{cfg.im_threshold}
                                        : cfg.im_threshold_list;
            TreeConfig tc;
            tc.branching = cfg.branching;
            tc.depth = cfg.depth;
            tc.disorder = cfg.disorder;
            tc.radial = cfg.radial;
            tc.theta = cfg.theta0;
            tc.alpha = cfg.alpha;
            tc.pot = cfg.potential;
            tc.pool_size = cfg.pool_size;
            tc.exec = opts.exec;
            tc.workers = opts.workers;
            std::string csv = "lambda,eta,im_threshold,mass\n";
            int rows = 0;
            for (double l : lambdas)
                for (double eta : etas)
                    for (double thr : thresholds) {
                        try {
                            const double m =
                                ac_mass(cfg.interval, tc, l, eta, cfg.n_samples, thr,
                                        cfg.grid_points, cfg.tolerance, cfg.seed);
                            csv += fmt_g(l) + "," + fmt_g(eta) + "," + fmt_g(thr) +
                                   "," + fmt_g(m) + "\n";
                            ++rows;
                        } catch (const std::exception& ex) {
                            add_error("ac_mass lambda=" + fmt_g(l) +
                                          " eta=" + fmt_g(eta),
                                      ex);
                        }
                    }
            write_file(dir / "mass.csv", csv, report);
            write_file(dir / "plot.gp", gnuplot_script("mass.csv", 1, 4, "ac_mass"),
                       report);
            report.n_rows = rows;
            break;
        }
    }

    const auto t1 = std::chrono::steady_clock::now();
    report.wall_ms =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() /
        1000.0;

    ordered_json rj;
    rj["experiment"] = to_string(cfg.kind);
    rj["version"] = version;
    rj["config"] = cfg.echo();
    rj["out_dir"] = report.out_dir;
    rj["n_rows"] = report.n_rows;
    rj["row_errors"] = report.row_errors;
    rj["files"] = report.files;
    rj["wall_ms"] = report.wall_ms;
    rj["workers"] = opts.workers;
    rj["seed"] = cfg.seed;
    rj["summary"] = report.summary.is_null() ? ordered_json::object() : report.summary;
    report.json = rj;
    {
        std::ofstream out(dir / "report.json", std::ios::binary);
        out << rj.dump(2) << "\n";
    }
    report.files.push_back("report.json");
    return report;
}

}  // namespace qps
