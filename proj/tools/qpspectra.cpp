// qpspectra: config-driven experiment runner plus the built-in brute-force
// oracles used by the test suites.
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qps/bloch.hpp"
#include "qps/experiment.hpp"
#include "qps/format.hpp"
#include "qps/oracle.hpp"
#include "qps/stats.hpp"
#include "qps/tree.hpp"

namespace {

int env_workers() {
    if (const char* w = std::getenv("QPSPECTRA_WORKERS")) {
        const int v = std::atoi(w);
        if (v > 0) return v;
    }
    return 0;
}

int cmd_run(const std::string& path, const std::string& out, int workers,
            long long seed, bool has_seed) {
    const auto parsed = qps::parse_config_file(path);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) std::cerr << "error: " << e << "\n";
        return 2;
    }
    qps::RunOptions opts;
    opts.out_dir = out;
    opts.workers = workers;
    if (has_seed) opts.seed_override = std::uint64_t(seed);
    const auto report = qps::run_experiment(*parsed.config, opts);
    std::cout << "wrote " << report.out_dir << " (" << report.n_rows << " rows, "
              << report.row_errors.size() << " errors, " << qps::fmt_g(report.wall_ms)
              << " ms)\n";
    for (const auto& e : report.row_errors) std::cerr << "row error: " << e << "\n";
    return report.ok ? 0 : 1;
}

int cmd_validate(const std::string& path) {
    const auto parsed = qps::parse_config_file(path);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) std::cerr << "error: " << e << "\n";
        return 2;
    }
    std::cout << parsed.config->echo().dump(2) << "\n";
    return 0;
}

qps::TrigPotential pot_from_u(double u, bool zero) {
    return zero ? qps::TrigPotential::zero(1) : qps::TrigPotential::almost_mathieu(u);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-periodic spectra toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int workers = env_workers();
    long long seed = 0;
    bool has_seed = false;

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "JSON config file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "worker threads (0 = default)");
    auto* seed_opt = run->add_option("--seed", seed, "override the config seed");

    auto* validate = app.add_subcommand("validate", "validate a config and echo it");
    validate->add_option("config", config_path, "JSON config file")->required();

    auto* oracle = app.add_subcommand("oracle", "run a built-in brute-force oracle");
    std::string name;
    double u = 1.0, energy = 0.0, eta = 1e-2, lambda = 0.3, e_min = -3.0,
           e_max = 3.0, e_step = 0.01, theta = 0.0;
    long long size = 2000, depth = 10, n = 500, pool = 10000, n_steps = 100000;
    int k_branch = 2, min_count = 2;
    bool zero_pot = false;
    oracle->add_option("name", name,
                       "eigencount | coverage | free-green | fulltree-pool | thouless")
        ->required();
    oracle->add_option("--u", u, "almost Mathieu coupling");
    oracle->add_flag("--zero-potential", zero_pot, "use U = 0");
    oracle->add_option("--energy", energy, "energy E");
    oracle->add_option("--eta", eta, "imaginary part");
    oracle->add_option("--lambda", lambda, "disorder strength");
    oracle->add_option("--theta", theta, "torus point");
    oracle->add_option("--size", size, "truncation size");
    oracle->add_option("--depth", depth, "tree depth");
    oracle->add_option("--n", n, "sample count");
    oracle->add_option("--pool", pool, "pool size");
    oracle->add_option("--N", n_steps, "cocycle steps");
    oracle->add_option("--K", k_branch, "branching number");
    oracle->add_option("--min-count", min_count, "eigenvalues per covered cell");
    oracle->add_option("--emin", e_min, "grid min");
    oracle->add_option("--emax", e_max, "grid max");
    oracle->add_option("--estep", e_step, "grid step");
    oracle->add_option("--seed", seed, "rng seed");

    CLI11_PARSE(app, argc, argv);
    has_seed = seed_opt->count() > 0;
    // QPSPECTRA_WORKERS overrides --workers
    if (const int ew = env_workers(); ew > 0) workers = ew;

    if (run->parsed()) return cmd_run(config_path, out_dir, workers, seed, has_seed);
    if (validate->parsed()) return cmd_validate(config_path);

    // oracle subcommands
    const auto alpha = qps::FrequencyVector::golden();
    const qps::TorusPoint th({theta});
    try {
        if (name == "eigencount") {
            const auto pot = pot_from_u(u, zero_pot);
            const auto diag = qps::oracle::truncated_diagonal(pot, alpha, th, size);
            const int below = qps::oracle::eigencount_below(diag, energy);
            std::cout << "eigenvalues_below " << below << "\n"
                      << "ids " << qps::fmt_g(double(below) / double(size)) << "\n";
        } else if (name == "coverage") {
            const auto pot = pot_from_u(u, zero_pot);
            const auto diag = qps::oracle::truncated_diagonal(pot, alpha, th, size);
            const auto grid = qps::energy_grid(e_min, e_max, e_step);
            std::cout << "coverage_measure "
                      << qps::fmt_g(qps::oracle::spectrum_coverage_measure(
                             diag, grid, min_count))
                      << "\n";
        } else if (name == "free-green") {
            const auto g = qps::oracle::free_green({energy, eta});
            std::cout << "free_green " << qps::fmt_g(g.real()) << " "
                      << qps::fmt_g(g.imag()) << "\n";
        } else if (name == "fulltree-pool") {
            qps::TreeConfig tc;
            tc.branching = k_branch;
            tc.depth = depth;
            tc.lambda = lambda;
            tc.pot = pot_from_u(u, zero_pot);
            tc.theta = th;
            tc.pool_size = pool;
            const qps::ComplexEnergy z{energy, eta};
            const auto full = qps::tree_green(z, tc, n, std::uint64_t(seed) + 1,
                                              qps::TreeMode::full_tree);
            const auto pooled =
                qps::tree_green(z, tc, n, std::uint64_t(seed) + 1, qps::TreeMode::pool);
            auto med = [](const qps::GreenSampleBatch& b) {
                std::vector<double> im(b.samples.size());
                for (std::size_t i = 0; i < b.samples.size(); ++i)
                    im[i] = b.samples[i].imag();
                return qps::stats::median(std::move(im));
            };
            std::cout << "full_tree_median_im " << qps::fmt_g(med(full)) << "\n"
                      << "pool_median_im " << qps::fmt_g(med(pooled)) << "\n";
        } else if (name == "thouless") {
            const auto pot = pot_from_u(u, zero_pot);
            const auto grid = qps::energy_grid(e_min, e_max, e_step);
            qps::SweepOptions so;
            so.n_steps = n_steps;
            const auto sg =
                qps::sweep_cocycle(pot, alpha, th, grid, so);
            std::cout << "thouless_gamma "
                      << qps::fmt_g(qps::oracle::thouless_lyapunov(energy, grid,
                                                                   sg.ids_val))
                      << "\n";
        } else {
            std::cerr << "unknown oracle '" << name << "'\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "oracle failed: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
