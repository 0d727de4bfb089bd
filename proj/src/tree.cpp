#include "qps/tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "qps/format.hpp"
#include "qps/stats.hpp"

namespace qps {

std::int64_t default_tree_depth(double eta, int branching) {
    const double d = std::ceil(20.0 * std::sqrt(double(branching)) / eta);
    return std::max<std::int64_t>(10000, std::int64_t(d));
}

std::int64_t full_tree_vertex_limit() { return std::int64_t(1) << 22; }

namespace {

// sqrt(K) U(S^g theta) for g = 0..depth-1, shared by every sample of a batch
std::vector<double> scaled_potential_orbit(const TreeConfig& cfg,
                                           std::int64_t depth) {
    auto orbit = orbit_sample(cfg.pot, cfg.theta, cfg.alpha, depth);
    const double s = std::sqrt(double(cfg.branching));
    for (auto& v : orbit) v *= s;
    return orbit;
}

Complex deterministic_root(const ComplexEnergy& z, std::span<const double> u,
                           std::int64_t depth, int k) {
    const Complex zc = z.value();
    Complex g{0.0, 1.0};
    for (std::int64_t gen = depth - 1; gen >= 0; --gen)
        g = 1.0 / (u[std::size_t(gen)] - zc - double(k) * g);
    return g;
}

// One stream per (sample, generation): deepening the truncation leaves the
// near-root draws untouched, so depth doubling only perturbs through the
// contracting far end.
Complex radial_root(const ComplexEnergy& z, std::span<const double> u,
                    std::int64_t depth, const TreeConfig& cfg, std::uint64_t seed,
                    std::int64_t sample) {
    const Complex zc = z.value();
    Complex g{0.0, 1.0};
    for (std::int64_t gen = depth - 1; gen >= 0; --gen) {
        rng::Stream st(seed, rng::Ctx::radial_gen,
                       (std::uint64_t(sample) << 32) | std::uint64_t(gen));
        const double w = cfg.lambda * cfg.disorder.draw(st);
        g = 1.0 / (u[std::size_t(gen)] + w - zc - double(cfg.branching) * g);
    }
    return g;
}

Complex full_tree_vertex(const ComplexEnergy& z, std::span<const double> u,
                         std::int64_t depth, const TreeConfig& cfg,
                         std::uint64_t seed, std::int64_t sample,
                         std::uint64_t vertex, std::int64_t gen) {
    if (gen == depth) return {0.0, 1.0};
    Complex forward{0.0, 0.0};
    for (int c = 0; c < cfg.branching; ++c)
        forward += full_tree_vertex(z, u, depth, cfg, seed, sample,
                                    vertex * std::uint64_t(cfg.branching) + 1 +
                                        std::uint64_t(c),
                                    gen + 1);
    rng::Stream st(seed, rng::Ctx::tree_vertex,
                   (std::uint64_t(sample) << 32) | vertex);
    const double w = cfg.lambda * cfg.disorder.draw(st);
    return 1.0 / (u[std::size_t(gen)] + w - z.value() - forward);
}

// Population-dynamics pool over generations depth-1 .. 1; callers then draw
// root samples against the final pool.
std::vector<Complex> run_pool(const ComplexEnergy& z, std::span<const double> u,
                              std::int64_t depth, const TreeConfig& cfg,
                              std::uint64_t seed) {
    const std::int64_t p = cfg.pool_size;
    if (p < 2) throw Error("tree pool size must be >= 2");
    std::vector<Complex> prev(std::size_t(p), Complex{0.0, 1.0});
    std::vector<Complex> next(static_cast<std::size_t>(p));
    const Complex zc = z.value();
    for (std::int64_t gen = depth - 1; gen >= 1; --gen) {
        par::for_index(p, cfg.exec, cfg.workers, [&](std::int64_t j) {
            const std::uint64_t unit =
                (std::uint64_t(gen) << 32) | std::uint64_t(j);
            rng::Stream omega(seed, rng::Ctx::pool_omega, unit);
            rng::Stream draw(seed, rng::Ctx::pool_draw, unit);
            Complex forward{0.0, 0.0};
            for (int c = 0; c < cfg.branching; ++c)
                forward += prev[std::size_t(draw.index_below(std::uint64_t(p)))];
            const double w = cfg.lambda * cfg.disorder.draw(omega);
            next[std::size_t(j)] =
                1.0 / (u[std::size_t(gen)] + w - zc - forward);
        });
        std::swap(prev, next);
    }
    return prev;
}

}  // namespace

GreenSampleBatch tree_green(const ComplexEnergy& z, const TreeConfig& config,
                            std::int64_t n_samples, std::uint64_t seed,
                            TreeMode mode) {
    if (z.eta <= 0.0) throw Error("tree_green needs eta > 0");
    if (n_samples < 1) throw Error("tree_green needs n_samples >= 1");
    if (config.branching < 2) throw Error("tree branching K must be >= 2");
    const std::int64_t depth =
        config.depth > 0 ? config.depth : default_tree_depth(z.eta, config.branching);

    if (mode == TreeMode::automatic) {
        if (config.lambda == 0.0)
            mode = TreeMode::deterministic;
        else if (config.radial)
            mode = TreeMode::radial;
        else
            mode = TreeMode::pool;
    }

    GreenSampleBatch batch;
    batch.z = z;
    batch.config = config;
    batch.master_seed = seed;
    batch.depth_used = depth;
    batch.mode_used = mode;
    batch.samples.resize(std::size_t(n_samples));
    batch.sample_seeds.resize(std::size_t(n_samples));
    for (std::int64_t s = 0; s < n_samples; ++s)
        batch.sample_seeds[std::size_t(s)] = seed ^ std::uint64_t(s);

    const auto u = scaled_potential_orbit(config, depth);
    const Complex zc = z.value();

    switch (mode) {
        case TreeMode::deterministic: {
            const Complex root = deterministic_root(z, u, depth, config.branching);
            std::fill(batch.samples.begin(), batch.samples.end(), root);
            break;
        }
        case TreeMode::radial: {
            par::for_index(n_samples, config.exec, config.workers,
                           [&](std::int64_t s) {
                               batch.samples[std::size_t(s)] =
                                   radial_root(z, u, depth, config, seed, s);
                           });
            break;
        }
        case TreeMode::full_tree: {
            double vertices = 1.0;
            for (std::int64_t g = 0; g < depth; ++g) {
                vertices *= double(config.branching);
                if (vertices > double(full_tree_vertex_limit()))
                    throw Error(
                        "full-tree evaluation of K^depth = " +
                        std::to_string(config.branching) + "^" +
                        std::to_string(depth) +
                        " vertices exceeds the memory bound; use the sampled-path "
                        "(pool) mode");
            }
            par::for_index(n_samples, config.exec, config.workers,
                           [&](std::int64_t s) {
                               batch.samples[std::size_t(s)] = full_tree_vertex(
                                   z, u, depth, config, seed, s, 0, 0);
                           });
            break;
        }
        case TreeMode::pool: {
            const auto pool = run_pool(z, u, depth, config, seed);
            const std::int64_t p = std::int64_t(pool.size());
            par::for_index(n_samples, config.exec, config.workers,
                           [&](std::int64_t s) {
                               rng::Stream omega(seed, rng::Ctx::root_omega,
                                                 std::uint64_t(s));
                               rng::Stream draw(seed, rng::Ctx::root_draw,
                                                std::uint64_t(s));
                               Complex forward{0.0, 0.0};
                               for (int c = 0; c < config.branching; ++c)
                                   forward += pool[std::size_t(
                                       draw.index_below(std::uint64_t(p)))];
                               const double w =
                                   config.lambda * config.disorder.draw(omega);
                               batch.samples[std::size_t(s)] =
                                   1.0 / (u[0] + w - zc - forward);
                           });
            break;
        }
        case TreeMode::automatic:
            break;  // unreachable
    }
    return batch;
}

double distribution_width(const GreenSampleBatch& batch) {
    if (batch.samples.size() < 2)
        throw Error("distribution_width needs >= 2 samples");
    std::vector<double> re(batch.samples.size()), im(batch.samples.size());
    for (std::size_t i = 0; i < batch.samples.size(); ++i) {
        re[i] = batch.samples[i].real();
        im[i] = batch.samples[i].imag();
    }
    return stats::iqr(std::move(im)) + stats::iqr(std::move(re));
}

std::string batch_csv(const GreenSampleBatch& batch) {
    nlohmann::ordered_json cfg;
    cfg["K"] = batch.config.branching;
    cfg["depth"] = batch.depth_used;
    cfg["lambda"] = batch.config.lambda;
    cfg["disorder"] = batch.config.disorder.kind == DisorderKind::uniform ? "uniform"
                      : batch.config.disorder.kind == DisorderKind::bernoulli
                          ? "bernoulli"
                          : "cauchy";
    cfg["cauchy_scale"] = batch.config.disorder.cauchy_scale;
    cfg["radial"] = batch.config.radial;
    cfg["theta"] = batch.config.theta.coords;
    cfg["alpha"] = batch.config.alpha.alpha;
    cfg["pool_size"] = batch.config.pool_size;
    cfg["energy"] = batch.z.e;
    cfg["eta"] = batch.z.eta;
    cfg["seed"] = batch.master_seed;
    cfg["mode"] = batch.mode_used == TreeMode::deterministic ? "deterministic"
                  : batch.mode_used == TreeMode::radial      ? "radial"
                  : batch.mode_used == TreeMode::full_tree   ? "full_tree"
                                                             : "pool";
    std::string out = "# " + cfg.dump() + "\n";
    out += "sample_index,re_gamma,im_gamma,seed\n";
    for (std::size_t i = 0; i < batch.samples.size(); ++i)
        out += std::to_string(i) + "," + fmt_g(batch.samples[i].real()) + "," +
               fmt_g(batch.samples[i].imag()) + "," +
               std::to_string(batch.sample_seeds[i]) + "\n";
    return out;
}

namespace {

// Bootstrap over complex samples: resamples index sets, applies stat.
template <typename Stat>
stats::Ci bootstrap_complex(std::span<const Complex> xs, Stat&& stat,
                            int n_resamples, std::uint64_t seed) {
    const std::size_t n = xs.size();
    std::vector<double> vals(static_cast<std::size_t>(n_resamples));
    std::vector<Complex> resample(n);
    for (int r = 0; r < n_resamples; ++r) {
        rng::Stream s(seed, rng::Ctx::bootstrap, std::uint64_t(r));
        for (std::size_t i = 0; i < n; ++i) resample[i] = xs[s.index_below(n)];
        vals[std::size_t(r)] = stat(std::span<const Complex>(resample));
    }
    std::sort(vals.begin(), vals.end());
    return {stats::quantile_sorted(vals, 0.025), stats::quantile_sorted(vals, 0.975)};
}

double width_stat(std::span<const Complex> xs) {
    std::vector<double> re(xs.size()), im(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        re[i] = xs[i].real();
        im[i] = xs[i].imag();
    }
    return stats::iqr(std::move(im)) + stats::iqr(std::move(re));
}

double median_im_stat(std::span<const Complex> xs) {
    std::vector<double> im(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) im[i] = xs[i].imag();
    return stats::median(std::move(im));
}

}  // namespace

WidthPoint width_point(const ComplexEnergy& z, const TreeConfig& config,
                       double lambda, std::int64_t n_samples, std::uint64_t seed) {
    TreeConfig cfg = config;
    cfg.lambda = lambda;
    const auto batch = tree_green(z, cfg, n_samples, seed);
    WidthPoint pt;
    pt.lambda = lambda;
    pt.width = distribution_width(batch);
    pt.median_im = median_im_stat(batch.samples);
    if (lambda == 0.0) {
        pt.ci_lo = pt.ci_hi = pt.width;
        pt.median_ci_lo = pt.median_ci_hi = pt.median_im;
    } else {
        const auto wci = bootstrap_complex(batch.samples, width_stat, 1000, seed);
        pt.ci_lo = wci.lo;
        pt.ci_hi = wci.hi;
        const auto mci = bootstrap_complex(batch.samples, median_im_stat, 1000, seed);
        pt.median_ci_lo = mci.lo;
        pt.median_ci_hi = mci.hi;
    }
    return pt;
}

std::vector<WidthPoint> width_curve(const ComplexEnergy& z, const TreeConfig& config,
                                    std::span<const double> lambdas,
                                    std::int64_t n_samples, std::uint64_t seed) {
    if (lambdas.empty()) throw Error("width_curve needs a lambda schedule");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (lambdas[i] > lambdas[i - 1])
            throw Error("width_curve lambda schedule must be sorted decreasing");
    std::vector<WidthPoint> out;
    out.reserve(lambdas.size());
    for (double l : lambdas) out.push_back(width_point(z, config, l, n_samples, seed));
    return out;
}

double ac_mass(Interval interval, const TreeConfig& config, double lambda, double eta,
               std::int64_t n_samples, double im_threshold, int grid_points,
               double tolerance, std::uint64_t seed) {
    if (eta <= 0.0) throw Error("ac_mass needs eta > 0");
    if (grid_points < 2) throw Error("ac_mass needs >= 2 grid points");
    const double root_k = std::sqrt(double(config.branching));
    const double lo = root_k * interval.lo;
    const double hi = root_k * interval.hi;
    const double step = (hi - lo) / double(grid_points - 1);
    if (step > tolerance / 4.0)
        throw Error("ac_mass grid resolution " + std::to_string(step) +
                    " is coarser than tolerance/4; increase grid_points");
    TreeConfig cfg = config;
    cfg.lambda = lambda;
    std::vector<std::uint8_t> covered(std::size_t(grid_points), 0);
    par::for_index(grid_points, config.exec, config.workers, [&](std::int64_t i) {
        const ComplexEnergy z{lo + double(i) * step, eta};
        TreeConfig local = cfg;
        local.exec = par::Exec::serial;  // outer loop already parallel
        const auto batch =
            tree_green(z, local, lambda == 0.0 ? 1 : n_samples, seed);
        covered[std::size_t(i)] = median_im_stat(batch.samples) > im_threshold;
    });
    std::int64_t count = 0;
    for (auto c : covered) count += c;
    return double(count) * step;
}

}  // namespace qps
