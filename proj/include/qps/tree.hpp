#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qps/cocycle.hpp"
#include "qps/parallel.hpp"
#include "qps/riccati.hpp"
#include "qps/rng.hpp"
#include "qps/torus.hpp"

namespace qps {

enum class DisorderKind { uniform, bernoulli, cauchy };

struct Disorder {
    DisorderKind kind = DisorderKind::uniform;
    double cauchy_scale = 1.0;

    double draw(rng::Stream& s) const {
        switch (kind) {
            case DisorderKind::uniform: return s.uniform_pm1();
            case DisorderKind::bernoulli: return s.bernoulli_pm1();
            case DisorderKind::cauchy: return s.cauchy(cauchy_scale);
        }
        return 0.0;
    }
};

struct TreeConfig {
    int branching = 2;        // K >= 2
    std::int64_t depth = 0;   // 0: auto from eta; else truncation generation
    double lambda = 0.0;
    Disorder disorder;
    bool radial = false;
    TorusPoint theta = TorusPoint::zero(1);
    FrequencyVector alpha = FrequencyVector::golden();
    TrigPotential pot = TrigPotential::zero(1);
    std::int64_t pool_size = 10000;
    par::Exec exec = par::Exec::openmp;
    int workers = 0;
};

enum class TreeMode { automatic, deterministic, full_tree, pool, radial };

struct GreenSampleBatch {
    ComplexEnergy z;
    TreeConfig config;
    std::uint64_t master_seed = 0;
    std::int64_t depth_used = 0;
    TreeMode mode_used = TreeMode::automatic;
    std::vector<Complex> samples;
    std::vector<std::uint64_t> sample_seeds;
};

std::int64_t default_tree_depth(double eta, int branching);
std::int64_t full_tree_vertex_limit();

// Root Green function samples of the depth-truncated tree operator. Forward
// values at generation `depth` are seeded at i; vertices at generations
// depth-1 .. 0 apply 1/(sqrt(K) U(S^g theta) + lambda w - z - sum_forward).
// lambda = 0 collapses to one deterministic value; radial disorder costs
// O(depth) per sample; non-radial uses the pool (population-dynamics)
// estimator unless full_tree is requested and K^depth is small enough.
GreenSampleBatch tree_green(const ComplexEnergy& z, const TreeConfig& config,
                            std::int64_t n_samples, std::uint64_t seed,
                            TreeMode mode = TreeMode::automatic);

// IQR(Im) + IQR(Re) of the sampled root values.
double distribution_width(const GreenSampleBatch& batch);

// CSV rows (sample_index, re_gamma, im_gamma, seed) preceded by the full
// TreeConfig as a '#'-prefixed JSON header comment.
std::string batch_csv(const GreenSampleBatch& batch);

struct WidthPoint {
    double lambda = 0.0;
    double width = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double median_im = 0.0;
    double median_ci_lo = 0.0;
    double median_ci_hi = 0.0;
};

// Widths with 1000-resample bootstrap CIs along a decreasing lambda schedule.
std::vector<WidthPoint> width_curve(const ComplexEnergy& z, const TreeConfig& config,
                                    std::span<const double> lambdas,
                                    std::int64_t n_samples, std::uint64_t seed);

WidthPoint width_point(const ComplexEnergy& z, const TreeConfig& config,
                       double lambda, std::int64_t n_samples, std::uint64_t seed);

// Lebesgue measure of {E in sqrt(K) I : median Im root-Green(E + i eta) >
// im_threshold} by grid quadrature. Rejects grids coarser than tolerance/4.
double ac_mass(Interval interval, const TreeConfig& config, double lambda, double eta,
               std::int64_t n_samples, double im_threshold, int grid_points,
               double tolerance, std::uint64_t seed);

}  // namespace qps
