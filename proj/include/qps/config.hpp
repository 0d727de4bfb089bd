#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qps/tree.hpp"

#include <json.hpp>

namespace qps {

enum class ExperimentKind {
    lyapunov_sweep,
    ids_sweep,
    ac_classify,
    green_probe,
    bf_diagnostics,
    tree_width,
    ac_mass,
    gap_labels,
};

std::string to_string(ExperimentKind k);

// Flat validated experiment description; defaults are materialized at parse
// time so the echoed config reproduces the run exactly.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::lyapunov_sweep;
    TrigPotential potential = TrigPotential::zero(1);
    FrequencyVector alpha = FrequencyVector::golden();
    TorusPoint theta0 = TorusPoint::zero(1);
    int m_check = 10000;
    std::uint64_t seed = 1;

    // energy selection
    double e_min = -3.0, e_max = 3.0, e_step = 0.01;
    std::vector<double> energies;  // explicit list; wins over the grid if set

    // cocycle sweeps
    std::int64_t n_steps = 100000;
    int n_phases = 1;
    double gamma_tol = 5e-3;

    // green / bf
    double eta = 1e-3;
    std::vector<double> eta_list;
    std::int64_t depth = 0;  // 0 = auto
    int grid_size = 512;
    int m_max = 50;
    double ids_tol = 2e-2;
    std::optional<double> field_energy;

    // tree
    int branching = 2;
    double lambda = 0.0;
    std::vector<double> lambda_list;
    Disorder disorder;
    bool radial = false;
    std::int64_t pool_size = 10000;
    std::int64_t n_samples = 2000;
    Interval interval{-2.0, 2.0};
    double im_threshold = 0.05;
    std::vector<double> im_threshold_list;
    int grid_points = 1024;
    double tolerance = 0.1;

    nlohmann::ordered_json echo() const;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty() && config.has_value(); }
};

// Strict parse: unknown keys are fatal, all validation errors are collected.
ParseResult parse_config(const std::string& text);
ParseResult parse_config_file(const std::string& path);

}  // namespace qps
